#ifndef HBI_LOSSES_HPP
#define HBI_LOSSES_HPP

#include "hbi/matrix.hpp"

namespace hbi {

inline constexpr double kDefaultTau = 0.01;
inline constexpr double kDefaultAlpha = 1.0;
inline constexpr double kDefaultBeta = 2.0;

/// Batch similarity logits: s(k, l) is the score of video k against text l;
/// the diagonal holds the matched pairs.
struct BatchSimilarities {
  Mat s;  // B x B
  double tau = kDefaultTau;
};

/// Row softmax of a map (video-to-text) and column softmax (text-to-video).
struct Distributions {
  Mat v2t;  // rows sum to 1
  Mat t2v;  // columns sum to 1
};

/// Symmetric InfoNCE over the batch at temperature tau, averaged with 1/B.
/// Log-sum-exp stable for |s|/tau up to at least 1e5.
double contrastive_loss(const BatchSimilarities& batch);
Mat contrastive_loss_grad(const BatchSimilarities& batch);

Distributions interaction_distributions(const Mat& map);

/// Mean over rows of KL(row-softmax(r) || row-softmax(i)) plus mean over
/// columns of the column-softmax KL. The predicted relationship r is the
/// first KL argument.
double banzhaf_interaction_loss(const Mat& r, const Mat& i);
Mat banzhaf_interaction_loss_grad_r(const Mat& r, const Mat& i);
Mat banzhaf_interaction_loss_grad_i(const Mat& r, const Mat& i);

/// contrastive + alpha * interaction KL.
double level_loss(const BatchSimilarities& batch, const Mat& r, const Mat& i, double alpha);

/// KL from the student's batch distributions (first argument) to the
/// teacher's, both built as softmax over batch candidates at the shared
/// temperature, averaged over rows and columns.
double distillation_loss(const BatchSimilarities& student, const BatchSimilarities& teacher);
Mat distillation_loss_grad_student(const BatchSimilarities& student,
                                   const BatchSimilarities& teacher);
Mat distillation_loss_grad_teacher(const BatchSimilarities& student,
                                   const BatchSimilarities& teacher);

/// L^e + L^a + L^o + beta * (L_D^{e->a} + L_D^{e->o}).
double total_loss(double entity_level, double action_level, double event_level,
                  double distill_e2a, double distill_e2o, double beta);

}  // namespace hbi

#endif
