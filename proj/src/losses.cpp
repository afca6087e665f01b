#include "hbi/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hbi {

namespace {

void check_finite(const Mat& m, const char* what) {
  for (double v : m.data)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

void check_batch(const BatchSimilarities& batch) {
  if (batch.s.rows < 1 || batch.s.rows != batch.s.cols)
    throw std::invalid_argument("batch similarity matrix must be square and non-empty");
  if (!(batch.tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  check_finite(batch.s, "batch similarity");
}

// Strided view over a row or column of a Mat, as raw logits.
struct Slice {
  const double* base;
  int stride;
  int len;
  double operator[](int k) const { return base[static_cast<std::size_t>(k) * stride]; }
};

Slice row_of(const Mat& m, int r) { return {m.data.data() + static_cast<std::size_t>(r) * m.cols, 1, m.cols}; }
Slice col_of(const Mat& m, int c) { return {m.data.data() + c, m.cols, m.rows}; }

double logsumexp(Slice x, double scale) {
  double top = x[0] * scale;
  for (int k = 1; k < x.len; ++k) top = std::max(top, x[k] * scale);
  double total = 0.0;
  for (int k = 0; k < x.len; ++k) total += std::exp(x[k] * scale - top);
  return top + std::log(total);
}

// log-probabilities of softmax(scale * x).
std::vector<double> log_softmax(Slice x, double scale) {
  double lse = logsumexp(x, scale);
  std::vector<double> out(static_cast<std::size_t>(x.len));
  for (int k = 0; k < x.len; ++k) out[k] = x[k] * scale - lse;
  return out;
}

double kl_from_logits(Slice p_logits, Slice q_logits, double scale) {
  std::vector<double> lp = log_softmax(p_logits, scale);
  std::vector<double> lq = log_softmax(q_logits, scale);
  double kl = 0.0;
  for (int k = 0; k < p_logits.len; ++k) kl += std::exp(lp[k]) * (lp[k] - lq[k]);
  return kl;
}

}  // namespace

double contrastive_loss(const BatchSimilarities& batch) {
  check_batch(batch);
  const int b = batch.s.rows;
  const double inv_tau = 1.0 / batch.tau;
  double loss = 0.0;
  for (int k = 0; k < b; ++k) {
    double diag = batch.s(k, k) * inv_tau;
    loss += diag - logsumexp(row_of(batch.s, k), inv_tau);
    loss += diag - logsumexp(col_of(batch.s, k), inv_tau);
  }
  return -0.5 * loss / b;
}

Mat contrastive_loss_grad(const BatchSimilarities& batch) {
  check_batch(batch);
  const int b = batch.s.rows;
  const double inv_tau = 1.0 / batch.tau;
  Mat grad(b, b);
  for (int k = 0; k < b; ++k) {
    std::vector<double> lr = log_softmax(row_of(batch.s, k), inv_tau);
    std::vector<double> lc = log_softmax(col_of(batch.s, k), inv_tau);
    for (int l = 0; l < b; ++l) {
      grad(k, l) += std::exp(lr[l]);  // row-softmax term
      grad(l, k) += std::exp(lc[l]);  // column-softmax term
    }
    grad(k, k) -= 2.0;
  }
  const double scale = 0.5 * inv_tau / b;
  for (double& g : grad.data) g *= scale;
  return grad;
}

Distributions interaction_distributions(const Mat& map) {
  check_finite(map, "interaction map");
  Distributions d{Mat(map.rows, map.cols), Mat(map.rows, map.cols)};
  for (int i = 0; i < map.rows; ++i) {
    std::vector<double> lp = log_softmax(row_of(map, i), 1.0);
    for (int j = 0; j < map.cols; ++j) d.v2t(i, j) = std::exp(lp[j]);
  }
  for (int j = 0; j < map.cols; ++j) {
    std::vector<double> lp = log_softmax(col_of(map, j), 1.0);
    for (int i = 0; i < map.rows; ++i) d.t2v(i, j) = std::exp(lp[i]);
  }
  return d;
}

double banzhaf_interaction_loss(const Mat& r, const Mat& i) {
  if (!r.same_shape(i)) throw std::invalid_argument("relationship and interaction shapes differ");
  check_finite(r, "relationship map");
  check_finite(i, "interaction map");
  double loss = 0.0;
  for (int a = 0; a < r.rows; ++a) loss += kl_from_logits(row_of(r, a), row_of(i, a), 1.0) / r.rows;
  for (int b = 0; b < r.cols; ++b) loss += kl_from_logits(col_of(r, b), col_of(i, b), 1.0) / r.cols;
  return loss;
}

namespace {

// d/dp_logits KL(softmax(p) || softmax(q)) = p .* (u - KL), u = log p - log q.
void add_kl_grad_first(Slice p_logits, Slice q_logits, double scale, double weight, double* out,
                       int out_stride) {
  std::vector<double> lp = log_softmax(p_logits, scale);
  std::vector<double> lq = log_softmax(q_logits, scale);
  double kl = 0.0;
  for (int k = 0; k < p_logits.len; ++k) kl += std::exp(lp[k]) * (lp[k] - lq[k]);
  for (int k = 0; k < p_logits.len; ++k)
    out[static_cast<std::size_t>(k) * out_stride] +=
        weight * scale * std::exp(lp[k]) * ((lp[k] - lq[k]) - kl);
}

// d/dq_logits KL(softmax(p) || softmax(q)) = q - p.
void add_kl_grad_second(Slice p_logits, Slice q_logits, double scale, double weight, double* out,
                        int out_stride) {
  std::vector<double> lp = log_softmax(p_logits, scale);
  std::vector<double> lq = log_softmax(q_logits, scale);
  for (int k = 0; k < p_logits.len; ++k)
    out[static_cast<std::size_t>(k) * out_stride] +=
        weight * scale * (std::exp(lq[k]) - std::exp(lp[k]));
}

}  // namespace

Mat banzhaf_interaction_loss_grad_r(const Mat& r, const Mat& i) {
  if (!r.same_shape(i)) throw std::invalid_argument("relationship and interaction shapes differ");
  Mat grad(r.rows, r.cols);
  for (int a = 0; a < r.rows; ++a)
    add_kl_grad_first(row_of(r, a), row_of(i, a), 1.0, 1.0 / r.rows,
                      grad.data.data() + static_cast<std::size_t>(a) * r.cols, 1);
  for (int b = 0; b < r.cols; ++b)
    add_kl_grad_first(col_of(r, b), col_of(i, b), 1.0, 1.0 / r.cols, grad.data.data() + b, r.cols);
  return grad;
}

Mat banzhaf_interaction_loss_grad_i(const Mat& r, const Mat& i) {
  if (!r.same_shape(i)) throw std::invalid_argument("relationship and interaction shapes differ");
  Mat grad(r.rows, r.cols);
  for (int a = 0; a < r.rows; ++a)
    add_kl_grad_second(row_of(r, a), row_of(i, a), 1.0, 1.0 / r.rows,
                       grad.data.data() + static_cast<std::size_t>(a) * r.cols, 1);
  for (int b = 0; b < r.cols; ++b)
    add_kl_grad_second(col_of(r, b), col_of(i, b), 1.0, 1.0 / r.cols, grad.data.data() + b, r.cols);
  return grad;
}

double level_loss(const BatchSimilarities& batch, const Mat& r, const Mat& i, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
  return contrastive_loss(batch) + alpha * banzhaf_interaction_loss(r, i);
}

double distillation_loss(const BatchSimilarities& student, const BatchSimilarities& teacher) {
  check_batch(student);
  check_batch(teacher);
  if (!student.s.same_shape(teacher.s) || student.tau != teacher.tau)
    throw std::invalid_argument("student and teacher batches must share shape and temperature");
  const int b = student.s.rows;
  const double inv_tau = 1.0 / student.tau;
  double loss = 0.0;
  for (int k = 0; k < b; ++k) {
    loss += kl_from_logits(row_of(student.s, k), row_of(teacher.s, k), inv_tau) / b;
    loss += kl_from_logits(col_of(student.s, k), col_of(teacher.s, k), inv_tau) / b;
  }
  return loss;
}

namespace {

void check_distill_pair(const BatchSimilarities& student, const BatchSimilarities& teacher) {
  check_batch(student);
  check_batch(teacher);
  if (!student.s.same_shape(teacher.s) || student.tau != teacher.tau)
    throw std::invalid_argument("student and teacher batches must share shape and temperature");
}

}  // namespace

Mat distillation_loss_grad_student(const BatchSimilarities& student,
                                   const BatchSimilarities& teacher) {
  check_distill_pair(student, teacher);
  const int b = student.s.rows;
  const double inv_tau = 1.0 / student.tau;
  Mat grad(b, b);
  for (int k = 0; k < b; ++k) {
    add_kl_grad_first(row_of(student.s, k), row_of(teacher.s, k), inv_tau, 1.0 / b,
                      grad.data.data() + static_cast<std::size_t>(k) * b, 1);
    add_kl_grad_first(col_of(student.s, k), col_of(teacher.s, k), inv_tau, 1.0 / b,
                      grad.data.data() + k, b);
  }
  return grad;
}

Mat distillation_loss_grad_teacher(const BatchSimilarities& student,
                                   const BatchSimilarities& teacher) {
  check_distill_pair(student, teacher);
  const int b = student.s.rows;
  const double inv_tau = 1.0 / student.tau;
  Mat grad(b, b);
  for (int k = 0; k < b; ++k) {
    add_kl_grad_second(row_of(student.s, k), row_of(teacher.s, k), inv_tau, 1.0 / b,
                       grad.data.data() + static_cast<std::size_t>(k) * b, 1);
    add_kl_grad_second(col_of(student.s, k), col_of(teacher.s, k), inv_tau, 1.0 / b,
                       grad.data.data() + k, b);
  }
  return grad;
}

double total_loss(double entity_level, double action_level, double event_level, double distill_e2a,
                  double distill_e2o, double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  return entity_level + action_level + event_level + beta * (distill_e2a + distill_e2o);
}

}  // namespace hbi
