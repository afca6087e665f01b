#ifndef HBI_CROSS_MODAL_HPP
#define HBI_CROSS_MODAL_HPP

#include <span>
#include <utility>
#include <vector>

#include "hbi/alignment.hpp"
#include "hbi/banzhaf.hpp"
#include "hbi/game.hpp"

namespace hbi {

/// The cross-modal coalition game. Players 0..N_v-1 are frames, players
/// N_v..N_v+N_t-1 are words; the characteristic function is the restricted
/// weighted-max similarity, which is exactly 0 for any coalition missing a
/// modality.
struct CrossModalGame {
  AlignmentMatrix alignment;
  std::vector<double> weights_v;
  std::vector<double> weights_t;

  int n_v() const { return alignment.n_v(); }
  int n_t() const { return alignment.n_t(); }
  int players() const { return n_v() + n_t(); }

  int frame_player(int frame) const { return frame; }
  int word_player(int word) const { return n_v() + word; }

  /// View of this object as a generic Game (copies the alignment into the
  /// evaluator; safe to share across threads).
  Game as_game() const;
};

CrossModalGame make_cross_modal_game(AlignmentMatrix alignment,
                                     std::vector<double> weights_v = {},
                                     std::vector<double> weights_t = {});

/// Half the sum of the frame-side and word-side weighted maximum alignment
/// scores. Weights are renormalized over the indices actually present, so
/// the score is a proper weighted average of cosines on any support.
double similarity(const AlignmentMatrix& alignment, std::span<const double> weights_v,
                  std::span<const double> weights_t);

/// The characteristic function: similarity evaluated on the coalition's
/// frames and words with surviving weights renormalized per modality.
/// Returns exactly 0 when either modality is absent. Total over all
/// coalitions.
double restricted_similarity(const CrossModalGame& game, Coalition coalition);

/// Per-pair diagnostic for the characteristic-function criteria. `value` is
/// the Banzhaf value of the pair acting as one merged player minus the sum
/// of the members' individual Banzhaf values with the partner removed; by
/// the recursive decomposition this equals the pairwise interaction, and the
/// report carries its negation so that a well-corresponding pair shows a
/// negative entry.
struct PairDiagnostic {
  int frame = -1;
  int word = -1;
  double value = 0.0;        // -interaction
  double interaction = 0.0;  // exact Banzhaf Interaction of the pair
  bool sign_ok = false;
};

struct CriterionReport {
  bool zero_without_cooperation = true;  // criterion (c), asserted exactly
  int zero_checks = 0;
  std::vector<PairDiagnostic> positives;  // criterion (a): value < 0 expected
  std::vector<PairDiagnostic> negatives;  // criterion (b): value > 0 expected
  bool all_signs_ok() const;
};

/// Pairs are (frame index, word index) within their modalities. Exact
/// enumeration: subject to the cap.
CriterionReport criterion_report(const CrossModalGame& game,
                                 std::span<const std::pair<int, int>> positive_pairs,
                                 std::span<const std::pair<int, int>> negative_pairs,
                                 int cap = kDefaultExactCap);

}  // namespace hbi

#endif
