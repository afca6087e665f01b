#ifndef HBI_MONTE_CARLO_HPP
#define HBI_MONTE_CARLO_HPP

#include <cstdint>
#include <span>

#include "hbi/banzhaf.hpp"
#include "hbi/game.hpp"

namespace hbi {

struct McConfig {
  int samples = 1024;
  std::uint64_t seed = 0;
  bool antithetic = false;
};

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  int i = -1;
  int j = -1;
};

/// Unbiased estimate of the pairwise Banzhaf Interaction. Coalitions avoiding
/// {i,j} are drawn by including each remaining player independently with
/// probability 1/2, the exact sampling measure of the definition. std_error
/// is the sample standard deviation over the square root of the draw count
/// (0 when a single draw gives no dispersion estimate).
///
/// With antithetic enabled, every drawn coalition is paired with its
/// complement within the remaining players; the estimate averages the
/// cfg.samples independent pair means.
McResult mc_interaction(const Game& game, int i, int j, const McConfig& cfg);

/// Per-entry streams are derived from (cfg.seed, row-major entry index), so
/// the matrix is identical no matter how entries are scheduled. When
/// `std_errors` is given it receives the per-entry standard errors.
InteractionMap mc_interaction_matrix(const Game& game, std::span<const int> left,
                                     std::span<const int> right, const McConfig& cfg,
                                     Mat* std_errors = nullptr);

}  // namespace hbi

#endif
