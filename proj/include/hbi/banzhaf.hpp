#ifndef HBI_BANZHAF_HPP
#define HBI_BANZHAF_HPP

#include <span>

#include "hbi/game.hpp"
#include "hbi/matrix.hpp"

namespace hbi {

/// At the default cap an exact pairwise interaction costs 4 * 2^18 payoff
/// evaluations. Beyond it the exact operations throw CapExceeded instead of
/// silently degrading to sampling.
inline constexpr int kDefaultExactCap = 20;

enum class Method { exact, monte_carlo, surrogate };

const char* method_name(Method m);

struct InteractionResult {
  double value = 0.0;
  int i = -1;
  int j = -1;
  Method method = Method::exact;
};

/// Pairwise interaction values for a block of player pairs; rows follow the
/// caller's `left` list, columns the `right` list.
struct InteractionMap {
  Mat values;
  Method method = Method::exact;
};

/// Average marginal contribution of player i over all coalitions formed
/// without it: sum over C of (phi(C u {i}) - phi(C)) / 2^(n-1).
double banzhaf_value(const Game& game, int i, int cap = kDefaultExactCap);

/// Banzhaf value of i in the sub-game induced on `support` (which must
/// contain i). Player indices are not renumbered; coalitions simply never
/// include players outside the support.
double banzhaf_value_within(const Game& game, int i, Coalition support,
                            int cap = kDefaultExactCap);

/// Pairwise Banzhaf Interaction: sum over C avoiding {i,j} of
/// (phi(C u {i,j}) + phi(C) - phi(C u {i}) - phi(C u {j})) / 2^(n-2).
/// The hypothetical merged player [{i,j}] is evaluated as the union.
InteractionResult banzhaf_interaction_exact(const Game& game, int i, int j,
                                            int cap = kDefaultExactCap);

/// Game over n - |merged| + 1 players in which the merged block acts as one
/// player. The block player is placed last; surviving players keep their
/// relative order.
Game reduced_game(const Game& game, Coalition merged);

/// Entry (a, b) = banzhaf_interaction_exact(game, left[a], right[b]).
/// `left` and `right` must be disjoint.
InteractionMap interaction_matrix_exact(const Game& game, std::span<const int> left,
                                        std::span<const int> right,
                                        int cap = kDefaultExactCap);

}  // namespace hbi

#endif
