#ifndef HBI_TESTS_ORACLES_HPP
#define HBI_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. They stay
// deliberately naive and share no code with the optimized paths they check:
// coalitions are built from index lists and the probability factor is applied
// per term through std::pow.

#include <cmath>
#include <vector>

#include "hbi/game.hpp"

namespace hbi::oracle {

inline Coalition from_indices(const std::vector<int>& players, unsigned long long mask) {
  Coalition c;
  for (std::size_t k = 0; k < players.size(); ++k)
    if (mask & (1ULL << k)) c = c.with(players[k]);
  return c;
}

inline double naive_banzhaf_interaction(const Game& game, int i, int j) {
  std::vector<int> others;
  for (int p = 0; p < game.n; ++p)
    if (p != i && p != j) others.push_back(p);
  const double p_c = std::pow(2.0, -static_cast<double>(others.size()));
  double sum = 0.0;
  for (unsigned long long mask = 0; mask < (1ULL << others.size()); ++mask) {
    Coalition c = from_indices(others, mask);
    double term = game.value(c.with(i).with(j)) + game.value(c) - game.value(c.with(i)) -
                  game.value(c.with(j));
    sum += p_c * term;
  }
  return sum;
}

inline double naive_banzhaf_value(const Game& game, int i) {
  std::vector<int> others;
  for (int p = 0; p < game.n; ++p)
    if (p != i) others.push_back(p);
  const double p_c = std::pow(2.0, -static_cast<double>(others.size()));
  double sum = 0.0;
  for (unsigned long long mask = 0; mask < (1ULL << others.size()); ++mask) {
    Coalition c = from_indices(others, mask);
    sum += p_c * (game.value(c.with(i)) - game.value(c));
  }
  return sum;
}

}  // namespace hbi::oracle

#endif
