#include "hbi/banzhaf.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbi/errors.hpp"

namespace hbi {

namespace {

void check_player(const Game& game, int i) {
  if (i < 0 || i >= game.n)
    throw std::out_of_range("player index " + std::to_string(i) + " out of range for n=" +
                            std::to_string(game.n));
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::monte_carlo: return "monte_carlo";
    case Method::surrogate: return "surrogate";
  }
  return "unknown";
}

double banzhaf_value_within(const Game& game, int i, Coalition support, int cap) {
  check_player(game, i);
  if (!support.contains(i)) throw std::invalid_argument("support does not contain the player");
  if (!support.subset_of(Coalition::all(game.n)))
    throw std::out_of_range("support has players outside the game");
  if (support.size() > cap) throw CapExceeded(support.size(), cap);

  const std::uint64_t others = support.without(i).bits;
  const int m = std::popcount(others);
  double sum = 0.0;
  std::uint64_t terms = 0;
  // Walks every submask of `others`, descending, ending at the empty set.
  for (std::uint64_t sub = others;; sub = (sub - 1) & others) {
    Coalition c{sub};
    sum += game.value(c.with(i)) - game.value(c);
    ++terms;
    if (sub == 0) break;
  }
  assert(terms == (1ULL << m));
  (void)terms;
  return std::ldexp(sum, -m);  // sum / 2^m, exact scaling
}

double banzhaf_value(const Game& game, int i, int cap) {
  if (game.n > cap) throw CapExceeded(game.n, cap);
  return banzhaf_value_within(game, i, Coalition::all(game.n), cap);
}

InteractionResult banzhaf_interaction_exact(const Game& game, int i, int j, int cap) {
  check_player(game, i);
  check_player(game, j);
  if (i == j) throw std::invalid_argument("interaction needs two distinct players");
  if (game.n > cap) throw CapExceeded(game.n, cap);

  const std::uint64_t others = Coalition::all(game.n).without(i).without(j).bits;
  const int m = std::popcount(others);  // n - 2
  double sum = 0.0;
  std::uint64_t terms = 0;
  for (std::uint64_t sub = others;; sub = (sub - 1) & others) {
    Coalition c{sub};
    sum += game.value(c.with(i).with(j)) + game.value(c) - game.value(c.with(i)) -
           game.value(c.with(j));
    ++terms;
    if (sub == 0) break;
  }
  assert(terms == (1ULL << m));
  (void)terms;
  return {std::ldexp(sum, -m), i, j, Method::exact};
}

Game reduced_game(const Game& game, Coalition merged) {
  if (merged.none()) throw std::invalid_argument("reduced_game needs a non-empty coalition");
  if (!merged.subset_of(Coalition::all(game.n)))
    throw std::out_of_range("coalition has players outside the game");

  std::vector<int> survivors = members(Coalition::all(game.n).minus(merged));
  const int reduced_n = static_cast<int>(survivors.size()) + 1;
  Game out;
  out.n = reduced_n;
  out.value = [base = game.value, survivors = std::move(survivors), merged_bits = merged.bits,
               reduced_n](Coalition c) {
    std::uint64_t expanded = 0;
    for (int k = 0; k + 1 < reduced_n; ++k)
      if (c.contains(k)) expanded |= 1ULL << survivors[k];
    if (c.contains(reduced_n - 1)) expanded |= merged_bits;
    return base(Coalition{expanded});
  };
  return out;
}

InteractionMap interaction_matrix_exact(const Game& game, std::span<const int> left,
                                        std::span<const int> right, int cap) {
  Coalition seen;
  for (int p : left) {
    check_player(game, p);
    if (seen.contains(p)) throw std::invalid_argument("player lists overlap or repeat");
    seen = seen.with(p);
  }
  for (int p : right) {
    check_player(game, p);
    if (seen.contains(p)) throw std::invalid_argument("player lists overlap or repeat");
    seen = seen.with(p);
  }

  InteractionMap map;
  map.method = Method::exact;
  map.values = Mat(static_cast<int>(left.size()), static_cast<int>(right.size()));
  // Entries are independent; any parallel schedule would produce the same
  // matrix. Sizes here never justify threads.
  for (int a = 0; a < map.values.rows; ++a)
    for (int b = 0; b < map.values.cols; ++b)
      map.values(a, b) = banzhaf_interaction_exact(game, left[a], right[b], cap).value;
  return map;
}

}  // namespace hbi
