#ifndef HBI_GAME_HPP
#define HBI_GAME_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "hbi/coalition.hpp"

namespace hbi {

/// A finite cooperative game: a player count and a characteristic function
/// mapping every coalition to a real payoff. Evaluators must be total over
/// all 2^n coalitions, deterministic, and safe to call from several threads
/// at once.
struct Game {
  int n = 0;
  std::function<double(Coalition)> value;
};

/// Game backed by an explicit payoff table. The table index is the coalition
/// bitmask (little-endian: bit i of the index is player i), so its length
/// must be a power of two; n = log2(length).
Game table_game(std::vector<double> payoffs);

/// phi(S) = sum of w_i over i in S.
Game additive_game(std::vector<double> weights);

/// phi(S) = 1 iff S contains every player of `target`, else 0.
Game unanimity_game(int n, Coalition target);

/// phi(S) = 1 iff the dictator is in S.
Game dictator_game(int n, int dictator);

/// phi(S) = |S|^2.
Game size_squared_game(int n);

/// Payoff table with i.i.d. uniform [-1, 1) entries from a seeded generator.
Game random_table_game(int n, std::uint64_t seed);

/// Loads a payoff-table game from CSV with header "coalition_mask,value";
/// all 2^n masks must appear exactly once. Throws ParseError with the
/// offending line number.
Game load_payoff_csv(const std::filesystem::path& path);

}  // namespace hbi

#endif
