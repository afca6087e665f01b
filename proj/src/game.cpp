#include "hbi/game.hpp"

#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hbi/errors.hpp"
#include "hbi/rng.hpp"

namespace hbi {

namespace {

void check_n(int n) {
  if (n < 1 || n > Coalition::kMaxPlayers)
    throw std::invalid_argument("player count must be in [1, 64], got " + std::to_string(n));
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Game table_game(std::vector<double> payoffs) {
  if (payoffs.size() < 2 || !std::has_single_bit(payoffs.size()))
    throw std::invalid_argument("payoff table length must be a power of two >= 2");
  int n = std::countr_zero(payoffs.size());
  check_n(n);
  return {n, [table = std::move(payoffs)](Coalition c) { return table[c.bits]; }};
}

Game additive_game(std::vector<double> weights) {
  check_n(static_cast<int>(weights.size()));
  int n = static_cast<int>(weights.size());
  return {n, [w = std::move(weights)](Coalition c) {
            double sum = 0.0;
            for (int i : members(c)) sum += w[i];
            return sum;
          }};
}

Game unanimity_game(int n, Coalition target) {
  check_n(n);
  if (target.none()) throw std::invalid_argument("unanimity target must be non-empty");
  if (!target.subset_of(Coalition::all(n)))
    throw std::out_of_range("unanimity target has players outside the game");
  return {n, [target](Coalition c) { return target.subset_of(c) ? 1.0 : 0.0; }};
}

Game dictator_game(int n, int dictator) {
  check_n(n);
  if (dictator < 0 || dictator >= n) throw std::out_of_range("dictator index out of range");
  return {n, [dictator](Coalition c) { return c.contains(dictator) ? 1.0 : 0.0; }};
}

Game size_squared_game(int n) {
  check_n(n);
  return {n, [](Coalition c) {
            double s = static_cast<double>(c.size());
            return s * s;
          }};
}

Game random_table_game(int n, std::uint64_t seed) {
  check_n(n);
  if (n > 24) throw std::invalid_argument("random table too large, n must be <= 24");
  Rng rng(mix_seed(seed, 0));
  std::vector<double> table(1ULL << n);
  for (double& v : table) v = uniform(rng, -1.0, 1.0);
  return table_game(std::move(table));
}

Game load_payoff_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path.string(), 0, "empty file");
  ++line_no;
  if (trim(line) != "coalition_mask,value")
    throw ParseError(path.string(), line_no, "expected header \"coalition_mask,value\"");

  std::vector<double> values;
  std::vector<bool> seen;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t comma = t.find(',');
    if (comma == std::string::npos)
      throw ParseError(path.string(), line_no, "expected \"mask,value\"");
    unsigned long long mask = 0;
    double value = 0.0;
    try {
      std::size_t used = 0;
      mask = std::stoull(t.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("");
      std::string vs = trim(t.substr(comma + 1));
      value = std::stod(vs, &used);
      if (used != vs.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(path.string(), line_no, "malformed row: " + t);
    }
    if (mask >= values.size()) {
      values.resize(std::bit_ceil(mask + 1), 0.0);
      seen.resize(values.size(), false);
    }
    if (seen[mask]) throw ParseError(path.string(), line_no, "duplicate coalition mask " + std::to_string(mask));
    seen[mask] = true;
    values[mask] = value;
    ++count;
  }

  if (count < 2 || !std::has_single_bit(count))
    throw ParseError(path.string(), line_no, "table must contain 2^n rows, got " + std::to_string(count));
  if (count != values.size())
    throw ParseError(path.string(), line_no, "coalition masks must cover 0..2^n-1 exactly");
  return table_game(std::move(values));
}

}  // namespace hbi
