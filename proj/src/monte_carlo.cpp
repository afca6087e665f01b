#include "hbi/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hbi/rng.hpp"

namespace hbi {

namespace {

double four_term(const Game& game, int i, int j, Coalition c) {
  return game.value(c.with(i).with(j)) + game.value(c) - game.value(c.with(i)) -
         game.value(c.with(j));
}

}  // namespace

McResult mc_interaction(const Game& game, int i, int j, const McConfig& cfg) {
  if (i < 0 || i >= game.n || j < 0 || j >= game.n)
    throw std::out_of_range("player index out of range");
  if (i == j) throw std::invalid_argument("interaction needs two distinct players");
  if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");

  const std::uint64_t others = Coalition::all(game.n).without(i).without(j).bits;
  Rng rng(cfg.seed);

  // Welford accumulation in draw order; one value per draw (the pair mean
  // when antithetic), so draws stay i.i.d. for the error estimate.
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    Coalition c{rng() & others};
    double value = four_term(game, i, j, c);
    if (cfg.antithetic) {
      Coalition complement{others & ~c.bits};
      value = 0.5 * (value + four_term(game, i, j, complement));
    }
    double d = value - mean;
    mean += d / (s + 1);
    m2 += d * (value - mean);
  }

  McResult out;
  out.i = i;
  out.j = j;
  out.estimate = mean;
  out.std_error = cfg.samples > 1
                      ? std::sqrt(m2 / (static_cast<double>(cfg.samples) - 1.0) / cfg.samples)
                      : 0.0;
  return out;
}

InteractionMap mc_interaction_matrix(const Game& game, std::span<const int> left,
                                     std::span<const int> right, const McConfig& cfg,
                                     Mat* std_errors) {
  InteractionMap map;
  map.method = Method::monte_carlo;
  map.values = Mat(static_cast<int>(left.size()), static_cast<int>(right.size()));
  if (std_errors) *std_errors = Mat(map.values.rows, map.values.cols);
  for (int a = 0; a < map.values.rows; ++a) {
    for (int b = 0; b < map.values.cols; ++b) {
      McConfig entry_cfg = cfg;
      entry_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(a) * map.values.cols + b);
      McResult r = mc_interaction(game, left[a], right[b], entry_cfg);
      map.values(a, b) = r.estimate;
      if (std_errors) (*std_errors)(a, b) = r.std_error;
    }
  }
  return map;
}

}  // namespace hbi
