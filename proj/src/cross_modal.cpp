#include "hbi/cross_modal.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hbi/errors.hpp"
#include "hbi/rng.hpp"

namespace hbi {

namespace {

void check_weights(const std::vector<double>& w, int expected, const char* side) {
  if (static_cast<int>(w.size()) != expected)
    throw std::invalid_argument(std::string(side) + " weight count does not match token count");
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument(std::string(side) + " weights must be finite and non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(side) + " weights must sum to 1 within 1e-9");
}

// Shared kernel for the full and restricted similarity. Restricting to the
// full index set runs exactly the same arithmetic as the unrestricted score,
// so that case is a bitwise no-op by construction. Weight mass is
// renormalized over the given support; a support whose mass underflows to
// zero falls back to uniform weighting of its members.
double weighted_max_score(const Mat& a, std::span<const int> frames, std::span<const int> words,
                          std::span<const double> weights_v, std::span<const double> weights_t) {
  double v_mass = 0.0, v_sum = 0.0;
  for (int i : frames) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j : words) best = std::max(best, a(i, j));
    v_sum += weights_v[i] * best;
    v_mass += weights_v[i];
  }
  double t_mass = 0.0, t_sum = 0.0;
  for (int j : words) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i : frames) best = std::max(best, a(i, j));
    t_sum += weights_t[j] * best;
    t_mass += weights_t[j];
  }
  if (v_mass == 0.0) {
    v_sum = 0.0;
    for (int i : frames) {
      double best = -std::numeric_limits<double>::infinity();
      for (int j : words) best = std::max(best, a(i, j));
      v_sum += best;
    }
    v_sum /= static_cast<double>(frames.size());
    v_mass = 1.0;
  }
  if (t_mass == 0.0) {
    t_sum = 0.0;
    for (int j : words) {
      double best = -std::numeric_limits<double>::infinity();
      for (int i : frames) best = std::max(best, a(i, j));
      t_sum += best;
    }
    t_sum /= static_cast<double>(words.size());
    t_mass = 1.0;
  }
  return 0.5 * (v_sum / v_mass + t_sum / t_mass);
}

std::vector<int> iota_indices(int count) {
  std::vector<int> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

CrossModalGame make_cross_modal_game(AlignmentMatrix alignment, std::vector<double> weights_v,
                                     std::vector<double> weights_t) {
  CrossModalGame g;
  g.alignment = std::move(alignment);
  if (g.n_v() < 1 || g.n_t() < 1) throw std::invalid_argument("alignment matrix is empty");
  g.weights_v = weights_v.empty() ? uniform_weights(g.n_v()) : std::move(weights_v);
  g.weights_t = weights_t.empty() ? uniform_weights(g.n_t()) : std::move(weights_t);
  check_weights(g.weights_v, g.n_v(), "frame");
  check_weights(g.weights_t, g.n_t(), "word");
  return g;
}

double similarity(const AlignmentMatrix& alignment, std::span<const double> weights_v,
                  std::span<const double> weights_t) {
  if (static_cast<int>(weights_v.size()) != alignment.n_v() ||
      static_cast<int>(weights_t.size()) != alignment.n_t())
    throw std::invalid_argument("weight vectors do not match alignment dims");
  std::vector<int> frames = iota_indices(alignment.n_v());
  std::vector<int> words = iota_indices(alignment.n_t());
  return weighted_max_score(alignment.a, frames, words, weights_v, weights_t);
}

double restricted_similarity(const CrossModalGame& game, Coalition coalition) {
  std::vector<int> frames, words;
  frames.reserve(static_cast<std::size_t>(game.n_v()));
  words.reserve(static_cast<std::size_t>(game.n_t()));
  for (int i = 0; i < game.n_v(); ++i)
    if (coalition.contains(i)) frames.push_back(i);
  for (int j = 0; j < game.n_t(); ++j)
    if (coalition.contains(game.n_v() + j)) words.push_back(j);
  if (frames.empty() || words.empty()) return 0.0;  // criterion (c)
  return weighted_max_score(game.alignment.a, frames, words, game.weights_v, game.weights_t);
}

Game CrossModalGame::as_game() const {
  Game out;
  out.n = players();
  out.value = [g = *this](Coalition c) { return restricted_similarity(g, c); };
  return out;
}

bool CriterionReport::all_signs_ok() const {
  for (const auto& d : positives)
    if (!d.sign_ok) return false;
  for (const auto& d : negatives)
    if (!d.sign_ok) return false;
  return zero_without_cooperation;
}

CriterionReport criterion_report(const CrossModalGame& game,
                                 std::span<const std::pair<int, int>> positive_pairs,
                                 std::span<const std::pair<int, int>> negative_pairs, int cap) {
  CriterionReport report;
  const int n_v = game.n_v(), n_t = game.n_t();
  const Game base = game.as_game();

  // Criterion (c): no cross-modal cooperation means exactly zero payoff.
  // Single-modality coalitions are enumerated when cheap, sampled otherwise.
  auto check_zero = [&](Coalition c) {
    ++report.zero_checks;
    if (restricted_similarity(game, c) != 0.0) report.zero_without_cooperation = false;
  };
  check_zero(Coalition::empty());
  auto sweep_side = [&](int offset, int count) {
    if (count <= 10) {
      for (std::uint64_t bits = 0; bits < (1ULL << count); ++bits)
        check_zero(Coalition{bits << offset});
    } else {
      Rng rng(0x9d2c5680u);
      for (int s = 0; s < 1024; ++s) {
        std::uint64_t bits = rng() & ((1ULL << count) - 1);
        check_zero(Coalition{bits << offset});
      }
    }
  };
  sweep_side(0, n_v);
  sweep_side(n_v, n_t);

  auto diagnose = [&](std::pair<int, int> pair, bool positive) {
    int frame = pair.first, word = pair.second;
    if (frame < 0 || frame >= n_v || word < 0 || word >= n_t)
      throw std::out_of_range("pair indices out of range");
    PairDiagnostic d;
    d.frame = frame;
    d.word = word;
    const int pi = game.frame_player(frame);
    const int pj = game.word_player(word);
    d.interaction = banzhaf_interaction_exact(base, pi, pj, cap).value;
    Coalition pair_block = Coalition::of({pi, pj});
    Game merged = reduced_game(base, pair_block);
    double block_value = banzhaf_value(merged, merged.n - 1, cap);
    double i_alone = banzhaf_value_within(base, pi, Coalition::all(base.n).without(pj), cap);
    double j_alone = banzhaf_value_within(base, pj, Coalition::all(base.n).without(pi), cap);
    d.value = (i_alone + j_alone) - block_value;  // equals -interaction
    d.sign_ok = positive ? d.value < 0.0 : d.value > 0.0;
    return d;
  };
  for (auto p : positive_pairs) report.positives.push_back(diagnose(p, true));
  for (auto p : negative_pairs) report.negatives.push_back(diagnose(p, false));
  return report;
}

}  // namespace hbi
