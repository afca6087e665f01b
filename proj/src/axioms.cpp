#include "hbi/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hbi/banzhaf.hpp"
#include "hbi/cross_modal.hpp"
#include "hbi/rng.hpp"

namespace hbi {

const char* axiom_to_string(Axiom a) {
  switch (a) {
    case Axiom::symmetry: return "symmetry";
    case Axiom::dummy: return "dummy";
    case Axiom::additivity: return "additivity";
    case Axiom::recursivity: return "recursivity";
  }
  return "unknown";
}

const char* family_to_string(FamilyName f) {
  switch (f) {
    case FamilyName::additive: return "additive";
    case FamilyName::unanimity: return "unanimity";
    case FamilyName::dictator: return "dictator";
    case FamilyName::quadratic_size: return "quadratic_size";
    case FamilyName::random_table: return "random_table";
    case FamilyName::cross_modal: return "cross_modal";
  }
  return "unknown";
}

std::optional<FamilyName> family_from_string(const std::string& name) {
  for (FamilyName f : {FamilyName::additive, FamilyName::unanimity, FamilyName::dictator,
                       FamilyName::quadratic_size, FamilyName::random_table,
                       FamilyName::cross_modal})
    if (name == family_to_string(f)) return f;
  return std::nullopt;
}

namespace {

constexpr int kTokenDim = 6;

std::uint64_t swap_bits(std::uint64_t bits, int a, int b) {
  bool has_a = (bits >> a) & 1ULL;
  bool has_b = (bits >> b) & 1ULL;
  if (has_a != has_b) bits ^= (1ULL << a) | (1ULL << b);
  return bits;
}

AlignmentMatrix random_alignment(int n_v, int n_t, Rng& rng) {
  auto draw = [&](int count, Modality m) {
    Mat tokens(count, kTokenDim);
    for (double& v : tokens.data) v = normal(rng);
    return make_token_set(std::move(tokens), m);
  };
  TokenSet video = draw(n_v, Modality::visual);
  TokenSet text = draw(n_t, Modality::textual);
  return alignment_matrix(video, text);
}

// Plain per-trial game; avoid_index (used for the dictator) is kept outside
// the test pairs by the callers.
Game family_game(FamilyName name, int n, Rng& rng, int dictator_index = 0) {
  switch (name) {
    case FamilyName::additive: {
      std::vector<double> w(static_cast<std::size_t>(n));
      for (double& x : w) x = uniform(rng, -2.0, 2.0);
      return additive_game(std::move(w));
    }
    case FamilyName::unanimity: {
      std::uint64_t bits = 0;
      while (bits == 0) bits = rng() & Coalition::all(n).bits;
      return unanimity_game(n, Coalition{bits});
    }
    case FamilyName::dictator:
      return dictator_game(n, dictator_index);
    case FamilyName::quadratic_size:
      return size_squared_game(n);
    case FamilyName::random_table:
      return random_table_game(n, rng());
    case FamilyName::cross_modal: {
      int n_v = std::max(1, n / 2);
      int n_t = n - n_v;
      if (n_t < 1) {
        n_v = n - 1;
        n_t = 1;
      }
      CrossModalGame g = make_cross_modal_game(random_alignment(n_v, n_t, rng));
      return g.as_game();
    }
  }
  throw std::invalid_argument("unknown family");
}

Game apply(const GameMutator& mutate, Game g) { return mutate ? mutate(std::move(g)) : g; }

struct Violation {
  double max_abs = 0.0;
  void record(double v) { max_abs = std::max(max_abs, std::abs(v)); }
};

AxiomReport finish(Axiom axiom, const GameFamily& family, int trials, double tolerance,
                   const Violation& v) {
  AxiomReport report;
  report.axiom = axiom;
  report.family = family.name;
  report.trials = trials;
  report.tolerance = tolerance;
  report.max_abs_violation = v.max_abs;
  report.pass = v.max_abs <= tolerance;
  return report;
}

int draw_n(const GameFamily& family, Rng& rng, int minimum) {
  int lo = std::max(family.n_min, minimum);
  int hi = std::max(family.n_max, lo);
  return uniform_int(rng, lo, hi);
}

}  // namespace

AxiomReport check_symmetry(const GameFamily& family, int trials, double tolerance,
                           const GameMutator& mutate) {
  Violation violation;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(family.seed, 4ULL * t + 0));
    // Two disjoint pairs plus, for the dictator family, a separate dictator.
    int minimum = family.name == FamilyName::dictator ? 5 : 4;
    int n = draw_n(family, rng, minimum);

    int i = 0, j = 1, i2 = 2, j2 = 3;
    Game game;
    switch (family.name) {
      case FamilyName::additive: {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (double& x : w) x = uniform(rng, -2.0, 2.0);
        w[i2] = w[i];
        w[j2] = w[j];
        game = additive_game(std::move(w));
        break;
      }
      case FamilyName::unanimity:
        game = unanimity_game(n, Coalition::all(n));
        break;
      case FamilyName::dictator:
        game = dictator_game(n, 4);
        break;
      case FamilyName::quadratic_size:
        game = size_squared_game(n);
        break;
      case FamilyName::random_table: {
        Game raw = random_table_game(n, rng());
        // Average the table with its image under the transposition
        // (i<->i', j<->j'); the result is exactly invariant.
        std::vector<double> table(1ULL << n);
        for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
          std::uint64_t swapped = swap_bits(swap_bits(mask, i, i2), j, j2);
          table[mask] = 0.5 * (raw.value(Coalition{mask}) + raw.value(Coalition{swapped}));
        }
        game = table_game(std::move(table));
        break;
      }
      case FamilyName::cross_modal: {
        // Pairs are cross-modal: frames {0, 1}, words {n_v, n_v+1}. Average
        // the alignment with its image under the row swap 0<->1 and column
        // swap 0<->1.
        int n_v = std::max(2, n / 2);
        int n_t = std::max(2, n - n_v);
        AlignmentMatrix a = random_alignment(n_v, n_t, rng);
        AlignmentMatrix sym;
        sym.a = Mat(n_v, n_t);
        auto swap01 = [](int k) { return k == 0 ? 1 : (k == 1 ? 0 : k); };
        for (int r = 0; r < n_v; ++r)
          for (int c = 0; c < n_t; ++c)
            sym.a(r, c) = 0.5 * (a.a(r, c) + a.a(swap01(r), swap01(c)));
        CrossModalGame g = make_cross_modal_game(std::move(sym));
        i = 0;
        j = n_v;  // pair {frame 0, word 0}
        i2 = 1;
        j2 = n_v + 1;  // pair {frame 1, word 1}
        game = g.as_game();
        break;
      }
    }
    game = apply(mutate, std::move(game));
    double lhs = banzhaf_interaction_exact(game, i, j).value;
    double rhs = banzhaf_interaction_exact(game, i2, j2).value;
    violation.record(lhs - rhs);
  }
  return finish(Axiom::symmetry, family, trials, tolerance, violation);
}

AxiomReport check_dummy(const GameFamily& family, int trials, double tolerance,
                        const GameMutator& mutate) {
  Violation violation;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(family.seed, 4ULL * t + 1));
    int n = draw_n(family, rng, 3);
    int i = n - 2, j = n - 1;
    Game game;
    if (family.name == FamilyName::additive) {
      // Already additive everywhere; any pair is a dummy pair.
      game = family_game(family.name, n, rng);
    } else {
      // Replace the last two players with purely additive contributors on
      // top of the family game restricted to the remaining players.
      Game base = family_game(family.name, n, rng, 0);
      double c_i = uniform(rng, -1.0, 1.0);
      double c_j = uniform(rng, -1.0, 1.0);
      game.n = n;
      game.value = [base = base.value, i, j, c_i, c_j](Coalition c) {
        double v = base(c.without(i).without(j));
        if (c.contains(i)) v += c_i;
        if (c.contains(j)) v += c_j;
        return v;
      };
    }
    game = apply(mutate, std::move(game));
    violation.record(banzhaf_interaction_exact(game, i, j).value);
  }
  return finish(Axiom::dummy, family, trials, tolerance, violation);
}

AxiomReport check_additivity(const GameFamily& family, int trials, double tolerance,
                             const GameMutator& mutate) {
  Violation violation;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(family.seed, 4ULL * t + 2));
    int n = draw_n(family, rng, 3);
    Game g = apply(mutate, family_game(family.name, n, rng, 0));
    Game h = apply(mutate, family_game(family.name, n, rng, n - 1));
    Game sum;
    sum.n = n;
    sum.value = [gv = g.value, hv = h.value](Coalition c) { return gv(c) + hv(c); };
    int i = uniform_int(rng, 0, n - 1);
    int j = (i + 1 + uniform_int(rng, 0, n - 2)) % n;
    double lhs = banzhaf_interaction_exact(sum, i, j).value;
    double rhs = banzhaf_interaction_exact(g, i, j).value + banzhaf_interaction_exact(h, i, j).value;
    violation.record(lhs - rhs);
  }
  return finish(Axiom::additivity, family, trials, tolerance, violation);
}

AxiomReport check_recursivity(const GameFamily& family, int trials, double tolerance,
                              const GameMutator& mutate) {
  Violation violation;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(family.seed, 4ULL * t + 3));
    int n = draw_n(family, rng, 3);
    Game game = apply(mutate, family_game(family.name, n, rng, 0));
    int i = uniform_int(rng, 0, n - 1);
    int j = (i + 1 + uniform_int(rng, 0, n - 2)) % n;
    Game merged = reduced_game(game, Coalition::of({i, j}));
    double block = banzhaf_value(merged, merged.n - 1);
    double i_alone = banzhaf_value_within(game, i, Coalition::all(n).without(j));
    double j_alone = banzhaf_value_within(game, j, Coalition::all(n).without(i));
    double interaction = banzhaf_interaction_exact(game, i, j).value;
    violation.record(block - (i_alone + j_alone + interaction));
  }
  return finish(Axiom::recursivity, family, trials, tolerance, violation);
}

std::vector<AxiomReport> run_axiom_bench(std::span<const GameFamily> families, int trials,
                                         double tolerance, const GameMutator& mutate) {
  std::vector<AxiomReport> reports;
  reports.reserve(families.size() * 4);
  for (const GameFamily& family : families) {
    reports.push_back(check_symmetry(family, trials, tolerance, mutate));
    reports.push_back(check_dummy(family, trials, tolerance, mutate));
    reports.push_back(check_additivity(family, trials, tolerance, mutate));
    reports.push_back(check_recursivity(family, trials, tolerance, mutate));
  }
  return reports;
}

nlohmann::json axiom_report_json(const AxiomReport& report) {
  return {{"axiom", axiom_to_string(report.axiom)},
          {"family", family_to_string(report.family)},
          {"trials", report.trials},
          {"tolerance", report.tolerance},
          {"max_abs_violation", report.max_abs_violation},
          {"pass", report.pass}};
}

nlohmann::json axiom_bench_json(std::span<const AxiomReport> reports) {
  bool all_pass = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    list.push_back(axiom_report_json(r));
  }
  return {{"reports", std::move(list)}, {"all_pass", all_pass}};
}

std::string axiom_bench_summary(std::span<const AxiomReport> reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << (r.pass ? "PASS" : "FAIL") << "  " << axiom_to_string(r.axiom) << " / "
        << family_to_string(r.family) << "  trials=" << r.trials
        << "  max|violation|=" << r.max_abs_violation << '\n';
  }
  return out.str();
}

}  // namespace hbi
