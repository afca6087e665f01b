#ifndef HBI_AXIOMS_HPP
#define HBI_AXIOMS_HPP

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbi/game.hpp"

namespace hbi {

enum class Axiom { symmetry, dummy, additivity, recursivity };

enum class FamilyName { additive, unanimity, dictator, quadratic_size, random_table, cross_modal };

const char* axiom_to_string(Axiom a);
const char* family_to_string(FamilyName f);
std::optional<FamilyName> family_from_string(const std::string& name);

/// A seeded generator of games for randomized axiom trials. Generated games
/// satisfy the family's defining property exactly (additive games have
/// constant marginals, and so on).
struct GameFamily {
  FamilyName name = FamilyName::random_table;
  std::uint64_t seed = 0;
  int n_min = 3;
  int n_max = 12;
};

struct AxiomReport {
  Axiom axiom = Axiom::symmetry;
  FamilyName family = FamilyName::random_table;
  int trials = 0;
  double tolerance = 0.0;
  double max_abs_violation = 0.0;
  bool pass = false;  // max_abs_violation <= tolerance
};

/// Test hook: wraps each freshly constructed trial game before it is
/// checked. Used to demonstrate that a broken characteristic function makes
/// the bench fail.
using GameMutator = std::function<Game(Game)>;

/// Builds games invariant under the transposition exchanging two disjoint
/// pairs, then asserts their interactions coincide.
AxiomReport check_symmetry(const GameFamily& family, int trials, double tolerance = 1e-10,
                           const GameMutator& mutate = {});

/// Plants a pair of players whose contributions are purely additive and
/// asserts their interaction vanishes.
AxiomReport check_dummy(const GameFamily& family, int trials, double tolerance = 1e-10,
                        const GameMutator& mutate = {});

/// Interaction of a sum game equals the sum of interactions.
AxiomReport check_additivity(const GameFamily& family, int trials, double tolerance = 1e-10,
                             const GameMutator& mutate = {});

/// Banzhaf value of the merged pair equals the members' values without the
/// partner plus their interaction.
AxiomReport check_recursivity(const GameFamily& family, int trials, double tolerance = 1e-10,
                              const GameMutator& mutate = {});

/// All four checks across the given families. Deterministic given
/// (families, seeds, trials).
std::vector<AxiomReport> run_axiom_bench(std::span<const GameFamily> families, int trials,
                                         double tolerance = 1e-10, const GameMutator& mutate = {});

nlohmann::json axiom_report_json(const AxiomReport& report);
nlohmann::json axiom_bench_json(std::span<const AxiomReport> reports);
std::string axiom_bench_summary(std::span<const AxiomReport> reports);

}  // namespace hbi

#endif
