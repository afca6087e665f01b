#ifndef HBI_PIPELINE_HPP
#define HBI_PIPELINE_HPP

#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hbi/hierarchy.hpp"
#include "hbi/losses.hpp"
#include "hbi/surrogate.hpp"
#include "hbi/token_set.hpp"

namespace hbi {

enum class EntityMethod { monte_carlo, surrogate, exact };

const char* entity_method_name(EntityMethod m);
std::optional<EntityMethod> entity_method_from_string(const std::string& name);

struct PipelineConfig {
  LevelCounts counts;
  StackOptions stack;
  double tau = kDefaultTau;
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  EntityMethod entity_method = EntityMethod::monte_carlo;
  int mc_samples = 1024;
  std::uint64_t seed = 0;
  int exact_cap = kDefaultExactCap;

  /// R defaults to each level's alignment matrix (an identity stand-in for
  /// the learned relationship header). With this flag the interaction map
  /// itself is injected as R, which zeroes the interaction loss.
  bool relationship_from_interaction = false;

  /// Optional interaction estimator. Required when entity_method is
  /// surrogate; its shape must match the entity level.
  std::optional<SurrogateModel> model;
};

struct PipelineResult {
  nlohmann::json output;
  std::vector<std::pair<std::string, std::string>> svgs;  // (level name, document)
};

/// Runs the full stack over a batch of matched video/text pairs: level
/// construction, per-level interaction maps for the matched pairs, batch
/// similarities, and the complete loss breakdown.
PipelineResult run_pipeline(std::span<const TokenSet> videos, std::span<const TokenSet> texts,
                            const PipelineConfig& cfg, bool want_svg = false);

}  // namespace hbi

#endif
