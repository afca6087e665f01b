#ifndef HBI_HIERARCHY_HPP
#define HBI_HIERARCHY_HPP

#include <json.hpp>
#include <optional>
#include <span>
#include <string>

#include "hbi/clustering.hpp"
#include "hbi/token_set.hpp"

namespace hbi {

/// Token counts per level and modality. Defaults follow the reference
/// configuration: 12 frames / 24 words shrinking to 3/6 at the action level
/// and 2/3 at the event level.
struct LevelCounts {
  int v_entity = 12;
  int v_action = 3;
  int v_event = 2;
  int t_entity = 24;
  int t_action = 6;
  int t_event = 3;
};

enum class LevelName { entity, action, event };

const char* level_name(LevelName level);

/// One semantic level: a token set per modality plus, above the entity
/// level, the clustering of the previous level that produced it.
struct Level {
  TokenSet video;
  TokenSet text;
  std::optional<ClusterResult> video_clusters;
  std::optional<ClusterResult> text_clusters;
};

struct LevelStack {
  Level entity;
  Level action;
  Level event;
  LevelCounts counts;

  const Level& at(LevelName name) const;
};

struct StackOptions {
  bool temporal_smoothing = true;  // moving average, kernel 3, edge replication
  bool attention_readout = true;
  double attention_scale = 0.0;  // 0 selects sqrt(dim)
  int knn = 0;                   // 0 selects min(5, count-1) per level
};

/// Uniform moving average with kernel 3 and edge replication, the
/// deterministic stand-in for a learned temporal layer.
TokenSet moving_average_smooth(const TokenSet& tokens);

/// Collapses each cluster to the softmax(score)-weighted average of its
/// members. Output weights are uniform over the merged tokens.
TokenSet merge_tokens(const TokenSet& tokens, const ClusterResult& clusters,
                      std::span<const double> merge_scores);

/// Scaled dot-product attention with identity Q/K/V maps: each query becomes
/// the softmax(<q,k>/scale)-weighted average of the values. Optional
/// projection matrices (dim x dim) are applied before the products.
TokenSet attention_readout(const TokenSet& queries, const TokenSet& keys_values, double scale,
                           const Mat* proj_q = nullptr, const Mat* proj_k = nullptr,
                           const Mat* proj_v = nullptr);

/// Entity level = inputs after optional temporal smoothing; each level above
/// is cluster + merge + attention read-out over the level below.
LevelStack build_level_stack(const TokenSet& video, const TokenSet& text, const LevelCounts& counts,
                             const StackOptions& options = {});

nlohmann::json level_stack_json(const LevelStack& stack);

}  // namespace hbi

#endif
