#include "hbi/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hbi/errors.hpp"

namespace hbi {

const char* level_name(LevelName level) {
  switch (level) {
    case LevelName::entity: return "entity";
    case LevelName::action: return "action";
    case LevelName::event: return "event";
  }
  return "unknown";
}

const Level& LevelStack::at(LevelName name) const {
  switch (name) {
    case LevelName::entity: return entity;
    case LevelName::action: return action;
    case LevelName::event: return event;
  }
  return entity;
}

TokenSet moving_average_smooth(const TokenSet& tokens) {
  const int n = tokens.count();
  TokenSet out = tokens;
  for (int i = 0; i < n; ++i) {
    int prev = std::max(0, i - 1);
    int next = std::min(n - 1, i + 1);
    for (int d = 0; d < tokens.dim(); ++d)
      out.tokens(i, d) = (tokens.tokens(prev, d) + tokens.tokens(i, d) + tokens.tokens(next, d)) / 3.0;
  }
  return out;
}

TokenSet merge_tokens(const TokenSet& tokens, const ClusterResult& clusters,
                      std::span<const double> merge_scores) {
  const int n = tokens.count();
  const int m = clusters.num_clusters();
  if (static_cast<int>(clusters.assignment.size()) != n)
    throw std::invalid_argument("cluster assignment does not match token count");
  if (static_cast<int>(merge_scores.size()) != n)
    throw std::invalid_argument("merge score length does not match token count");

  std::vector<std::vector<int>> member_lists(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    int c = clusters.assignment[i];
    if (c < 0 || c >= m) throw std::invalid_argument("assignment references a missing cluster");
    member_lists[c].push_back(i);  // ascending index order, deterministic
  }

  TokenSet out;
  out.modality = tokens.modality;
  out.tokens = Mat(m, tokens.dim());
  out.weights = uniform_weights(m);
  for (int c = 0; c < m; ++c) {
    const auto& mem = member_lists[c];
    if (mem.empty()) throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
    double top = merge_scores[mem[0]];
    for (int i : mem) top = std::max(top, merge_scores[i]);
    double total = 0.0;
    std::vector<double> w(mem.size());
    for (std::size_t k = 0; k < mem.size(); ++k) {
      w[k] = std::exp(merge_scores[mem[k]] - top);
      total += w[k];
    }
    for (std::size_t k = 0; k < mem.size(); ++k)
      for (int d = 0; d < tokens.dim(); ++d)
        out.tokens(c, d) += (w[k] / total) * tokens.tokens(mem[k], d);
  }
  return out;
}

TokenSet attention_readout(const TokenSet& queries, const TokenSet& keys_values, double scale,
                           const Mat* proj_q, const Mat* proj_k, const Mat* proj_v) {
  if (queries.dim() != keys_values.dim())
    throw DimensionMismatch("query and key/value dims differ");
  if (scale <= 0.0) throw std::invalid_argument("attention scale must be positive");
  auto check_proj = [&](const Mat* p, const char* which) {
    if (p && (p->rows != queries.dim() || p->cols != queries.dim()))
      throw std::invalid_argument(std::string(which) + " projection must be dim x dim");
  };
  check_proj(proj_q, "query");
  check_proj(proj_k, "key");
  check_proj(proj_v, "value");

  auto project = [](const Mat& x, const Mat* p) {
    if (!p) return x;
    Mat out(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < p->cols; ++j) {
        double acc = 0.0;
        for (int k = 0; k < x.cols; ++k) acc += x(i, k) * (*p)(k, j);
        out(i, j) = acc;
      }
    return out;
  };
  Mat q = project(queries.tokens, proj_q);
  Mat k = project(keys_values.tokens, proj_k);
  Mat v = project(keys_values.tokens, proj_v);

  TokenSet out;
  out.modality = queries.modality;
  out.weights = queries.weights;
  out.tokens = Mat(q.rows, v.cols);
  std::vector<double> logits(static_cast<std::size_t>(k.rows));
  for (int i = 0; i < q.rows; ++i) {
    for (int r = 0; r < k.rows; ++r) {
      double dot = 0.0;
      for (int d = 0; d < q.cols; ++d) dot += q(i, d) * k(r, d);
      logits[r] = dot / scale;
    }
    double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& l : logits) {
      l = std::exp(l - top);
      total += l;
    }
    for (int r = 0; r < k.rows; ++r)
      for (int d = 0; d < v.cols; ++d) out.tokens(i, d) += (logits[r] / total) * v(r, d);
  }
  return out;
}

namespace {

TokenSet lift_level(const TokenSet& below, int target_count, const StackOptions& options,
                    std::optional<ClusterResult>& clusters_out) {
  int k = options.knn > 0 ? options.knn : default_knn(below.count());
  if (k < 1 || k >= below.count())
    throw std::invalid_argument("knn invalid for level of " + std::to_string(below.count()) +
                                " tokens");
  ClusterResult clusters = dpc_knn_cluster(below, target_count, k);
  std::vector<double> scores(static_cast<std::size_t>(below.count()), 0.0);  // uniform merge
  TokenSet merged = merge_tokens(below, clusters, scores);
  clusters_out = std::move(clusters);
  if (!options.attention_readout) return merged;
  double scale = options.attention_scale > 0.0 ? options.attention_scale
                                               : std::sqrt(static_cast<double>(below.dim()));
  return attention_readout(merged, below, scale);
}

}  // namespace

LevelStack build_level_stack(const TokenSet& video, const TokenSet& text, const LevelCounts& counts,
                             const StackOptions& options) {
  validate(video);
  validate(text);
  if (counts.v_entity != video.count() || counts.t_entity != text.count())
    throw std::invalid_argument("entity counts must match the input token counts");
  auto check_chain = [](int e, int a, int o, const char* side) {
    if (a < 1 || o < 1 || a > e || o > a)
      throw std::invalid_argument(std::string(side) + " level counts must not increase");
  };
  check_chain(counts.v_entity, counts.v_action, counts.v_event, "video");
  check_chain(counts.t_entity, counts.t_action, counts.t_event, "text");

  LevelStack stack;
  stack.counts = counts;
  stack.entity.video = options.temporal_smoothing ? moving_average_smooth(video) : video;
  stack.entity.text = options.temporal_smoothing ? moving_average_smooth(text) : text;

  stack.action.video = lift_level(stack.entity.video, counts.v_action, options,
                                  stack.action.video_clusters);
  stack.action.text = lift_level(stack.entity.text, counts.t_action, options,
                                 stack.action.text_clusters);
  stack.event.video = lift_level(stack.action.video, counts.v_event, options,
                                 stack.event.video_clusters);
  stack.event.text = lift_level(stack.action.text, counts.t_event, options,
                                stack.event.text_clusters);
  return stack;
}

namespace {

nlohmann::json token_set_json(const TokenSet& ts) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < ts.count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int d = 0; d < ts.dim(); ++d) row.push_back(ts.tokens(i, d));
    rows.push_back(std::move(row));
  }
  return {{"modality", modality_name(ts.modality)},
          {"count", ts.count()},
          {"dim", ts.dim()},
          {"tokens", std::move(rows)},
          {"weights", ts.weights}};
}

nlohmann::json clusters_json(const std::optional<ClusterResult>& c) {
  if (!c) return nullptr;
  return {{"assignment", c->assignment},
          {"centers", c->centers},
          {"rho", c->rho},
          {"delta", c->delta}};
}

nlohmann::json level_json(const Level& level) {
  return {{"video", token_set_json(level.video)},
          {"text", token_set_json(level.text)},
          {"video_clusters", clusters_json(level.video_clusters)},
          {"text_clusters", clusters_json(level.text_clusters)}};
}

}  // namespace

nlohmann::json level_stack_json(const LevelStack& stack) {
  return {{"counts",
           {{"video", {stack.counts.v_entity, stack.counts.v_action, stack.counts.v_event}},
            {"text", {stack.counts.t_entity, stack.counts.t_action, stack.counts.t_event}}}},
          {"entity", level_json(stack.entity)},
          {"action", level_json(stack.action)},
          {"event", level_json(stack.event)}};
}

}  // namespace hbi
