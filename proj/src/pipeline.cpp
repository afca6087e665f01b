#include "hbi/pipeline.hpp"

#include <numeric>
#include <stdexcept>

#include "hbi/banzhaf.hpp"
#include "hbi/cross_modal.hpp"
#include "hbi/errors.hpp"
#include "hbi/monte_carlo.hpp"
#include "hbi/rng.hpp"
#include "hbi/svg_heatmap.hpp"

namespace hbi {

const char* entity_method_name(EntityMethod m) {
  switch (m) {
    case EntityMethod::monte_carlo: return "monte_carlo";
    case EntityMethod::surrogate: return "surrogate";
    case EntityMethod::exact: return "exact";
  }
  return "unknown";
}

std::optional<EntityMethod> entity_method_from_string(const std::string& name) {
  if (name == "monte_carlo" || name == "mc") return EntityMethod::monte_carlo;
  if (name == "surrogate") return EntityMethod::surrogate;
  if (name == "exact") return EntityMethod::exact;
  return std::nullopt;
}

namespace {

nlohmann::json mat_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json clusters_json(const std::optional<ClusterResult>& c) {
  if (!c) return nullptr;
  return {{"assignment", c->assignment},
          {"centers", c->centers},
          {"rho", c->rho},
          {"delta", c->delta}};
}

InteractionMap entity_interaction(const AlignmentMatrix& alignment, const PipelineConfig& cfg,
                                  std::uint64_t pair_stream) {
  CrossModalGame game = make_cross_modal_game(alignment);
  std::vector<int> frames(static_cast<std::size_t>(alignment.n_v()));
  std::vector<int> words(static_cast<std::size_t>(alignment.n_t()));
  std::iota(frames.begin(), frames.end(), 0);
  std::iota(words.begin(), words.end(), alignment.n_v());
  switch (cfg.entity_method) {
    case EntityMethod::exact:
      return interaction_matrix_exact(game.as_game(), frames, words, cfg.exact_cap);
    case EntityMethod::surrogate:
      return surrogate_predict(*cfg.model, alignment);
    case EntityMethod::monte_carlo: {
      McConfig mc;
      mc.samples = cfg.mc_samples;
      mc.seed = mix_seed(cfg.seed, pair_stream);
      return mc_interaction_matrix(game.as_game(), frames, words, mc);
    }
  }
  throw std::logic_error("unreachable");
}

InteractionMap exact_level_interaction(const AlignmentMatrix& alignment, int cap) {
  CrossModalGame game = make_cross_modal_game(alignment);
  std::vector<int> frames(static_cast<std::size_t>(alignment.n_v()));
  std::vector<int> words(static_cast<std::size_t>(alignment.n_t()));
  std::iota(frames.begin(), frames.end(), 0);
  std::iota(words.begin(), words.end(), alignment.n_v());
  return interaction_matrix_exact(game.as_game(), frames, words, cap);
}

std::vector<std::string> make_labels(const char* prefix, int count) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

}  // namespace

PipelineResult run_pipeline(std::span<const TokenSet> videos, std::span<const TokenSet> texts,
                            const PipelineConfig& cfg, bool want_svg) {
  if (videos.empty() || videos.size() != texts.size())
    throw std::invalid_argument("pipeline needs matched, non-empty video/text batches");
  const int batch = static_cast<int>(videos.size());
  const int dim = videos[0].dim();
  for (const TokenSet& ts : videos)
    if (ts.dim() != dim) throw DimensionMismatch("video token dims differ across the batch");
  for (const TokenSet& ts : texts)
    if (ts.dim() != dim) throw DimensionMismatch("text embedding dim differs from video dim");
  if (cfg.entity_method == EntityMethod::surrogate && !cfg.model)
    throw std::invalid_argument("entity_method=surrogate needs a model");

  std::vector<LevelStack> stacks;
  stacks.reserve(static_cast<std::size_t>(batch));
  for (int k = 0; k < batch; ++k)
    stacks.push_back(build_level_stack(videos[k], texts[k], cfg.counts, cfg.stack));

  const LevelName levels[3] = {LevelName::entity, LevelName::action, LevelName::event};
  nlohmann::json out_levels = nlohmann::json::object();
  nlohmann::json out_pairs = nlohmann::json::array();
  for (int k = 0; k < batch; ++k)
    out_pairs.push_back({{"levels", nlohmann::json::object()}});

  PipelineResult result;
  double level_losses[3] = {0.0, 0.0, 0.0};
  BatchSimilarities batch_sims[3];

  for (int li = 0; li < 3; ++li) {
    const LevelName level = levels[li];
    BatchSimilarities sims;
    sims.tau = cfg.tau;
    sims.s = Mat(batch, batch);
    for (int k = 0; k < batch; ++k) {
      const TokenSet& vid = stacks[k].at(level).video;
      for (int l = 0; l < batch; ++l) {
        const TokenSet& txt = stacks[l].at(level).text;
        AlignmentMatrix a = alignment_matrix(vid, txt);
        sims.s(k, l) = similarity(a, vid.weights, txt.weights);
      }
    }

    double interaction_loss = 0.0;
    Method method = Method::exact;
    for (int k = 0; k < batch; ++k) {
      const Level& lv = stacks[k].at(level);
      AlignmentMatrix a = alignment_matrix(lv.video, lv.text);
      InteractionMap imap = level == LevelName::entity
                                ? entity_interaction(a, cfg, static_cast<std::uint64_t>(k))
                                : exact_level_interaction(a, cfg.exact_cap);
      method = imap.method;
      // R defaults to the raw alignment (identity stand-in for the learned
      // relationship header). A supplied model substitutes wherever its shape
      // matches, except where that same model already produced the
      // interaction map itself.
      Mat relationship = a.a;
      bool model_made_imap =
          level == LevelName::entity && cfg.entity_method == EntityMethod::surrogate;
      if (cfg.relationship_from_interaction) {
        relationship = imap.values;
      } else if (cfg.model && cfg.model->n_v == a.n_v() && cfg.model->n_t == a.n_t() &&
                 !model_made_imap) {
        relationship = surrogate_predict(*cfg.model, a).values;
      }
      interaction_loss += banzhaf_interaction_loss(relationship, imap.values) / batch;

      nlohmann::json pair_level = {
          {"interaction", mat_json(imap.values)},
          {"method", method_name(imap.method)},
          {"relationship", mat_json(relationship)},
          {"alignment", mat_json(a.a)},
          {"clusters",
           {{"video", clusters_json(lv.video_clusters)}, {"text", clusters_json(lv.text_clusters)}}}};
      out_pairs[k]["levels"][level_name(level)] = std::move(pair_level);

      if (want_svg && k == 0) {
        HeatmapSpec spec;
        spec.title = std::string(level_name(level)) + " interaction (" +
                     method_name(imap.method) + ")";
        if (level == LevelName::entity) {
          spec.row_labels = make_labels("f", imap.values.rows);
          spec.col_labels = make_labels("w", imap.values.cols);
        } else {
          spec.row_labels = make_labels("vc", imap.values.rows);
          spec.col_labels = make_labels("tc", imap.values.cols);
        }
        result.svgs.emplace_back(level_name(level), render_heatmap_svg(imap.values, spec));
      }
    }

    double contrastive = contrastive_loss(sims);
    double combined = contrastive + cfg.alpha * interaction_loss;
    level_losses[li] = combined;
    batch_sims[li] = sims;

    out_levels[level_name(level)] = {
        {"shape", {stacks[0].at(level).video.count(), stacks[0].at(level).text.count()}},
        {"method", method_name(method)},
        {"similarity", mat_json(sims.s)},
        {"pair_similarity", sims.s(0, 0)},
        {"losses",
         {{"contrastive", contrastive}, {"interaction", interaction_loss}, {"level", combined}}}};
  }

  double distill_e2a = distillation_loss(batch_sims[1], batch_sims[0]);
  double distill_e2o = distillation_loss(batch_sims[2], batch_sims[0]);
  double total = total_loss(level_losses[0], level_losses[1], level_losses[2], distill_e2a,
                            distill_e2o, cfg.beta);

  result.output = {
      {"metadata",
       {{"tau", cfg.tau},
        {"alpha", cfg.alpha},
        {"beta", cfg.beta},
        {"counts",
         {{"video", {cfg.counts.v_entity, cfg.counts.v_action, cfg.counts.v_event}},
          {"text", {cfg.counts.t_entity, cfg.counts.t_action, cfg.counts.t_event}}}},
        {"seed", cfg.seed},
        {"entity_method", entity_method_name(cfg.entity_method)},
        {"mc_samples", cfg.mc_samples},
        {"exact_cap", cfg.exact_cap},
        {"temporal_smoothing", cfg.stack.temporal_smoothing},
        {"attention_readout", cfg.stack.attention_readout}}},
      {"batch_size", batch},
      {"levels", std::move(out_levels)},
      {"pairs", std::move(out_pairs)},
      {"losses",
       {{"distill_e2a", distill_e2a},
        {"distill_e2o", distill_e2o},
        {"level_entity", level_losses[0]},
        {"level_action", level_losses[1]},
        {"level_event", level_losses[2]},
        {"total", total}}}};
  return result;
}

}  // namespace hbi
