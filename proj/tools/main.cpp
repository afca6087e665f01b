// Command-line front end for the interaction toolkit.
//
// Exit codes:
//   0  success
//   2  malformed input (bad file, unknown family, unusable flag combination)
//   3  exact enumeration requested past the player cap
//   4  embedding dimension mismatch between modalities
//   5  axiom bench failure (report is still written)
//   1  any other runtime error

#include <CLI11.hpp>
#include <atomic>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include "hbi/axioms.hpp"
#include "hbi/banzhaf.hpp"
#include "hbi/config.hpp"
#include "hbi/cross_modal.hpp"
#include "hbi/errors.hpp"
#include "hbi/monte_carlo.hpp"
#include "hbi/rng.hpp"
#include "hbi/pipeline.hpp"
#include "hbi/svg_heatmap.hpp"
#include "hbi/token_set.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string output_path;
  std::string format = "json";
  bool svg = false;
};

void write_output(const CommonOpts& common, const json& doc) {
  std::string text = doc.dump(2) + "\n";
  if (common.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(common.output_path);
    if (!out) throw hbi::ParseError(common.output_path, 0, "cannot open file for writing");
    out << text;
  }
}

void write_matrix_csv(const CommonOpts& common, const hbi::Mat& m) {
  std::ostringstream out;
  out.precision(17);
  out << m.rows << ',' << m.cols << '\n';
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  if (common.output_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(common.output_path);
    if (!file) throw hbi::ParseError(common.output_path, 0, "cannot open file for writing");
    file << out.str();
  }
}

json mat_json(const hbi::Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// An interaction query: either a payoff-table game over abstract players or
// a cross-modal game built from tokens or a stored alignment matrix.
struct GameInput {
  hbi::Game game;
  bool cross_modal = false;
  int n_v = 0;
  int n_t = 0;
  std::optional<hbi::AlignmentMatrix> alignment;
  std::string source;
};

GameInput load_game_input(const std::string& table, const std::string& video,
                          const std::string& text, const std::string& alignment) {
  int given = (!table.empty() ? 1 : 0) + ((!video.empty() || !text.empty()) ? 1 : 0) +
              (!alignment.empty() ? 1 : 0);
  if (given != 1)
    throw hbi::ParseError("input", 0,
                          "give exactly one of --table, --video/--text, or --alignment");
  GameInput in;
  if (!table.empty()) {
    in.game = hbi::load_payoff_csv(table);
    in.source = table;
    return in;
  }
  hbi::AlignmentMatrix a;
  if (!alignment.empty()) {
    a = hbi::load_alignment_csv(alignment);
    in.source = alignment;
  } else {
    if (video.empty() || text.empty())
      throw hbi::ParseError("input", 0, "--video and --text must be given together");
    hbi::TokenSet v = hbi::load_token_set_json(video);
    hbi::TokenSet t = hbi::load_token_set_json(text);
    a = hbi::alignment_matrix(v, t);
    in.source = video + " + " + text;
  }
  hbi::CrossModalGame cm = hbi::make_cross_modal_game(a);
  in.cross_modal = true;
  in.n_v = cm.n_v();
  in.n_t = cm.n_t();
  in.alignment = std::move(a);
  in.game = cm.as_game();
  return in;
}

std::pair<std::vector<int>, std::vector<int>> player_lists(const GameInput& in) {
  std::vector<int> left, right;
  if (in.cross_modal) {
    left.resize(static_cast<std::size_t>(in.n_v));
    right.resize(static_cast<std::size_t>(in.n_t));
    std::iota(left.begin(), left.end(), 0);
    std::iota(right.begin(), right.end(), in.n_v);
  }
  return {left, right};
}

hbi::GameMutator broken_phi() {
  return [](hbi::Game g) {
    auto counter = std::make_shared<std::atomic<long>>(0);
    g.value = [base = g.value, counter](hbi::Coalition c) {
      return base(c) + 1e-3 * static_cast<double>(counter->fetch_add(1) % 7);
    };
    return g;
  };
}

std::string svg_path(const std::string& output_path, const std::string& level) {
  std::string stem = output_path;
  if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json")
    stem = stem.substr(0, stem.size() - 5);
  return stem + "_" + level + ".svg";
}

int run_exact(const CommonOpts& common, const GameInput& in, const std::vector<int>& pair,
              int cap) {
  json doc;
  doc["metadata"] = {{"method", "exact"}, {"cap", cap}, {"input", in.source},
                     {"players", in.game.n}};
  if (!pair.empty()) {
    hbi::InteractionResult r = hbi::banzhaf_interaction_exact(in.game, pair[0], pair[1], cap);
    if (common.format == "csv") {
      write_matrix_csv(common, hbi::Mat(1, 1, r.value));
      return 0;
    }
    doc["interaction"] = {{"pair", {r.i, r.j}}, {"value", r.value}, {"method", "exact"}};
  } else if (in.cross_modal) {
    auto [left, right] = player_lists(in);
    hbi::InteractionMap map = hbi::interaction_matrix_exact(in.game, left, right, cap);
    if (common.format == "csv") {
      write_matrix_csv(common, map.values);
      return 0;
    }
    doc["interaction"] = {{"rows", "frames"}, {"cols", "words"}, {"values", mat_json(map.values)},
                          {"method", "exact"}};
  } else {
    // Full pairwise matrix over abstract players; the diagonal carries no
    // pair and is zero-filled.
    hbi::Mat values(in.game.n, in.game.n);
    for (int i = 0; i < in.game.n; ++i)
      for (int j = 0; j < in.game.n; ++j)
        if (i != j) values(i, j) = hbi::banzhaf_interaction_exact(in.game, i, j, cap).value;
    if (common.format == "csv") {
      write_matrix_csv(common, values);
      return 0;
    }
    doc["interaction"] = {{"rows", "players"}, {"cols", "players"}, {"values", mat_json(values)},
                          {"diagonal", "zero-filled"}, {"method", "exact"}};
  }
  write_output(common, doc);
  return 0;
}

int run_estimate(const CommonOpts& common, const GameInput& in, const std::vector<int>& pair,
                 const std::string& method, int samples, bool antithetic,
                 const std::string& model_path) {
  json doc;
  doc["metadata"] = {{"method", method}, {"samples", samples}, {"antithetic", antithetic},
                     {"seed", common.seed}, {"input", in.source}, {"players", in.game.n}};
  if (method == "surrogate") {
    if (model_path.empty()) throw hbi::ParseError("input", 0, "--method surrogate needs --model");
    if (!in.alignment)
      throw hbi::ParseError("input", 0, "surrogate estimation needs an alignment-style input");
    hbi::SurrogateModel model = hbi::load_surrogate_json(model_path);
    hbi::InteractionMap map = hbi::surrogate_predict(model, *in.alignment);
    if (common.format == "csv") {
      write_matrix_csv(common, map.values);
      return 0;
    }
    doc["interaction"] = {{"rows", "frames"}, {"cols", "words"}, {"values", mat_json(map.values)},
                          {"method", "surrogate"}};
    write_output(common, doc);
    return 0;
  }
  if (method != "mc" && method != "monte_carlo")
    throw hbi::ParseError("input", 0, "--method must be mc or surrogate");

  hbi::McConfig cfg{samples, common.seed, antithetic};
  if (!pair.empty()) {
    hbi::McResult r = hbi::mc_interaction(in.game, pair[0], pair[1], cfg);
    if (common.format == "csv") {
      write_matrix_csv(common, hbi::Mat(1, 1, r.estimate));
      return 0;
    }
    doc["interaction"] = {{"pair", {r.i, r.j}}, {"value", r.estimate},
                          {"std_error", r.std_error}, {"method", "monte_carlo"}};
  } else if (in.cross_modal) {
    auto [left, right] = player_lists(in);
    hbi::Mat errors;
    hbi::InteractionMap map = hbi::mc_interaction_matrix(in.game, left, right, cfg, &errors);
    if (common.format == "csv") {
      write_matrix_csv(common, map.values);
      return 0;
    }
    doc["interaction"] = {{"rows", "frames"}, {"cols", "words"}, {"values", mat_json(map.values)},
                          {"std_errors", mat_json(errors)}, {"method", "monte_carlo"}};
  } else {
    hbi::Mat values(in.game.n, in.game.n);
    hbi::Mat errors(in.game.n, in.game.n);
    for (int i = 0; i < in.game.n; ++i) {
      for (int j = 0; j < in.game.n; ++j) {
        if (i == j) continue;
        hbi::McConfig entry = cfg;
        entry.seed = hbi::mix_seed(cfg.seed, static_cast<std::uint64_t>(i) * in.game.n + j);
        hbi::McResult r = hbi::mc_interaction(in.game, i, j, entry);
        values(i, j) = r.estimate;
        errors(i, j) = r.std_error;
      }
    }
    if (common.format == "csv") {
      write_matrix_csv(common, values);
      return 0;
    }
    doc["interaction"] = {{"rows", "players"}, {"cols", "players"}, {"values", mat_json(values)},
                          {"std_errors", mat_json(errors)}, {"diagonal", "zero-filled"},
                          {"method", "monte_carlo"}};
  }
  write_output(common, doc);
  return 0;
}

json cluster_result_json(const hbi::ClusterResult& r) {
  return {{"assignment", r.assignment}, {"centers", r.centers}, {"rho", r.rho},
          {"delta", r.delta}};
}

int run_cluster(const CommonOpts& common, const std::string& tokens_path,
                const std::string& video_path, const std::string& text_path, int clusters,
                int knn, const std::vector<int>& counts_v, const std::vector<int>& counts_t) {
  if (common.format == "csv")
    throw hbi::ParseError("input", 0, "cluster output is JSON only");
  if (!tokens_path.empty()) {
    hbi::TokenSet ts = hbi::load_token_set_json(tokens_path);
    if (clusters < 1) throw hbi::ParseError("input", 0, "--clusters must be >= 1");
    int k = knn > 0 ? knn : hbi::default_knn(ts.count());
    hbi::ClusterResult r = hbi::dpc_knn_cluster(ts, clusters, k);
    json doc = cluster_result_json(r);
    doc["metadata"] = {{"input", tokens_path}, {"clusters", clusters}, {"knn", k}};
    write_output(common, doc);
    return 0;
  }
  if (video_path.empty() || text_path.empty())
    throw hbi::ParseError("input", 0, "give --tokens, or --video and --text");
  hbi::TokenSet video = hbi::load_token_set_json(video_path);
  hbi::TokenSet text = hbi::load_token_set_json(text_path);
  hbi::LevelCounts counts;
  counts.v_entity = video.count();
  counts.t_entity = text.count();
  if (counts_v.size() == 3) {
    counts.v_entity = counts_v[0];
    counts.v_action = counts_v[1];
    counts.v_event = counts_v[2];
  }
  if (counts_t.size() == 3) {
    counts.t_entity = counts_t[0];
    counts.t_action = counts_t[1];
    counts.t_event = counts_t[2];
  }
  hbi::StackOptions options;
  options.knn = knn;
  hbi::LevelStack stack = hbi::build_level_stack(video, text, counts, options);
  write_output(common, hbi::level_stack_json(stack));
  return 0;
}

int run_pipeline_cmd(const CommonOpts& common, const std::vector<std::string>& videos,
                     const std::vector<std::string>& texts, hbi::PipelineConfig cfg,
                     const std::string& entity_method, const std::string& model_path,
                     const std::vector<int>& counts_v, const std::vector<int>& counts_t) {
  if (common.format == "csv")
    throw hbi::ParseError("input", 0, "pipeline output is JSON only");
  if (videos.empty() || videos.size() != texts.size())
    throw hbi::ParseError("input", 0, "--video and --text must be given the same number of times");
  auto method = hbi::entity_method_from_string(entity_method);
  if (!method) throw hbi::ParseError("input", 0, "unknown entity method: " + entity_method);
  cfg.entity_method = *method;
  cfg.seed = common.seed;
  if (!model_path.empty()) cfg.model = hbi::load_surrogate_json(model_path);
  if (counts_v.size() == 3) {
    cfg.counts.v_entity = counts_v[0];
    cfg.counts.v_action = counts_v[1];
    cfg.counts.v_event = counts_v[2];
  } else if (!counts_v.empty()) {
    throw hbi::ParseError("input", 0, "--counts-v needs three values: entity,action,event");
  }
  if (counts_t.size() == 3) {
    cfg.counts.t_entity = counts_t[0];
    cfg.counts.t_action = counts_t[1];
    cfg.counts.t_event = counts_t[2];
  } else if (!counts_t.empty()) {
    throw hbi::ParseError("input", 0, "--counts-t needs three values: entity,action,event");
  }

  std::vector<hbi::TokenSet> video_sets, text_sets;
  for (const std::string& p : videos) video_sets.push_back(hbi::load_token_set_json(p));
  for (const std::string& p : texts) text_sets.push_back(hbi::load_token_set_json(p));

  // Without explicit counts the entity level takes the input sizes as-is.
  if (counts_v.empty()) cfg.counts.v_entity = video_sets[0].count();
  if (counts_t.empty()) cfg.counts.t_entity = text_sets[0].count();

  bool want_svg = common.svg;
  if (want_svg && common.output_path.empty())
    throw hbi::ParseError("input", 0, "--svg needs --output to name the rendered files");

  hbi::PipelineResult result = hbi::run_pipeline(video_sets, text_sets, cfg, want_svg);
  for (const auto& [level, svg] : result.svgs) {
    std::string path = svg_path(common.output_path, level);
    std::ofstream out(path);
    if (!out) throw hbi::ParseError(path, 0, "cannot open file for writing");
    out << svg;
    result.output["svg_files"].push_back(path);
  }
  write_output(common, result.output);
  return 0;
}

int run_axioms(const CommonOpts& common, const std::string& families_arg, int trials,
               double tolerance, int n_min, int n_max, bool inject_broken) {
  std::vector<hbi::GameFamily> families;
  std::istringstream in(families_arg);
  std::string name;
  while (std::getline(in, name, ',')) {
    auto parsed = hbi::family_from_string(name);
    if (!parsed) throw hbi::ParseError("families", 0, "unknown family name: " + name);
    hbi::GameFamily family;
    family.name = *parsed;
    family.seed = common.seed;
    family.n_min = n_min;
    family.n_max = n_max;
    families.push_back(family);
  }
  if (families.empty()) throw hbi::ParseError("families", 0, "no families given");

  hbi::GameMutator mutate;
  if (inject_broken) mutate = broken_phi();
  auto reports = hbi::run_axiom_bench(families, trials, tolerance, mutate);
  write_output(common, hbi::axiom_bench_json(reports));
  std::cerr << hbi::axiom_bench_summary(reports);
  for (const auto& r : reports)
    if (!r.pass) return 5;
  return 0;
}

int run_train(const CommonOpts& common, const std::string& data_dir, int generate, int n_v,
              int n_t, hbi::TrainConfig cfg, const std::string& emit_dataset) {
  cfg.seed = common.seed;
  std::vector<hbi::TrainingPair> dataset;
  if (!data_dir.empty()) {
    dataset = hbi::load_training_dir(data_dir);
  } else if (generate > 0) {
    dataset = hbi::synthetic_dataset(generate, n_v, n_t, common.seed);
  } else {
    throw hbi::ParseError("input", 0, "give --data DIR or --generate N");
  }
  if (!emit_dataset.empty()) hbi::save_training_dir(emit_dataset, dataset);
  if (common.output_path.empty())
    throw hbi::ParseError("input", 0, "train-surrogate needs --output for the model file");

  hbi::TrainResult result = hbi::surrogate_train(dataset, cfg);
  double final_loss = result.loss_trace.empty() ? 0.0 : result.loss_trace.back();
  hbi::save_surrogate_json(common.output_path, result.model, cfg, final_loss);

  json doc = {{"model", common.output_path},
              {"pairs", dataset.size()},
              {"epochs", cfg.epochs},
              {"hidden", cfg.hidden},
              {"learning_rate", cfg.learning_rate},
              {"seed", cfg.seed},
              {"final_loss", final_loss},
              {"diverged", result.diverged}};
  if (result.diverged) doc["diverged_epoch"] = result.diverged_epoch;
  std::cout << doc.dump(2) << '\n';
  return result.diverged ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Banzhaf interaction toolkit: exact and estimated cooperative-game interaction "
               "over cross-modal token games"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  app.add_option("--seed", common.seed, "seed for every randomized step");
  app.add_option("--config", common.config_path, "key=value configuration file (flags win)");
  app.add_option("--output", common.output_path, "output path (stdout when omitted)");
  app.add_option("--format", common.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--svg", common.svg, "render SVG heatmaps (pipeline)");

  // exact
  auto* exact = app.add_subcommand("exact", "exact Banzhaf interaction");
  std::string ex_table, ex_video, ex_text, ex_alignment;
  std::vector<int> ex_pair;
  int ex_cap = hbi::kDefaultExactCap;
  exact->add_option("--table", ex_table, "payoff-table CSV (coalition_mask,value)");
  exact->add_option("--video", ex_video, "visual token JSON");
  exact->add_option("--text", ex_text, "textual token JSON");
  exact->add_option("--alignment", ex_alignment, "alignment CSV");
  exact->add_option("--pair", ex_pair, "single player pair i j")->expected(2);
  exact->add_option("--cap", ex_cap, "exact enumeration cap");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "sampled or surrogate interaction");
  std::string es_table, es_video, es_text, es_alignment, es_method = "mc", es_model;
  std::vector<int> es_pair;
  int es_samples = 1024;
  bool es_antithetic = false;
  estimate->add_option("--table", es_table, "payoff-table CSV");
  estimate->add_option("--video", es_video, "visual token JSON");
  estimate->add_option("--text", es_text, "textual token JSON");
  estimate->add_option("--alignment", es_alignment, "alignment CSV");
  estimate->add_option("--pair", es_pair, "single player pair i j")->expected(2);
  estimate->add_option("--method", es_method, "mc|surrogate");
  estimate->add_option("--samples", es_samples, "Monte Carlo draws");
  estimate->add_flag("--antithetic", es_antithetic, "pair draws with their complements");
  estimate->add_option("--model", es_model, "surrogate model JSON");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "density-peaks clustering / level stacks");
  std::string cl_tokens, cl_video, cl_text;
  int cl_clusters = 0, cl_knn = 0;
  std::vector<int> cl_counts_v, cl_counts_t;
  cluster->add_option("--tokens", cl_tokens, "token JSON to cluster");
  cluster->add_option("--clusters", cl_clusters, "cluster count for --tokens");
  cluster->add_option("--knn", cl_knn, "neighbor count (default min(5, n-1))");
  cluster->add_option("--video", cl_video, "visual token JSON (level stack)");
  cluster->add_option("--text", cl_text, "textual token JSON (level stack)");
  cluster->add_option("--counts-v", cl_counts_v, "video level counts e,a,o")->delimiter(',');
  cluster->add_option("--counts-t", cl_counts_t, "text level counts e,a,o")->delimiter(',');

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "full hierarchy, interaction and loss stack");
  std::vector<std::string> pl_videos, pl_texts;
  std::vector<int> pl_counts_v, pl_counts_t;
  std::string pl_entity_method = "mc", pl_model;
  hbi::PipelineConfig pl_cfg;
  bool pl_no_smoothing = false, pl_no_readout = false;
  pipeline->add_option("--video", pl_videos, "visual token JSON (repeat per batch item)");
  pipeline->add_option("--text", pl_texts, "textual token JSON (repeat per batch item)");
  pipeline->add_option("--entity-method", pl_entity_method, "mc|surrogate|exact");
  pipeline->add_option("--samples", pl_cfg.mc_samples, "Monte Carlo draws at the entity level");
  pipeline->add_option("--model", pl_model, "surrogate model JSON");
  pipeline->add_option("--tau", pl_cfg.tau, "contrastive temperature");
  pipeline->add_option("--alpha", pl_cfg.alpha, "interaction loss weight");
  pipeline->add_option("--beta", pl_cfg.beta, "self-distillation weight");
  pipeline->add_option("--cap", pl_cfg.exact_cap, "exact enumeration cap");
  pipeline->add_option("--knn", pl_cfg.stack.knn, "neighbor count for clustering");
  pipeline->add_option("--counts-v", pl_counts_v, "video level counts e,a,o")->delimiter(',');
  pipeline->add_option("--counts-t", pl_counts_t, "text level counts e,a,o")->delimiter(',');
  pipeline->add_flag("--r-equals-i", pl_cfg.relationship_from_interaction,
                     "inject the interaction map as the relationship R");
  pipeline->add_flag("--no-smoothing", pl_no_smoothing, "disable temporal smoothing");
  pipeline->add_flag("--no-readout", pl_no_readout, "disable the attention read-out");

  // axioms
  auto* axioms = app.add_subcommand("axioms", "randomized axiom verification");
  std::string ax_families = "additive,unanimity,dictator,quadratic_size,random_table,cross_modal";
  int ax_trials = 100, ax_n_min = 3, ax_n_max = 12;
  double ax_tolerance = 1e-10;
  bool ax_broken = false;
  axioms->add_option("--families", ax_families, "comma-separated family names");
  axioms->add_option("--trials", ax_trials, "trials per axiom and family");
  axioms->add_option("--tolerance", ax_tolerance, "pass threshold");
  axioms->add_option("--n-min", ax_n_min, "smallest player count");
  axioms->add_option("--n-max", ax_n_max, "largest player count");
  axioms->add_flag("--inject-broken", ax_broken,
                   "self-test hook: corrupt every game and expect failure");

  // train-surrogate
  auto* train = app.add_subcommand("train-surrogate", "fit the interaction estimator");
  std::string tr_data, tr_emit;
  int tr_generate = 0, tr_nv = 4, tr_nt = 6;
  hbi::TrainConfig tr_cfg;
  train->add_option("--data", tr_data, "directory of alignment_*.csv / target_*.csv");
  train->add_option("--generate", tr_generate, "synthesize N training pairs instead");
  train->add_option("--nv", tr_nv, "frame count for --generate");
  train->add_option("--nt", tr_nt, "word count for --generate");
  train->add_option("--epochs", tr_cfg.epochs, "training epochs");
  train->add_option("--lr", tr_cfg.learning_rate, "learning rate");
  train->add_option("--hidden", tr_cfg.hidden, "hidden width");
  train->add_option("--emit-dataset", tr_emit, "also write the dataset to this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    // Config file values fill in whatever the command line left untouched.
    if (!common.config_path.empty()) {
      hbi::ConfigFile cfg = hbi::load_config_file(common.config_path);
      auto untouched = [&](CLI::App* cmd, const char* flag) {
        return cmd->get_option(flag)->count() == 0;
      };
      if (cfg.has("seed") && untouched(&app, "--seed")) common.seed = cfg.get_u64("seed");
      if (cfg.has("format") && untouched(&app, "--format")) common.format = cfg.get_string("format");
      if (pipeline->parsed()) {
        if (cfg.has("tau") && untouched(pipeline, "--tau")) pl_cfg.tau = cfg.get_double("tau");
        if (cfg.has("alpha") && untouched(pipeline, "--alpha"))
          pl_cfg.alpha = cfg.get_double("alpha");
        if (cfg.has("beta") && untouched(pipeline, "--beta")) pl_cfg.beta = cfg.get_double("beta");
        if (cfg.has("samples") && untouched(pipeline, "--samples"))
          pl_cfg.mc_samples = cfg.get_int("samples");
        if (cfg.has("cap") && untouched(pipeline, "--cap"))
          pl_cfg.exact_cap = cfg.get_int("cap");
        if (cfg.has("knn") && untouched(pipeline, "--knn")) pl_cfg.stack.knn = cfg.get_int("knn");
        if (cfg.has("entity_method") && untouched(pipeline, "--entity-method"))
          pl_entity_method = cfg.get_string("entity_method");
        if (cfg.has("counts_v") && untouched(pipeline, "--counts-v"))
          pl_counts_v = cfg.get_int_list("counts_v");
        if (cfg.has("counts_t") && untouched(pipeline, "--counts-t"))
          pl_counts_t = cfg.get_int_list("counts_t");
      }
      if (axioms->parsed()) {
        if (cfg.has("trials") && untouched(axioms, "--trials")) ax_trials = cfg.get_int("trials");
        if (cfg.has("tolerance") && untouched(axioms, "--tolerance"))
          ax_tolerance = cfg.get_double("tolerance");
        if (cfg.has("families") && untouched(axioms, "--families"))
          ax_families = cfg.get_string("families");
        if (cfg.has("n_min") && untouched(axioms, "--n-min")) ax_n_min = cfg.get_int("n_min");
        if (cfg.has("n_max") && untouched(axioms, "--n-max")) ax_n_max = cfg.get_int("n_max");
      }
      if (estimate->parsed() && cfg.has("samples") && untouched(estimate, "--samples"))
        es_samples = cfg.get_int("samples");
      if (train->parsed()) {
        if (cfg.has("epochs") && untouched(train, "--epochs")) tr_cfg.epochs = cfg.get_int("epochs");
        if (cfg.has("lr") && untouched(train, "--lr")) tr_cfg.learning_rate = cfg.get_double("lr");
        if (cfg.has("hidden") && untouched(train, "--hidden")) tr_cfg.hidden = cfg.get_int("hidden");
      }
    }

    if (exact->parsed())
      return run_exact(common, load_game_input(ex_table, ex_video, ex_text, ex_alignment), ex_pair,
                       ex_cap);
    if (estimate->parsed())
      return run_estimate(common, load_game_input(es_table, es_video, es_text, es_alignment),
                          es_pair, es_method, es_samples, es_antithetic, es_model);
    if (cluster->parsed())
      return run_cluster(common, cl_tokens, cl_video, cl_text, cl_clusters, cl_knn, cl_counts_v,
                         cl_counts_t);
    if (pipeline->parsed()) {
      pl_cfg.stack.temporal_smoothing = !pl_no_smoothing;
      pl_cfg.stack.attention_readout = !pl_no_readout;
      return run_pipeline_cmd(common, pl_videos, pl_texts, pl_cfg, pl_entity_method, pl_model,
                              pl_counts_v, pl_counts_t);
    }
    if (axioms->parsed())
      return run_axioms(common, ax_families, ax_trials, ax_tolerance, ax_n_min, ax_n_max,
                        ax_broken);
    if (train->parsed())
      return run_train(common, tr_data, tr_generate, tr_nv, tr_nt, tr_cfg, tr_emit);
    return 1;
  } catch (const hbi::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hbi::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cerr << "hint: the `estimate` subcommand handles games past the cap\n";
    return 3;
  } catch (const hbi::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
