#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "hbi/errors.hpp"
#include "hbi/pipeline.hpp"
#include "hbi/rng.hpp"
#include "hbi/svg_heatmap.hpp"

using namespace hbi;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

TokenSet random_tokens(int count, int dim, Modality m, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 88));
  Mat t(count, dim);
  for (double& v : t.data) v = normal(rng);
  return make_token_set(std::move(t), m);
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "hbi_cli_tests";
  fs::create_directories(dir);
  return dir;
}

void write_token_json(const fs::path& path, const TokenSet& ts) {
  json rows = json::array();
  for (int i = 0; i < ts.count(); ++i) {
    json row = json::array();
    for (int d = 0; d < ts.dim(); ++d) row.push_back(ts.tokens(i, d));
    rows.push_back(std::move(row));
  }
  json doc = {{"modality", modality_name(ts.modality)}, {"tokens", std::move(rows)}};
  std::ofstream(path) << doc.dump();
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
  std::string cmd = std::string(HBI_CLI_PATH) + " " + args + " > " + stdout_path.string() +
                    " 2> " + stdout_path.string() + ".err";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("pipeline with reference counts") {
  std::vector<TokenSet> videos{random_tokens(12, 16, Modality::visual, 1)};
  std::vector<TokenSet> texts{random_tokens(24, 16, Modality::textual, 2)};
  PipelineConfig cfg;
  cfg.mc_samples = 64;
  cfg.seed = 5;

  PipelineResult result = run_pipeline(videos, texts, cfg);
  const json& out = result.output;

  CHECK(out["levels"]["entity"]["shape"] == json({12, 24}));
  CHECK(out["levels"]["action"]["shape"] == json({3, 6}));
  CHECK(out["levels"]["event"]["shape"] == json({2, 3}));
  CHECK(out["levels"]["entity"]["method"] == "monte_carlo");
  CHECK(out["levels"]["action"]["method"] == "exact");

  CHECK(out["metadata"]["tau"] == kDefaultTau);
  CHECK(out["metadata"]["alpha"] == kDefaultAlpha);
  CHECK(out["metadata"]["beta"] == kDefaultBeta);
  CHECK(out["metadata"]["counts"]["video"] == json({12, 3, 2}));
  CHECK(out["metadata"]["counts"]["text"] == json({24, 6, 3}));

  // Single matched pair: no contrast, no distillation signal.
  CHECK(out["levels"]["entity"]["losses"]["contrastive"] == 0.0);
  CHECK(out["losses"]["distill_e2a"] == 0.0);
  CHECK(out["losses"]["distill_e2o"] == 0.0);
  for (const char* level : {"entity", "action", "event"}) {
    double li = out["levels"][level]["losses"]["interaction"];
    CHECK(std::isfinite(li));
    CHECK(li >= 0.0);
  }
  double total = out["losses"]["total"];
  CHECK(std::isfinite(total));

  // Serialized output re-parses into the identical document.
  json reparsed = json::parse(out.dump());
  CHECK(reparsed == out);
}

TEST_CASE("pipeline with R injected as I zeroes the interaction loss") {
  std::vector<TokenSet> videos{random_tokens(6, 8, Modality::visual, 3),
                               random_tokens(6, 8, Modality::visual, 4)};
  std::vector<TokenSet> texts{random_tokens(8, 8, Modality::textual, 5),
                              random_tokens(8, 8, Modality::textual, 6)};
  PipelineConfig cfg;
  cfg.counts = LevelCounts{6, 3, 2, 8, 4, 2};
  cfg.entity_method = EntityMethod::exact;  // 14 players, within the cap
  cfg.relationship_from_interaction = true;

  PipelineResult result = run_pipeline(videos, texts, cfg);
  for (const char* level : {"entity", "action", "event"}) {
    CHECK(result.output["levels"][level]["losses"]["interaction"] == 0.0);
    double lc = result.output["levels"][level]["losses"]["contrastive"];
    CHECK(lc >= 0.0);  // B = 2 gives a real contrastive term
  }
  double total = result.output["losses"]["total"];
  CHECK(std::isfinite(total));
}

TEST_CASE("pipeline svg output is deterministic") {
  std::vector<TokenSet> videos{random_tokens(6, 8, Modality::visual, 9)};
  std::vector<TokenSet> texts{random_tokens(8, 8, Modality::textual, 10)};
  PipelineConfig cfg;
  cfg.counts = LevelCounts{6, 3, 2, 8, 4, 2};
  cfg.entity_method = EntityMethod::exact;

  PipelineResult a = run_pipeline(videos, texts, cfg, true);
  PipelineResult b = run_pipeline(videos, texts, cfg, true);
  REQUIRE(a.svgs.size() == 3);
  for (std::size_t k = 0; k < a.svgs.size(); ++k) {
    CHECK(a.svgs[k].first == b.svgs[k].first);
    CHECK(a.svgs[k].second == b.svgs[k].second);
    CHECK(a.svgs[k].second.find("<svg") != std::string::npos);
    CHECK(a.svgs[k].second.find("min=") != std::string::npos);
  }
}

TEST_CASE("pipeline input validation") {
  std::vector<TokenSet> videos{random_tokens(6, 8, Modality::visual, 11)};
  std::vector<TokenSet> texts{random_tokens(8, 4, Modality::textual, 12)};
  PipelineConfig cfg;
  cfg.counts = LevelCounts{6, 3, 2, 8, 4, 2};
  CHECK_THROWS_AS(run_pipeline(videos, texts, cfg), DimensionMismatch);

  std::vector<TokenSet> empty;
  CHECK_THROWS_AS(run_pipeline(empty, empty, cfg), std::invalid_argument);

  PipelineConfig needs_model;
  needs_model.entity_method = EntityMethod::surrogate;
  std::vector<TokenSet> ok_texts{random_tokens(8, 8, Modality::textual, 13)};
  CHECK_THROWS_AS(run_pipeline(videos, ok_texts, needs_model), std::invalid_argument);
}

TEST_CASE("heatmap renderer basics") {
  Mat m(2, 3);
  m(0, 0) = -1.0;
  m(1, 2) = 2.0;
  HeatmapSpec spec;
  spec.title = "demo";
  spec.row_labels = {"f0", "f1"};
  spec.col_labels = {"w0", "w1", "w2"};
  std::string svg = render_heatmap_svg(m, spec);
  CHECK(svg.find("min=-1") != std::string::npos);
  CHECK(svg.find("max=2") != std::string::npos);
  CHECK(svg.find("f1") != std::string::npos);
  CHECK(svg.find("w2") != std::string::npos);
  CHECK(render_heatmap_svg(m, spec) == svg);

  HeatmapSpec bad;
  bad.row_labels = {"only-one"};
  CHECK_THROWS_AS(render_heatmap_svg(m, bad), std::invalid_argument);
}

TEST_CASE("cli end to end") {
  fs::path dir = scratch_dir();
  fs::path out = dir / "out.json";

  // Inputs shared by several subcommands.
  fs::path table = dir / "squared3.csv";
  {
    std::ofstream csv(table);
    csv << "coalition_mask,value\n";
    for (int mask = 0; mask < 8; ++mask) {
      int size = __builtin_popcount(static_cast<unsigned>(mask));
      csv << mask << ',' << size * size << '\n';
    }
  }
  fs::path video_small = dir / "video_small.json";
  fs::path text_small = dir / "text_small.json";
  write_token_json(video_small, random_tokens(4, 8, Modality::visual, 21));
  write_token_json(text_small, random_tokens(6, 8, Modality::textual, 22));
  fs::path video_big = dir / "video_big.json";
  fs::path text_big = dir / "text_big.json";
  write_token_json(video_big, random_tokens(12, 8, Modality::visual, 23));
  write_token_json(text_big, random_tokens(24, 8, Modality::textual, 24));

  SUBCASE("exact pair from a payoff table") {
    int rc = run_cli("--output " + out.string() + " exact --table " + table.string() +
                         " --pair 0 1",
                     dir / "exact.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["interaction"]["value"] == 2.0);
    CHECK(doc["interaction"]["method"] == "exact");
  }

  SUBCASE("exact on an additive table gives the all-zero map") {
    fs::path additive = dir / "additive3.csv";
    {
      std::ofstream csv(additive);
      csv << "coalition_mask,value\n";
      const double w[3] = {1.0, 2.0, 4.0};
      for (int mask = 0; mask < 8; ++mask) {
        double v = 0.0;
        for (int p = 0; p < 3; ++p)
          if (mask & (1 << p)) v += w[p];
        csv << mask << ',' << v << '\n';
      }
    }
    int rc = run_cli("--output " + out.string() + " exact --table " + additive.string(),
                     dir / "additive.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    for (const auto& row : doc["interaction"]["values"])
      for (const auto& v : row) CHECK(std::abs(v.get<double>()) < 1e-12);
  }

  SUBCASE("default axiom run exits clean") {
    int rc = run_cli("axioms --output " + out.string(), dir / "axioms_default.log");
    CHECK(rc == 0);
    CHECK(read_json(out)["all_pass"] == true);
    CHECK(read_json(out)["reports"].size() == 24);  // six families, four axioms
  }

  SUBCASE("exact full map from tokens") {
    int rc = run_cli("--output " + out.string() + " exact --video " + video_small.string() +
                         " --text " + text_small.string(),
                     dir / "exact2.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["interaction"]["values"].size() == 4);
    CHECK(doc["interaction"]["values"][0].size() == 6);
  }

  SUBCASE("mismatched embedding dims exit 4") {
    fs::path narrow = dir / "narrow_text.json";
    write_token_json(narrow, random_tokens(6, 4, Modality::textual, 25));
    int rc = run_cli("pipeline --video " + video_small.string() + " --text " + narrow.string() +
                         " --counts-v 4,2,1 --counts-t 6,3,2 --entity-method exact",
                     dir / "dims.log");
    CHECK(rc == 4);
  }

  SUBCASE("missing input file exits 2") {
    int rc = run_cli("exact --table " + (dir / "absent.csv").string(), dir / "missing.log");
    CHECK(rc == 2);
  }

  SUBCASE("cap violation exits 3 and suggests the estimator") {
    int rc = run_cli("exact --video " + video_big.string() + " --text " + text_big.string(),
                     dir / "cap.log");
    CHECK(rc == 3);
    std::ifstream err(dir / "cap.log.err");
    std::stringstream buf;
    buf << err.rdbuf();
    CHECK(buf.str().find("estimate") != std::string::npos);
  }

  SUBCASE("estimate on the big token pair") {
    int rc = run_cli("--seed 9 --output " + out.string() + " estimate --video " +
                         video_big.string() + " --text " + text_big.string() +
                         " --samples 32 --pair 0 12",
                     dir / "estimate.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["interaction"]["method"] == "monte_carlo");
    CHECK(doc["interaction"].contains("std_error"));
  }

  SUBCASE("csv output for matrices") {
    fs::path csv_out = dir / "map.csv";
    int rc = run_cli("--format csv --output " + csv_out.string() + " exact --table " +
                         table.string(),
                     dir / "csv.log");
    CHECK(rc == 0);
    std::ifstream in(csv_out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "3,3");
    std::string row;
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 3);
  }

  SUBCASE("cluster builds a level stack for a token pair") {
    int rc = run_cli("--output " + out.string() + " cluster --video " + video_small.string() +
                         " --text " + text_small.string() +
                         " --counts-v 4,2,1 --counts-t 6,3,2 --knn 2",
                     dir / "stack.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["entity"]["video"]["count"] == 4);
    CHECK(doc["action"]["video"]["count"] == 2);
    CHECK(doc["event"]["text"]["count"] == 2);
    CHECK(doc["action"]["video_clusters"]["assignment"].size() == 4);
  }

  SUBCASE("cluster tokens") {
    int rc = run_cli("--output " + out.string() + " cluster --tokens " + video_small.string() +
                         " --clusters 2",
                     dir / "cluster.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["assignment"].size() == 4);
    CHECK(doc["centers"].size() == 2);
  }

  SUBCASE("pipeline with svg artifacts") {
    int rc = run_cli("--seed 3 --svg --output " + out.string() + " pipeline --video " +
                         video_small.string() + " --text " + text_small.string() +
                         " --counts-v 4,2,1 --counts-t 6,3,2 --entity-method exact",
                     dir / "pipeline.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["levels"]["entity"]["shape"] == json({4, 6}));
    CHECK(doc["metadata"]["entity_method"] == "exact");
    CHECK(doc["metadata"]["tau"] == 0.01);  // defaults echoed untouched
    CHECK(doc["metadata"]["alpha"] == 1.0);
    CHECK(doc["metadata"]["beta"] == 2.0);
    for (const char* level : {"entity", "action", "event"}) {
      fs::path svg = dir / ("out_" + std::string(level) + ".svg");
      CHECK(fs::exists(svg));
    }
  }

  SUBCASE("axioms pass by default and fail when broken") {
    int rc = run_cli("--output " + out.string() +
                         " axioms --families additive,random_table --trials 5 --n-max 8",
                     dir / "axioms.log");
    CHECK(rc == 0);
    CHECK(read_json(out)["all_pass"] == true);

    rc = run_cli("--output " + out.string() +
                     " axioms --families random_table --trials 5 --n-max 8 --inject-broken",
                 dir / "axioms_broken.log");
    CHECK(rc == 5);
    CHECK(read_json(out)["all_pass"] == false);  // report still written

    rc = run_cli("axioms --families not_a_family --trials 2", dir / "axioms_unknown.log");
    CHECK(rc == 2);
  }

  SUBCASE("train then reuse the surrogate") {
    fs::path model = dir / "model.json";
    fs::path emitted = dir / "emitted_dataset";
    fs::remove_all(emitted);
    int rc = run_cli("--seed 4 --output " + model.string() +
                         " train-surrogate --generate 8 --nv 4 --nt 6 --epochs 40 --hidden 16" +
                         " --emit-dataset " + emitted.string(),
                     dir / "train.log");
    CHECK(rc == 0);
    CHECK(fs::exists(model));
    CHECK(fs::exists(emitted / "alignment_0007.csv"));
    CHECK(fs::exists(emitted / "target_0007.csv"));

    // The emitted corpus feeds the --data path of a fresh run.
    rc = run_cli("--seed 4 --output " + (dir / "model2.json").string() +
                     " train-surrogate --data " + emitted.string() + " --epochs 5 --hidden 16",
                 dir / "train2.log");
    CHECK(rc == 0);

    rc = run_cli("--output " + out.string() + " estimate --method surrogate --model " +
                     model.string() + " --video " + video_small.string() + " --text " +
                     text_small.string(),
                 dir / "surrogate.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["interaction"]["method"] == "surrogate");
    CHECK(doc["interaction"]["values"].size() == 4);
  }

  SUBCASE("config file fills defaults and flags win") {
    fs::path conf = dir / "run.conf";
    std::ofstream(conf) << "# pipeline defaults\n"
                        << "tau = 0.5\n"
                        << "alpha = 0.25\n"
                        << "samples = 8\n";
    int rc = run_cli("--config " + conf.string() + " --output " + out.string() +
                         " pipeline --video " + video_small.string() + " --text " +
                         text_small.string() +
                         " --counts-v 4,2,1 --counts-t 6,3,2 --entity-method exact --alpha 0.75",
                     dir / "config.log");
    CHECK(rc == 0);
    json doc = read_json(out);
    CHECK(doc["metadata"]["tau"] == 0.5);     // from config
    CHECK(doc["metadata"]["alpha"] == 0.75);  // flag wins
  }

  SUBCASE("stderr never contains partial json") {
    int rc = run_cli("axioms --families additive --trials 3 --n-max 6", dir / "stderr.log");
    CHECK(rc == 0);
    std::ifstream err((dir / "stderr.log.err").string());
    std::stringstream buf;
    buf << err.rdbuf();
    CHECK(buf.str().find('{') == std::string::npos);
  }
}
