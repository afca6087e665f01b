#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hbi/alignment.hpp"
#include "hbi/cross_modal.hpp"
#include "hbi/errors.hpp"
#include "hbi/rng.hpp"
#include "hbi/token_set.hpp"
#include "oracles.hpp"

using namespace hbi;

namespace {

TokenSet tokens2(std::vector<std::vector<double>> rows, Modality m) {
  Mat t(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < t.rows; ++i)
    for (int j = 0; j < t.cols; ++j) t(i, j) = rows[i][j];
  return make_token_set(std::move(t), m);
}

AlignmentMatrix from_rows(std::vector<std::vector<double>> rows) {
  AlignmentMatrix m;
  m.a = Mat(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.a.rows; ++i)
    for (int j = 0; j < m.a.cols; ++j) m.a(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST_CASE("token set json parsing") {
  std::istringstream good(R"({"modality":"visual","tokens":[[1,0],[0,2]],"weights":[0.25,0.75]})");
  TokenSet ts = parse_token_set_json(good, "inline");
  CHECK(ts.count() == 2);
  CHECK(ts.dim() == 2);
  CHECK(ts.modality == Modality::visual);
  CHECK(ts.weights[1] == 0.75);

  std::istringstream defaulted(R"({"modality":"textual","tokens":[[1,1],[2,1],[3,1]]})");
  TokenSet uniform = parse_token_set_json(defaulted, "inline");
  CHECK(uniform.weights == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});

  auto rejects = [](const char* body) {
    std::istringstream in(body);
    CHECK_THROWS_AS(parse_token_set_json(in, "inline"), ParseError);
  };
  rejects(R"({"modality":"audio","tokens":[[1]]})");
  rejects(R"({"modality":"visual","tokens":[[0,0]]})");            // zero norm
  rejects(R"({"modality":"visual","tokens":[[1,0],[1]]})");        // ragged
  rejects(R"({"modality":"visual","tokens":[[1,0]],"weights":[0.5]})");  // sum != 1
  rejects(R"(not json)");
}

TEST_CASE("alignment matrix is the pairwise cosine") {
  TokenSet v = tokens2({{1.0, 0.0}, {1.0, 1.0}}, Modality::visual);
  TokenSet t = tokens2({{2.0, 0.0}, {0.0, 3.0}}, Modality::textual);
  AlignmentMatrix a = alignment_matrix(v, t);
  CHECK(a.a(0, 0) == doctest::Approx(1.0).epsilon(1e-15));          // identical direction
  CHECK(a.a(0, 1) == doctest::Approx(0.0).epsilon(1e-15));          // orthogonal
  CHECK(a.a(1, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  TokenSet wide = tokens2({{1.0, 0.0, 0.0}}, Modality::textual);
  CHECK_THROWS_AS(alignment_matrix(v, wide), DimensionMismatch);
}

TEST_CASE("similarity is the weighted max average") {
  AlignmentMatrix one = from_rows({{0.8}});
  CHECK(similarity(one, std::vector<double>{1.0}, std::vector<double>{1.0}) ==
        doctest::Approx(0.8).epsilon(1e-15));

  AlignmentMatrix eye = from_rows({{1.0, 0.0}, {0.0, 1.0}});
  std::vector<double> half{0.5, 0.5};
  CHECK(similarity(eye, half, half) == doctest::Approx(1.0).epsilon(1e-15));

  AlignmentMatrix mixed = from_rows({{0.5, 0.2}, {0.1, 0.4}});
  CHECK(similarity(mixed, half, half) == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("restriction semantics") {
  CrossModalGame game = make_cross_modal_game(from_rows({{0.5, 0.2}, {0.1, 0.4}}));

  double full = similarity(game.alignment, game.weights_v, game.weights_t);
  CHECK(restricted_similarity(game, Coalition::all(4)) == full);  // bitwise no-op

  CHECK(restricted_similarity(game, Coalition::of({0, 1})) == 0.0);  // frames only
  CHECK(restricted_similarity(game, Coalition::of({2, 3})) == 0.0);  // words only
  CHECK(restricted_similarity(game, Coalition::empty()) == 0.0);

  // frame 0 with word 1: the single surviving pair.
  CHECK(restricted_similarity(game, Coalition::of({0, 3})) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("single modality coalitions score exactly zero") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    int n_v = uniform_int(rng, 1, 6), n_t = uniform_int(rng, 1, 6);
    Mat a(n_v, n_t);
    for (double& v : a.data) v = uniform(rng, -1.0, 1.0);
    AlignmentMatrix al;
    al.a = a;
    CrossModalGame game = make_cross_modal_game(al);
    for (int k = 0; k < 100; ++k) {
      bool frames_side = (rng() & 1) != 0;
      std::uint64_t bits = frames_side ? (rng() & ((1ULL << n_v) - 1))
                                       : ((rng() & ((1ULL << n_t) - 1)) << n_v);
      CHECK(restricted_similarity(game, Coalition{bits}) == 0.0);
    }
  }
}

TEST_CASE("restricted similarity stays within cosine bounds") {
  Rng rng(555);
  Mat a(4, 5);
  for (double& v : a.data) v = uniform(rng, -1.0, 1.0);
  AlignmentMatrix al;
  al.a = a;
  CrossModalGame game = make_cross_modal_game(al);
  for (int k = 0; k < 2000; ++k) {
    Coalition c{rng() & Coalition::all(9).bits};
    double s = restricted_similarity(game, c);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("similarity is equivariant under frame permutation") {
  Rng rng(808);
  Mat a(5, 4);
  for (double& v : a.data) v = uniform(rng, -1.0, 1.0);
  std::vector<double> wv(5), wt(4, 0.25);
  double total = 0.0;
  for (double& w : wv) {
    w = uniform(rng, 0.1, 1.0);
    total += w;
  }
  for (double& w : wv) w /= total;
  AlignmentMatrix al;
  al.a = a;
  double base = similarity(al, wv, wt);

  std::vector<int> perm{3, 0, 4, 1, 2};
  AlignmentMatrix shuffled;
  shuffled.a = Mat(5, 4);
  std::vector<double> wv_shuffled(5);
  for (int i = 0; i < 5; ++i) {
    wv_shuffled[i] = wv[perm[i]];
    for (int j = 0; j < 4; ++j) shuffled.a(i, j) = a(perm[i], j);
  }
  CHECK(similarity(shuffled, wv_shuffled, wt) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("criterion report signs on hand-built alignments") {
  SUBCASE("empty pair lists leave only the zero assertion") {
    CrossModalGame game = make_cross_modal_game(from_rows({{0.3, 0.1}, {0.0, 0.2}}));
    CriterionReport r = criterion_report(game, {}, {});
    CHECK(r.zero_without_cooperation);
    CHECK(r.zero_checks > 0);
    CHECK(r.positives.empty());
    CHECK(r.negatives.empty());
    CHECK(r.all_signs_ok());
  }

  SUBCASE("a strongly corresponding pair has synergy") {
    CrossModalGame game = make_cross_modal_game(from_rows({{0.99, 0.05}, {0.10, 0.08}}));
    std::vector<std::pair<int, int>> positives{{0, 0}};
    CriterionReport r = criterion_report(game, positives, {});
    REQUIRE(r.positives.size() == 1);
    CHECK(r.positives[0].sign_ok);
    CHECK(r.positives[0].value < 0.0);
    // Cross-check against the naive enumeration oracle; the reported value
    // is the negated interaction.
    double oracle_i = oracle::naive_banzhaf_interaction(game.as_game(), 0, 2);
    CHECK(r.positives[0].interaction == doctest::Approx(oracle_i).epsilon(1e-12));
    CHECK(r.positives[0].value == doctest::Approx(-oracle_i).epsilon(1e-10));
    CHECK(oracle_i == doctest::Approx(0.70375).epsilon(1e-12));  // hand enumeration
  }

  SUBCASE("an anti-aligned pair has conflict") {
    CrossModalGame game = make_cross_modal_game(from_rows({{0.6, -0.2}, {-0.1, -0.9}}));
    std::vector<std::pair<int, int>> negatives{{1, 1}};
    CriterionReport r = criterion_report(game, {}, negatives);
    REQUIRE(r.negatives.size() == 1);
    CHECK(r.negatives[0].sign_ok);
    CHECK(r.negatives[0].value > 0.0);
    double oracle_i = oracle::naive_banzhaf_interaction(game.as_game(), 1, 3);
    CHECK(oracle_i == doctest::Approx(-0.31875).epsilon(1e-12));  // hand enumeration
  }

  SUBCASE("invalid indices are rejected") {
    CrossModalGame game = make_cross_modal_game(from_rows({{0.5}}));
    std::vector<std::pair<int, int>> bad{{0, 3}};
    CHECK_THROWS_AS(criterion_report(game, bad, {}), std::out_of_range);
  }
}

TEST_CASE("alignment csv round trip") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "hbi_alignment_csv";
  fs::create_directories(dir);
  fs::path p = dir / "a.csv";

  AlignmentMatrix m = from_rows({{0.125, -0.5, 1.0}, {0.0, 0.25, -1.0}});
  save_alignment_csv(p, m);
  AlignmentMatrix back = load_alignment_csv(p);
  CHECK(back.a == m.a);

  std::ofstream(dir / "bad.csv") << "2,2\n0.1,0.2\n0.3\n";
  try {
    load_alignment_csv(dir / "bad.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(load_alignment_csv(dir / "missing.csv"), ParseError);
}
