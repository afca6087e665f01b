#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>

#include "hbi/banzhaf.hpp"
#include "hbi/errors.hpp"
#include "hbi/game.hpp"
#include "hbi/rng.hpp"
#include "oracles.hpp"

using namespace hbi;

namespace {

Game counted(const Game& g, std::shared_ptr<long> counter) {
  Game out;
  out.n = g.n;
  out.value = [base = g.value, counter](Coalition c) {
    ++*counter;
    return base(c);
  };
  return out;
}

// Payoff tables whose entries are integer multiples of 2^-12 bounded by 1.
// Every partial sum in the interaction is then exactly representable, so the
// total is independent of summation order.
Game dyadic_table_game(int n, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 7));
  std::vector<double> table(1ULL << n);
  for (double& v : table) v = static_cast<double>(uniform_int(rng, -4096, 4096)) * 0x1.0p-12;
  return table_game(std::move(table));
}

Game permuted_game(const Game& g, const std::vector<int>& perm) {
  Game out;
  out.n = g.n;
  out.value = [base = g.value, perm, n = g.n](Coalition c) {
    std::uint64_t old_bits = 0;
    for (int i = 0; i < n; ++i)
      if (c.contains(perm[i])) old_bits |= 1ULL << i;
    return base(Coalition{old_bits});
  };
  return out;
}

}  // namespace

TEST_CASE("banzhaf value on the named families") {
  Game dictator = dictator_game(3, 0);
  CHECK(banzhaf_value(dictator, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(banzhaf_value(dictator, 1) == doctest::Approx(0.0).epsilon(1e-15));

  Game additive = additive_game({0.5, -1.0, 2.0});
  for (int k = 0; k < 3; ++k)
    CHECK(banzhaf_value(additive, k) ==
          doctest::Approx(additive.value(Coalition::single(k))).epsilon(1e-15));

  Game unanimity = unanimity_game(2, Coalition::all(2));
  CHECK(banzhaf_value(unanimity, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("pairwise interaction on the named families") {
  Game and2 = unanimity_game(2, Coalition::all(2));
  CHECK(banzhaf_interaction_exact(and2, 0, 1).value == doctest::Approx(1.0).epsilon(1e-15));

  Game additive = additive_game({1.0, -0.25, 3.0, 0.125});
  CHECK(banzhaf_interaction_exact(additive, 1, 3).value == doctest::Approx(0.0).epsilon(1e-14));

  Game squared = size_squared_game(3);
  CHECK(banzhaf_interaction_exact(squared, 0, 1).value == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("interaction result carries the query") {
  Game g = random_table_game(5, 11);
  InteractionResult r = banzhaf_interaction_exact(g, 3, 1);
  CHECK(r.i == 3);
  CHECK(r.j == 1);
  CHECK(r.method == Method::exact);
}

TEST_CASE("exact interaction matches the naive oracle") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Rng rng(mix_seed(seed, 21));
    int n = uniform_int(rng, 3, 10);
    Game g = random_table_game(n, seed);
    int i = uniform_int(rng, 0, n - 1);
    int j = (i + 1 + uniform_int(rng, 0, n - 2)) % n;
    double expected = oracle::naive_banzhaf_interaction(g, i, j);
    CHECK(banzhaf_interaction_exact(g, i, j).value == doctest::Approx(expected).epsilon(1e-12));
    int p = uniform_int(rng, 0, n - 1);
    CHECK(banzhaf_value(g, p) ==
          doctest::Approx(oracle::naive_banzhaf_value(g, p)).epsilon(1e-12));
  }
}

TEST_CASE("enumeration visits every coalition exactly once") {
  auto calls = std::make_shared<long>(0);
  Game g = counted(random_table_game(8, 3), calls);

  *calls = 0;
  banzhaf_interaction_exact(g, 2, 5);
  CHECK(*calls == 4L * (1L << 6));  // 4 evaluations per C, 2^(n-2) coalitions

  *calls = 0;
  banzhaf_value(g, 0);
  CHECK(*calls == 2L * (1L << 7));
}

TEST_CASE("reduced game merges a block into the last player") {
  Game squared3 = size_squared_game(3);
  Game merged = reduced_game(squared3, Coalition::of({0, 1}));
  CHECK(merged.n == 2);
  CHECK(merged.value(Coalition::single(1)) == squared3.value(Coalition::of({0, 1})));

  Game additive = additive_game({1.0, 2.0, 4.0});
  Game block = reduced_game(additive, Coalition::of({0, 1}));
  CHECK(banzhaf_value(block, block.n - 1) == doctest::Approx(3.0).epsilon(1e-15));

  Game squared4 = size_squared_game(4);
  Game tail = reduced_game(squared4, Coalition::of({2, 3}));
  CHECK(tail.n == 3);
  // Surviving players 0,1 keep their order; {p0, merged} expands to {0,2,3}.
  CHECK(tail.value(Coalition::of({0, 2})) == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("interaction matrix agrees with pairwise calls") {
  Game additive = additive_game({1.0, 2.0, 3.0, 4.0});
  InteractionMap zero = interaction_matrix_exact(additive, std::vector<int>{0, 1},
                                                 std::vector<int>{2, 3});
  for (double v : zero.values.data) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

  Game and2 = unanimity_game(2, Coalition::all(2));
  InteractionMap single = interaction_matrix_exact(and2, std::vector<int>{0}, std::vector<int>{1});
  CHECK(single.values.rows == 1);
  CHECK(single.values.cols == 1);
  CHECK(single.values(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  Game g = random_table_game(5, 17);
  std::vector<int> left{0, 2}, right{1, 4};
  InteractionMap m = interaction_matrix_exact(g, left, right);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(m.values(a, b) == banzhaf_interaction_exact(g, left[a], right[b]).value);
}

TEST_CASE("argument and cap errors") {
  Game g = random_table_game(4, 5);
  CHECK_THROWS_AS(banzhaf_value(g, 4), std::out_of_range);
  CHECK_THROWS_AS(banzhaf_interaction_exact(g, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(banzhaf_interaction_exact(g, 0, 1, 3), CapExceeded);
  CHECK_THROWS_AS(banzhaf_value(g, 0, 3), CapExceeded);
  CHECK_THROWS_AS(reduced_game(g, Coalition::empty()), std::invalid_argument);
  CHECK_THROWS_AS(interaction_matrix_exact(g, std::vector<int>{0, 1}, std::vector<int>{1, 2}),
                  std::invalid_argument);

  Game wide;
  wide.n = 30;
  wide.value = [](Coalition) { return 0.0; };
  CHECK_THROWS_WITH_AS(banzhaf_interaction_exact(wide, 0, 1),
                       doctest::Contains("exact enumeration infeasible"), CapExceeded);
}

TEST_CASE("interaction is linear in the game") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(mix_seed(seed, 33));
    int n = uniform_int(rng, 4, 10);
    Game g = random_table_game(n, 2 * seed);
    Game h = random_table_game(n, 2 * seed + 1);
    double a = uniform(rng, -2.0, 2.0);
    double b = uniform(rng, -2.0, 2.0);
    Game mix;
    mix.n = n;
    mix.value = [&g, &h, a, b](Coalition c) { return a * g.value(c) + b * h.value(c); };
    int i = uniform_int(rng, 0, n - 1);
    int j = (i + 1 + uniform_int(rng, 0, n - 2)) % n;
    double lhs = banzhaf_interaction_exact(mix, i, j).value;
    double rhs = a * banzhaf_interaction_exact(g, i, j).value +
                 b * banzhaf_interaction_exact(h, i, j).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("additive players have zero interaction") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(mix_seed(seed, 49));
    int n = uniform_int(rng, 4, 10);
    Game base = random_table_game(n, seed + 100);
    double ci = uniform(rng, -1.0, 1.0);
    double cj = uniform(rng, -1.0, 1.0);
    int i = n - 2, j = n - 1;
    Game planted;
    planted.n = n;
    planted.value = [base = base.value, i, j, ci, cj](Coalition c) {
      double v = base(c.without(i).without(j));
      if (c.contains(i)) v += ci;
      if (c.contains(j)) v += cj;
      return v;
    };
    CHECK(std::abs(banzhaf_interaction_exact(planted, i, j).value) <= 1e-12);
  }
}

TEST_CASE("recursive decomposition of the merged pair") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(mix_seed(seed, 57));
    int n = uniform_int(rng, 3, 10);
    Game g = random_table_game(n, seed + 400);
    int i = uniform_int(rng, 0, n - 1);
    int j = (i + 1 + uniform_int(rng, 0, n - 2)) % n;
    Game merged = reduced_game(g, Coalition::of({i, j}));
    double block = banzhaf_value(merged, merged.n - 1);
    double parts = banzhaf_value_within(g, i, Coalition::all(n).without(j)) +
                   banzhaf_value_within(g, j, Coalition::all(n).without(i)) +
                   banzhaf_interaction_exact(g, i, j).value;
    CHECK(block == doctest::Approx(parts).epsilon(1e-10));
  }
}

TEST_CASE("relabeling players leaves the interaction bitwise unchanged") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(mix_seed(seed, 71));
    int n = uniform_int(rng, 4, 12);
    Game g = dyadic_table_game(n, seed);

    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) perm[k] = k;
    for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[uniform_int(rng, 0, k)]);

    Game relabeled = permuted_game(g, perm);
    int i = uniform_int(rng, 0, n - 1);
    int j = (i + 1 + uniform_int(rng, 0, n - 2)) % n;
    double original = banzhaf_interaction_exact(g, i, j).value;
    double mapped = banzhaf_interaction_exact(relabeled, perm[i], perm[j]).value;
    CHECK(original == mapped);  // exact dyadic sums, no tolerance
  }
}

TEST_CASE("payoff csv round trip and rejection") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "hbi_game_csv";
  fs::create_directories(dir);

  fs::path good = dir / "squared3.csv";
  {
    std::ofstream out(good);
    out << "coalition_mask,value\n";
    Game squared = size_squared_game(3);
    for (std::uint64_t mask = 0; mask < 8; ++mask)
      out << mask << ',' << squared.value(Coalition{mask}) << '\n';
  }
  Game loaded = load_payoff_csv(good);
  CHECK(loaded.n == 3);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    double s = static_cast<double>(Coalition{mask}.size());
    CHECK(loaded.value(Coalition{mask}) == s * s);
  }
  CHECK(banzhaf_interaction_exact(loaded, 0, 1).value == doctest::Approx(2.0).epsilon(1e-15));

  auto expect_error_line = [&](const std::string& body, int line) {
    fs::path p = dir / "bad.csv";
    std::ofstream(p) << body;
    try {
      load_payoff_csv(p);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == line);
    }
  };
  expect_error_line("mask,value\n0,1\n", 1);
  expect_error_line("coalition_mask,value\n0,1\nx,2\n", 3);
  expect_error_line("coalition_mask,value\n0,1\n1,2\n1,3\n3,4\n", 4);
  expect_error_line("coalition_mask,value\n0,1\n1,2\n3,4\n", 4);  // mask 2 missing
  CHECK_THROWS_AS(load_payoff_csv(dir / "does_not_exist.csv"), ParseError);
}
