#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "oracles.hpp"
#include "tropfit/linalg.hpp"
#include "tropfit/subsets.hpp"

using namespace tropfit;
using tropfit::testing::random_matrix;
using tropfit::testing::tdet_by_permutations;

namespace {

const ExtReal kBot = ExtReal::bottom();

ExtReal p_at(const PluckerVector& p, std::vector<int> one_based) {
  for (int& x : one_based) --x;
  return p.at_any(one_based);
}

TropMatrix example_matrix(double c) {
  return TropMatrix({{0.0, 5.0, -5.0, c}, {0.0, -5.0, 5.0, -c}});
}

}  // namespace

TEST_CASE("colex ranking") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  std::uint64_t expected = 0;
  for_each_subset(6, 3, [&](std::span<const int> s) {
    CHECK(colex_rank(s) == expected);
    const auto back = colex_unrank(expected, 3);
    CHECK(std::equal(back.begin(), back.end(), s.begin(), s.end()));
    ++expected;
  });
  CHECK(expected == binomial(6, 3));
  CHECK(all_subsets(4, 0).size() == 1);
}

TEST_CASE("tdet examples") {
  const double w1 = 1.25, w2 = -0.5;
  CHECK(tdet(TropMatrix({{-w1, kBot}, {kBot, -w2}})) == ExtReal(-w1 - w2));
  CHECK(tdet(TropMatrix({{5.0, -5.0}, {-5.0, 5.0}})) == ExtReal(10.0));
  CHECK(tdet(TropMatrix(std::vector<std::vector<ExtReal>>{{3.5}})) == ExtReal(3.5));
  CHECK_THROWS_AS(tdet(TropMatrix(std::vector<std::vector<ExtReal>>{{1.0, 2.0}})), Error);
  // No permutation with full finite support.
  CHECK(tdet(TropMatrix({{1.0, 2.0, 3.0}, {kBot, kBot, 1.0}, {kBot, kBot, 4.0}})).is_bottom());
}

TEST_CASE("tdet agrees with permutation enumeration") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 600; ++t) {
    const std::size_t q = 1 + static_cast<std::size_t>(t % 7);
    const bool holes = t % 2 == 1;
    const TropMatrix a = random_matrix(rng, q, q, holes);
    std::vector<std::vector<ExtReal>> rows(q, std::vector<ExtReal>(q));
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) rows[i][j] = a(i, j);
    const ExtReal brute = tdet_by_permutations(rows);
    const ExtReal fast = tdet(a);
    REQUIRE(brute.is_bottom() == fast.is_bottom());
    if (fast.is_finite()) CHECK(fast.value() == doctest::Approx(brute.value()).epsilon(1e-12));
  }
}

TEST_CASE("tdet row scaling and large q") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t q = 2 + static_cast<std::size_t>(t % 12);
    const TropMatrix a = random_matrix(rng, q, q);
    const double c = 1.5;
    const std::size_t row = static_cast<std::size_t>(t) % q;
    std::vector<std::vector<ExtReal>> rows(q, std::vector<ExtReal>(q));
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) rows[i][j] = trop_mul(a(i, j), i == row ? c : 0.0);
    CHECK(tdet(TropMatrix(rows)).value() == doctest::Approx(tdet(a).value() + c).epsilon(1e-12));
  }
}

TEST_CASE("Plucker vector of the 2x4 example matrix") {
  const auto p = plucker_from_matrix(example_matrix(1.0));
  CHECK(p_at(p, {1, 2}) == ExtReal(5.0));
  CHECK(p_at(p, {1, 3}) == ExtReal(5.0));
  CHECK(p_at(p, {1, 4}) == ExtReal(1.0));
  CHECK(p_at(p, {2, 3}) == ExtReal(10.0));
  CHECK(p_at(p, {2, 4}) == ExtReal(4.0));
  CHECK(p_at(p, {3, 4}) == ExtReal(6.0));
  CHECK(validate_plucker(p).empty());

  // The general-c values: 5, 5, c, 10, 5 - c, 5 + c.
  const double c = 2.5;
  const auto pc = plucker_from_matrix(example_matrix(c));
  CHECK(p_at(pc, {1, 4}) == ExtReal(c));
  CHECK(p_at(pc, {2, 4}) == ExtReal(5 - c));
  CHECK(p_at(pc, {3, 4}) == ExtReal(5 + c));
}

TEST_CASE("Plucker coordinates of A1") {
  const double mu1 = 3.0, mu2 = -2.0;
  const int d = 6;
  std::vector<std::vector<ExtReal>> rows(2, std::vector<ExtReal>(d, 0.0));
  rows[0][0] = mu1;
  rows[0][1] = kBot;
  rows[1][0] = kBot;
  rows[1][1] = mu2;
  const auto p = plucker_from_matrix(TropMatrix(rows));
  CHECK(p_at(p, {1, 2}) == ExtReal(mu1 + mu2));
  for (int i = 3; i <= d; ++i) {
    CHECK(p_at(p, {1, i}) == ExtReal(mu1));
    CHECK(p_at(p, {2, i}) == ExtReal(mu2));
    for (int j = i + 1; j <= d; ++j) CHECK(p_at(p, {i, j}) == ExtReal(0.0));
  }
  CHECK(validate_plucker(p).empty());
}

TEST_CASE("single-row and square-ish matrices") {
  const auto p1 = plucker_from_matrix(TropMatrix({{1.0, kBot, 3.0}}));
  CHECK(p_at(p1, {1}) == ExtReal(1.0));
  CHECK(p_at(p1, {2}).is_bottom());
  CHECK(p_at(p1, {3}) == ExtReal(3.0));
  CHECK_THROWS_AS(plucker_from_matrix(TropMatrix({{1.0, 2.0}, {3.0, 4.0}})), Error);
  try {
    plucker_from_matrix(TropMatrix({{1.0, 2.0}, {3.0, 4.0}}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankExceedsDim);
  }
  const auto p3 = plucker_from_matrix(TropMatrix({{0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 4.0, 2.0}, {2.0, 2.0, 0.0, 1.0}}));
  CHECK(p3.size() == 4);
  CHECK(validate_plucker(p3).empty());
}

TEST_CASE("validate_plucker detects a perturbed coordinate") {
  const auto p = plucker_from_matrix(example_matrix(1.0));
  auto coords = p.coords();
  const std::vector<int> s12{0, 1};
  coords[static_cast<std::size_t>(colex_rank(s12))] = ExtReal(15.0);
  const PluckerVector bad(4, 2, coords);
  const auto violations = validate_plucker(bad);
  REQUIRE_FALSE(violations.empty());
  // sigma = {3}, tau = {1,2,4}: p13 + p24 = 9, p23 + p14 = 11, p34 + p12 = 21.
  bool found = false;
  for (const auto& v : violations) {
    if (v.sigma.size() == 1 && v.tau.size() == 3) found = true;
    CHECK(v.gap > 1e-9);
  }
  CHECK(found);
}

TEST_CASE("every finite triple is a valid d=3, m=2 Plucker vector") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 1000; ++t) {
    const PluckerVector p(3, 2, {u(rng), u(rng), u(rng)});
    CHECK(validate_plucker(p).empty());
  }
}

TEST_CASE("matrix-derived Plucker vectors pass the exchange check") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 3 + static_cast<std::size_t>(t % 4);
    const std::size_t m = 1 + static_cast<std::size_t>(t / 4) % (d - 1);
    const auto a = random_matrix(rng, m, d, t % 3 == 0);
    try {
      const auto p = plucker_from_matrix(a);
      CHECK(validate_plucker(p).empty());
    } catch (const Error& e) {
      // Every minor bottom is possible with holes; nothing else may throw.
      CHECK(e.kind() == ErrorKind::InvalidPlucker);
    }
  }
}

TEST_CASE("column scaling shifts exactly the minors containing the column") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 200; ++t) {
    const int d = 5, m = 2;
    const auto a = random_matrix(rng, m, d);
    const int k = t % d;
    const double c = 0.75;
    std::vector<std::vector<ExtReal>> rows(m, std::vector<ExtReal>(d));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) rows[i][j] = trop_mul(a(i, j), j == k ? c : 0.0);
    const auto p = plucker_from_matrix(a);
    const auto q = plucker_from_matrix(TropMatrix(rows));
    std::size_t r = 0;
    for_each_subset(d, m, [&](std::span<const int> s) {
      const bool has = std::find(s.begin(), s.end(), k) != s.end();
      CHECK(q.at_rank(r).value() == doctest::Approx(p.at_rank(r).value() + (has ? c : 0.0)));
      ++r;
    });
  }
}
