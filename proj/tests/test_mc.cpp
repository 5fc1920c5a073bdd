#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "tropfit/mc.hpp"
#include "tropfit/rng.hpp"

using namespace tropfit;

namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// E[X_(k) - X_(k-1)] for k iid N(0,1): k * int Phi^(k-1) (1 - Phi) dx.
double top_gap_quadrature(int k) {
  auto f = [k](double x) { return k * std::pow(Phi(x), k - 1) * (1.0 - Phi(x)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -12.0, 12.0, 15, 1e-13);
}

// E[max - min] of d iid N(0,1): int 1 - Phi^d - (1 - Phi)^d dx.
double range_quadrature(int d) {
  auto f = [d](double x) { return 1.0 - std::pow(Phi(x), d) - std::pow(1.0 - Phi(x), d); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -12.0, 12.0, 15, 1e-13);
}

void set_threads(const char* v) { setenv("TROPFIT_THREADS", v, 1); }

}  // namespace

TEST_CASE("streams are keyed by seed and index") {
  Stream a(1, 2), b(1, 2), c(1, 3), e(2, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != e());
  }
  Stream s(9, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    CHECK((u > 0.0 && u < 1.0));
    CHECK(s.below(7) < 7);
  }
}

TEST_CASE("normal sampler moments") {
  const std::size_t n = 1000000;
  std::vector<double> z(n), z2(n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream s(5, i);
    z[i] = s.normal();
    z2[i] = z[i] * z[i];
  }
  const double mean = pairwise_sum(z) / n;
  const double var = pairwise_sum(z2) / n - mean * mean;
  CHECK(std::abs(mean) <= 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) <= 0.01);
}

TEST_CASE("summaries") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  const auto r = summarize(std::vector<double>{1, 2, 3, 4});
  CHECK(r.estimate == 2.5);
  CHECK(r.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(summarize(std::vector<double>{1}), Error);
}

TEST_CASE("quadrature oracle reproduces the two closed-form constants") {
  CHECK(top_gap_quadrature(2) == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(top_gap_quadrature(3) == doctest::Approx(3.0 / (2.0 * std::sqrt(M_PI))).epsilon(1e-10));
  CHECK(range_quadrature(3) == doctest::Approx(3.0 / std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("sample_mixture") {
  MixtureSpec tiny{{{{1, 2, 3, 4}, MixtureComponent::Noise::Iid, 1e-12, 1, 1.0}}, 3};
  const auto s0 = sample_mixture(tiny, 1000);
  const auto mu = canonicalize(std::vector<double>{1, 2, 3, 4});
  for (const auto& x : s0) CHECK(trop_distance(x, mu) <= 1e-9);

  const double sigma = 0.7;
  MixtureSpec iid{{{{0, 0, 0}, MixtureComponent::Noise::Iid, sigma, 1, 1.0}}, 11};
  const auto s1 = sample_mixture(iid, 100000);
  std::vector<double> diff, diff2;
  for (const auto& x : s1) diff.push_back(x[1] - x[0]);
  const double mean = pairwise_sum(diff) / diff.size();
  for (double v : diff) diff2.push_back((v - mean) * (v - mean));
  const double var = pairwise_sum(diff2) / (diff.size() - 1);
  CHECK(std::abs(var - 2 * sigma * sigma) <= 0.05 * 2 * sigma * sigma);

  // Block-correlated: X_1 - X_2 is exactly zero when both sit in the block.
  MixtureSpec blk{{{{0, 0, 0, 0}, MixtureComponent::Noise::BlockCorrelated, 1.0, 2, 1.0}}, 13};
  for (const auto& x : sample_mixture(blk, 1000)) CHECK(x[1] == x[0]);

  const std::vector<double> c1{5, -5, 0, 0}, c2{-5, 5, 0, 0};
  MixtureSpec two{{{c1, MixtureComponent::Noise::Iid, 0.1, 1, 0.3}, {c2, MixtureComponent::Noise::Iid, 0.1, 1, 0.7}}, 17};
  const std::size_t n = 20000;
  const auto s2 = sample_mixture(two, n);
  std::size_t first = 0;
  for (const auto& x : s2) first += x[1] < -5.0;  // canonical (0, -10, ...) for c1
  const double p = static_cast<double>(first) / n;
  CHECK(std::abs(p - 0.3) <= 3 * std::sqrt(0.3 * 0.7 / n));

  MixtureSpec bad = two;
  bad.components[1].weight = 0.6;
  try {
    sample_mixture(bad, 10);
    FAIL("expected BadWeights");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadWeights);
  }
  bad.components[1].weight = 0.7;
  bad.components[1].sigma = 0.0;
  CHECK_THROWS_AS(sample_mixture(bad, 10), Error);
}

TEST_CASE("mixture draws do not depend on the thread count") {
  const std::vector<double> c1{5, -5, 0, 0, 1}, c2{-5, 5, 0, 0, 2};
  MixtureSpec two{{{c1, MixtureComponent::Noise::Iid, 0.4, 1, 0.5}, {c2, MixtureComponent::Noise::BlockCorrelated, 0.4, 3, 0.5}}, 21};
  set_threads("1");
  const auto a = sample_mixture(two, 5000);
  set_threads("7");
  const auto b = sample_mixture(two, 5000);
  unsetenv("TROPFIT_THREADS");
  CHECK(a.points() == b.points());
}

TEST_CASE("distance to H0: two- and three-coordinate constants") {
  const double c2 = 2.0 / std::sqrt(M_PI), c3 = 3.0 / (2.0 * std::sqrt(M_PI));
  const auto r2 = mc_mean_distance_to_h0(2, 1.0, 1000000, 1);
  const auto r3 = mc_mean_distance_to_h0(3, 1.0, 1000000, 2);
  CHECK(std::abs(r2.estimate - c2) <= 3 * r2.std_error);
  CHECK(std::abs(r3.estimate - c3) <= 3 * r3.std_error);
  // Scale equivariance.
  const auto r3s = mc_mean_distance_to_h0(3, 2.5, 200000, 2);
  CHECK(std::abs(r3s.estimate - 2.5 * c3) <= 4 * r3s.std_error);

  const auto zero = mc_mean_distance_to_h0(4, 0.0, 1000, 3);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.std_error == 0.0);
  CHECK_THROWS_AS(mc_mean_distance_to_h0(1, 1.0, 10, 0), Error);
}

TEST_CASE("distance to H0 matches quadrature for k up to 10 and decreases") {
  double prev = INFINITY;
  for (int k = 2; k <= 10; ++k) {
    const auto r = mc_mean_distance_to_h0(k, 1.0, 200000, 100 + k);
    CHECK(std::abs(r.estimate - top_gap_quadrature(k)) <= 4 * r.std_error);
    CHECK(top_gap_quadrature(k) < prev);
    prev = top_gap_quadrature(k);
  }
}

TEST_CASE("estimates are bit-identical across thread counts") {
  set_threads("1");
  const auto a = mc_mean_distance_to_h0(5, 1.0, 50000, 77);
  ProjectionExperiment e{SpaceKind::Am, 8, {1.0, -2.0, 0.5}, 0.2, true, 5000, 9, 10};
  const auto pa = mc_projection_residual(e);
  const auto ca = mc_center_bias(4, 1.0, 10, 3000, 5);
  set_threads("5");
  const auto b = mc_mean_distance_to_h0(5, 1.0, 50000, 77);
  const auto pb = mc_projection_residual(e);
  const auto cb = mc_center_bias(4, 1.0, 10, 3000, 5);
  unsetenv("TROPFIT_THREADS");
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK(pa.estimate == pb.estimate);
  CHECK(pa.blue_max_diff == pb.blue_max_diff);
  CHECK(ca.estimate == cb.estimate);
}

TEST_CASE("projection residual: A1 and Am") {
  ProjectionExperiment a1{SpaceKind::A1, 4, {3.0, -2.0}, 0.1, false, 100000, 1, 100};
  const auto r = mc_projection_residual(a1);
  REQUIRE(r.bound.has_value());
  CHECK(*r.bound == doctest::Approx(2 * 0.1 * std::sqrt(2 * std::log(4.0))));
  CHECK(r.estimate <= *r.bound);
  CHECK(r.blue_checked == 1000);
  CHECK(r.blue_max_diff <= 1e-12);
  CHECK(r.excluded == 0);

  a1.sigma = 1e-12;
  CHECK(mc_projection_residual(a1).estimate <= 1e-10);

  for (int m = 2; m <= 4; ++m) {
    std::vector<double> mu;
    for (int j = 0; j < m; ++j) mu.push_back(1.5 * j - 2.0);
    for (bool corr : {false, true}) {
      ProjectionExperiment am{SpaceKind::Am, 12, mu, 0.1, corr, 20000, 3, 20};
      const auto rm = mc_projection_residual(am);
      const double root = std::sqrt(2 * std::log(12.0));
      const double expect = !corr ? 2 * 0.1 * root : (m == 2 ? 4 : 2 * m) * 0.1 * root;
      CHECK(*rm.bound == doctest::Approx(expect));
      CHECK(rm.estimate <= *rm.bound);
      CHECK(rm.blue_max_diff <= 1e-12);
    }
  }
  ProjectionExperiment bad{SpaceKind::A1, 4, {1.0}, 0.1};
  CHECK_THROWS_AS(mc_projection_residual(bad), Error);
  bad = {SpaceKind::Am, 3, {1.0, 2.0, 3.0}, 0.1};
  CHECK_THROWS_AS(mc_projection_residual(bad), Error);
}

TEST_CASE("projection residual: two-Gaussian A0") {
  ProjectionExperiment a0{SpaceKind::TwoGaussianA0, 10, {}, 0.1, false, 10000, 4, 1};
  const auto r = mc_projection_residual(a0);
  CHECK(*r.bound == doctest::Approx(2 * 0.1 * std::sqrt(2 * std::log(9.0))));
  CHECK(r.estimate <= *r.bound);
  CHECK(r.blue_checked == 10000);
  CHECK(r.blue_max_diff <= 1e-12);
  CHECK(r.excluded == 0);

  // Large noise: draws with |eps| >= 5 are excluded and counted.
  a0.sigma = 2.5;
  a0.n = 5000;
  const auto wide = mc_projection_residual(a0);
  CHECK(wide.excluded > 0);
  CHECK(wide.n + wide.excluded == 5000);
  CHECK(wide.blue_max_diff <= 1e-12);
  a0.correlated = true;
  CHECK_THROWS_AS(mc_projection_residual(a0), Error);
}

TEST_CASE("center bias") {
  const auto r = mc_center_bias(3, 1.0, 10, 20000, 6);
  CHECK(*r.bound == doctest::Approx(std::sqrt(0.9) * 2 * std::sqrt(2 * std::log(3.0))));
  CHECK(r.estimate <= *r.bound);
  // Many inner draws: the sample mean is nearly the true center.
  const auto big = mc_center_bias(3, 1.0, 2000, 400, 8);
  CHECK(std::abs(big.estimate - range_quadrature(3)) <= 4 * big.std_error + 0.01);
  CHECK(mc_center_bias(5, 0.0, 4, 10, 1).estimate == 0.0);
  CHECK_THROWS_AS(mc_center_bias(3, 1.0, 1, 10, 1), Error);
}
