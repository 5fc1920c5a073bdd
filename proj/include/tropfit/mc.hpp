#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tropfit/fit.hpp"

namespace tropfit {

struct MixtureComponent {
  enum class Noise { Iid, BlockCorrelated };
  std::vector<double> mean;
  Noise noise = Noise::Iid;
  double sigma = 1.0;
  int m = 1;  // block size for BlockCorrelated
  double weight = 1.0;
};

// Iid: X = mean + sigma Z. BlockCorrelated(m): X_j = mean_j + sigma (Z_1 + ... + Z_m)
// for j <= m and mean_j + sigma Z_j beyond.
struct MixtureSpec {
  std::vector<MixtureComponent> components;
  std::uint64_t seed = 0;
};

// Draw i uses Stream(seed, i): one uniform picks the component, then d
// normals. Throws BadWeights unless weights are >= 0 and sum to 1 (1e-9),
// BadParams on sigma <= 0, an empty or ragged mean list, or a block size
// outside [1, d).
Sample sample_mixture(const MixtureSpec& spec, std::size_t n);

struct McReport {
  std::string experiment;
  double estimate = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n)
  std::size_t n = 0;       // draws that entered the estimate
  std::uint64_t seed = 0;
  double elapsed = 0.0;    // seconds
  std::optional<double> bound;
  std::size_t excluded = 0;      // draws outside the closed-form validity event
  std::size_t blue_checked = 0;  // draws re-projected with the Blue Rule
  double blue_max_diff = 0.0;    // max d_tr(closed form, Blue Rule) over those
};

// Sum by recursive halving; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

// Mean and standard error of per-draw values. Throws BadParams for n < 2.
McReport summarize(std::span<const double> values);

// E[max - 2nd max] of k iid N(0, sigma^2) coordinates, the distance from X to
// H_0. Draw i uses Stream(seed, i).
McReport mc_mean_distance_to_h0(int k, double sigma, std::size_t n, std::uint64_t seed);

enum class SpaceKind { A1, Am, TwoGaussianA0 };

struct ProjectionExperiment {
  SpaceKind kind = SpaceKind::A1;
  int d = 4;
  std::vector<double> mu;  // 2 values for A1, m values for Am, unused for A0
  double sigma = 0.1;
  bool correlated = false;  // block-correlated noise on the first m coordinates
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  // Every blue_every-th draw is re-projected with the Blue Rule (1 checks
  // every draw, 0 none).
  std::size_t blue_every = 100;
};

// E[d_tr(X, X')] with X' from the closed-form projections. For A0 the two
// centers (5, -5, 0, ...) and (-5, 5, 0, ...) are drawn with weight 1/2 each
// and draws with some |eps_j| >= 5 are excluded. The report carries the
// matching bound: 2 sigma sqrt(2 log d) for iid A1 / Am, 4 sigma sqrt(2 log d)
// for correlated m = 2, 2 m sigma sqrt(2 log d) for correlated m > 2, and
// 2 sigma sqrt(2 log(d - 1)) for A0. Throws BadParams on invalid settings.
McReport mc_projection_residual(const ProjectionExperiment& exp);

// Replication r draws n_inner points from N(0, sigma^2 I_d) with
// Stream(seed, r) and averages d_tr(X_i, sample mean). Bound
// sqrt((n_inner - 1) / n_inner) 2 sigma sqrt(2 log d).
McReport mc_center_bias(int d, double sigma, std::size_t n_inner, std::size_t n_outer,
                        std::uint64_t seed);

}  // namespace tropfit
