#include "tropfit/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "tropfit/parallel.hpp"
#include "tropfit/rng.hpp"
#include "tropfit/space.hpp"

namespace tropfit {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_minus_second(std::span<const double> v) {
  double best = -INFINITY, second = -INFINITY;
  for (double x : v) {
    if (x > best) {
      second = best;
      best = x;
    } else if (x > second) {
      second = x;
    }
  }
  return best - second;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::BadParams, what);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McReport summarize(std::span<const double> values) {
  require(values.size() >= 2, "summarize: need at least 2 values");
  const double n = static_cast<double>(values.size());
  McReport r;
  r.n = values.size();
  r.estimate = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double dv = values[i] - r.estimate;
    sq[i] = dv * dv;
  }
  r.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  return r;
}

Sample sample_mixture(const MixtureSpec& spec, std::size_t n) {
  require(n >= 1, "sample_mixture: n < 1");
  require(!spec.components.empty(), "sample_mixture: no components");
  const std::size_t d = spec.components.front().mean.size();
  double total = 0.0;
  for (const auto& c : spec.components) {
    require(c.mean.size() == d && d >= 2, "sample_mixture: component means need a common d >= 2");
    require(std::isfinite(c.sigma) && c.sigma > 0.0, "sample_mixture: sigma must be > 0");
    if (c.noise == MixtureComponent::Noise::BlockCorrelated) {
      require(c.m >= 1 && static_cast<std::size_t>(c.m) < d, "sample_mixture: block size outside [1, d)");
    }
    if (!(c.weight >= 0.0)) throw Error(ErrorKind::BadWeights, "sample_mixture: negative weight");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::BadWeights,
                "sample_mixture: weights sum to " + std::to_string(total) + ", not 1");
  }

  std::vector<TropPoint> pts(n);
  parallel_for(n, [&](std::size_t i) {
    Stream rng(spec.seed, i);
    const double u = rng.uniform();
    std::size_t k = 0;
    double acc = spec.components[0].weight;
    while (k + 1 < spec.components.size() && u >= acc) acc += spec.components[++k].weight;
    const auto& c = spec.components[k];
    std::vector<double> x(c.mean);
    if (c.noise == MixtureComponent::Noise::Iid) {
      for (auto& v : x) v += c.sigma * rng.normal();
    } else {
      const auto m = static_cast<std::size_t>(c.m);
      double block = 0.0;
      for (std::size_t j = 0; j < m; ++j) block += rng.normal();
      for (std::size_t j = 0; j < d; ++j) x[j] += c.sigma * (j < m ? block : rng.normal());
    }
    pts[i] = canonicalize(x);
  });
  return Sample(std::move(pts));
}

McReport mc_mean_distance_to_h0(int k, double sigma, std::size_t n, std::uint64_t seed) {
  require(k >= 2, "mc_mean_distance_to_h0: k < 2");
  require(std::isfinite(sigma) && sigma >= 0.0, "mc_mean_distance_to_h0: sigma < 0");
  require(n >= 2, "mc_mean_distance_to_h0: n < 2");
  const auto t0 = Clock::now();
  std::vector<double> vals(n);
  parallel_for(n, [&](std::size_t i) {
    Stream rng(seed, i);
    double x[64];
    std::vector<double> big;
    double* p = x;
    if (k > 64) {
      big.resize(static_cast<std::size_t>(k));
      p = big.data();
    }
    for (int j = 0; j < k; ++j) p[j] = sigma * rng.normal();
    vals[i] = max_minus_second({p, static_cast<std::size_t>(k)});
  });
  McReport r = summarize(vals);
  r.experiment = "h0-distance";
  r.seed = seed;
  r.elapsed = seconds_since(t0);
  return r;
}

McReport mc_projection_residual(const ProjectionExperiment& e) {
  const int d = e.d;
  require(std::isfinite(e.sigma) && e.sigma >= 0.0, "mc_projection_residual: sigma < 0");
  require(e.n >= 2, "mc_projection_residual: n < 2");
  int m = 2;
  switch (e.kind) {
    case SpaceKind::A1:
      require(e.mu.size() == 2, "mc_projection_residual: A1 needs 2 mu values");
      break;
    case SpaceKind::Am:
      m = static_cast<int>(e.mu.size());
      require(m >= 1, "mc_projection_residual: Am needs m >= 1 mu values");
      break;
    case SpaceKind::TwoGaussianA0:
      require(!e.correlated, "mc_projection_residual: A0 takes iid noise only");
      break;
  }
  require(d > m && d <= kMaxBlueDim, "mc_projection_residual: need m < d <= " +
                                         std::to_string(kMaxBlueDim));
  for (double v : e.mu) require(std::isfinite(v), "mc_projection_residual: mu not finite");

  const auto t0 = Clock::now();
  const TropMatrix gen = e.kind == SpaceKind::TwoGaussianA0 ? a0_matrix(d) : am_matrix(e.mu, d);
  const StiefelSpace space = StiefelSpace::from_matrix(gen);
  const auto du = static_cast<std::size_t>(d);
  const auto mu_count = static_cast<std::size_t>(m);

  std::vector<double> vals(e.n);
  std::vector<char> valid(e.n, 1);
  std::vector<double> blue_diff(e.n, -1.0);
  parallel_for(e.n, [&](std::size_t i) {
    Stream rng(e.seed, i);
    std::vector<double> eps(du), x(du), proj;
    if (e.kind == SpaceKind::TwoGaussianA0) {
      const int component = rng.uniform() < 0.5 ? 1 : 2;
      for (auto& v : eps) v = e.sigma * rng.normal();
      for (double v : eps) {
        if (std::abs(v) >= 5.0) valid[i] = 0;
      }
      if (!valid[i]) return;
      x = eps;
      x[0] += component == 1 ? 5.0 : -5.0;
      x[1] += component == 1 ? -5.0 : 5.0;
      proj = a0_projection_formula(eps, component);
    } else {
      for (auto& v : eps) v = e.sigma * rng.normal();
      if (e.correlated) {
        double block = 0.0;
        for (std::size_t j = 0; j < mu_count; ++j) block += eps[j];
        for (std::size_t j = 0; j < du; ++j) x[j] = j < mu_count ? e.mu[j] + block : eps[j];
        proj = correlated_projection_formula(e.mu, eps, m);
      } else {
        for (std::size_t j = 0; j < du; ++j) x[j] = (j < mu_count ? e.mu[j] : 0.0) + eps[j];
        proj = axis_aligned_projection_formula(e.mu, eps, m);
      }
    }
    vals[i] = trop_distance(x, proj);
    if (e.blue_every > 0 && i % e.blue_every == 0) {
      blue_diff[i] = trop_distance(proj, blue_rule_raw(space, x));
    }
  });

  std::vector<double> kept;
  kept.reserve(e.n);
  McReport partial;
  for (std::size_t i = 0; i < e.n; ++i) {
    if (!valid[i]) {
      ++partial.excluded;
      continue;
    }
    kept.push_back(vals[i]);
    if (blue_diff[i] >= 0.0) {
      ++partial.blue_checked;
      partial.blue_max_diff = std::max(partial.blue_max_diff, blue_diff[i]);
    }
  }
  McReport r = summarize(kept);
  r.excluded = partial.excluded;
  r.blue_checked = partial.blue_checked;
  r.blue_max_diff = partial.blue_max_diff;
  r.seed = e.seed;
  const double root = std::sqrt(2.0 * std::log(static_cast<double>(d)));
  switch (e.kind) {
    case SpaceKind::A1:
    case SpaceKind::Am:
      r.experiment = e.kind == SpaceKind::A1 ? "projection-a1" : "projection-am";
      if (!e.correlated) {
        r.bound = 2.0 * e.sigma * root;
      } else {
        r.bound = (m == 2 ? 4.0 : 2.0 * m) * e.sigma * root;
        r.experiment += "-correlated";
      }
      break;
    case SpaceKind::TwoGaussianA0:
      r.experiment = "projection-a0";
      r.bound = 2.0 * e.sigma * std::sqrt(2.0 * std::log(static_cast<double>(d - 1)));
      break;
  }
  r.elapsed = seconds_since(t0);
  return r;
}

McReport mc_center_bias(int d, double sigma, std::size_t n_inner, std::size_t n_outer,
                        std::uint64_t seed) {
  require(d >= 2, "mc_center_bias: d < 2");
  require(std::isfinite(sigma) && sigma >= 0.0, "mc_center_bias: sigma < 0");
  require(n_inner >= 2, "mc_center_bias: n_inner < 2");
  require(n_outer >= 2, "mc_center_bias: n_outer < 2");
  const auto t0 = Clock::now();
  const auto du = static_cast<std::size_t>(d);
  std::vector<double> vals(n_outer);
  parallel_for(n_outer, [&](std::size_t r) {
    Stream rng(seed, r);
    std::vector<double> xs(n_inner * du), mean(du, 0.0), dist(n_inner);
    for (auto& v : xs) v = sigma * rng.normal();
    for (std::size_t j = 0; j < du; ++j) {
      std::vector<double> col(n_inner);
      for (std::size_t i = 0; i < n_inner; ++i) col[i] = xs[i * du + j];
      mean[j] = pairwise_sum(col) / static_cast<double>(n_inner);
    }
    for (std::size_t i = 0; i < n_inner; ++i) {
      dist[i] = trop_distance(std::span<const double>(&xs[i * du], du), mean);
    }
    vals[r] = pairwise_sum(dist) / static_cast<double>(n_inner);
  });
  McReport r = summarize(vals);
  r.experiment = "center-bias";
  r.seed = seed;
  const double ni = static_cast<double>(n_inner);
  r.bound = std::sqrt((ni - 1.0) / ni) * 2.0 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(d)));
  r.elapsed = seconds_since(t0);
  return r;
}

}  // namespace tropfit
