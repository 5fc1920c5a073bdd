#include "tropfit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "tropfit/parallel.hpp"
#include "tropfit/rng.hpp"
#include "tropfit/simplex.hpp"

namespace tropfit {
namespace {

constexpr double kMinStep = 1e-6;
constexpr std::size_t kMaxPasses = 100000;
constexpr std::size_t kMaxGridNodes = std::size_t{1} << 26;
constexpr std::size_t kMaxApexCandidates = 512;

using Direction = std::vector<std::pair<std::size_t, double>>;

// Pattern search: try +-step along each direction, keep walking while a
// direction improves, halve the step after a pass without progress.
template <class F>
std::size_t coordinate_descent(std::vector<double>& x, double& fx,
                               const std::vector<Direction>& dirs, double step, F&& f,
                               std::vector<double>& trace) {
  std::size_t moves = 0;
  std::vector<double> trial;
  for (std::size_t pass = 0; pass < kMaxPasses && step >= kMinStep && fx > 0.0; ++pass) {
    bool improved = false;
    for (const auto& dir : dirs) {
      for (double sign : {1.0, -1.0}) {
        while (true) {
          trial = x;
          for (const auto& [i, c] : dir) trial[i] += sign * step * c;
          const double ft = f(trial);
          if (!(ft < fx)) break;
          x.swap(trial);
          fx = ft;
          trace.push_back(fx);
          ++moves;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2.0;
  }
  return moves;
}

std::vector<Direction> torus_directions(std::size_t d) {
  std::vector<Direction> dirs;
  for (std::size_t j = 0; j < d; ++j) dirs.push_back({{j, 1.0}});
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) dirs.push_back({{j, 1.0}, {k, -1.0}});
  }
  return dirs;
}

double spread(const Sample& sample) {
  double s = 0.0;
  for (const auto& x : sample) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    s = std::max(s, *hi - *lo);
  }
  return std::max(s, 1.0);
}

struct GridBest {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();
};

// Minimum of f over a k^(dims) lattice, ties to the lowest index. Each chunk
// scans a contiguous index range so the result is independent of threads.
template <class F>
GridBest grid_minimum(std::size_t k, std::size_t dims, const GridSpec& grid, F&& f) {
  std::size_t total = 1;
  for (std::size_t a = 0; a < dims; ++a) total *= k;
  const std::size_t chunks = std::min<std::size_t>(total, 256);
  std::vector<GridBest> best(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = total * c / chunks;
    const std::size_t end = total * (c + 1) / chunks;
    std::vector<double> node(dims + 1, 0.0);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      for (std::size_t a = 0; a < dims; ++a) {
        node[a + 1] = grid.node(rest % k);
        rest /= k;
      }
      const double v = f(node);
      if (v < best[c].value) best[c] = {v, idx};
    }
  });
  GridBest out;
  for (const auto& b : best) {
    if (b.value < out.value) out = b;
  }
  return out;
}

std::vector<double> lattice_point(std::size_t idx, std::size_t k, std::size_t dims,
                                  const GridSpec& grid) {
  std::vector<double> node(dims + 1, 0.0);
  for (std::size_t a = 0; a < dims; ++a) {
    node[a + 1] = grid.node(idx % k);
    idx /= k;
  }
  return node;
}

}  // namespace

Sample::Sample(std::vector<TropPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::BadParams, "sample: no points");
  for (const auto& p : points_) {
    if (p.dim() != points_.front().dim()) {
      throw Error(ErrorKind::DimMismatch, "sample: points of dimension " +
                                              std::to_string(points_.front().dim()) + " and " +
                                              std::to_string(p.dim()));
    }
  }
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<TropPoint> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(canonicalize(r));
  return Sample(std::move(pts));
}

std::size_t GridSpec::nodes() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || step <= 0.0 || hi < lo) {
    throw Error(ErrorKind::EmptyGrid, "grid: need finite lo <= hi and step > 0");
  }
  const double k = std::floor((hi - lo) / step + 1e-9) + 1.0;
  if (k > 1e9) throw Error(ErrorKind::ResourceLimit, "grid: too many nodes per axis");
  return static_cast<std::size_t>(k);
}

double fermat_weber_objective(const Sample& sample, std::span<const double> z) {
  double s = 0.0;
  for (const auto& x : sample) s += trop_distance(z, x.coords());
  return s;
}

double hyperplane_objective(const Sample& sample, std::span<const double> omega) {
  double s = 0.0;
  for (const auto& x : sample) s += hyperplane_distance(omega, x.coords());
  return s;
}

double stiefel_objective(const Sample& sample, const StiefelSpace& space) {
  double s = 0.0;
  for (const auto& x : sample) s += trop_distance(x.coords(), blue_rule_raw(space, x.coords()));
  return s;
}

FermatWeber fermat_weber(const Sample& sample) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  if (n == 1) return {sample[0], 0.0};

  //   z_j - a_i <= x_ij              (a_i >= max_j z_j - x_ij)
  //   a_i - t_i - z_k <= -x_ik       (a_i - t_i <= min_k z_k - x_ik)
  // with z_1 = 0 and z, a free (split into +/- parts); minimize sum t_i.
  const std::size_t nz = d - 1;
  const std::size_t cols = 2 * nz + 3 * n;
  const std::size_t rows = 2 * n * d;
  if (rows * cols > kMaxLpEntries) {
    throw Error(ErrorKind::ResourceLimit, "fermat_weber: linear program with " +
                                              std::to_string(rows) + " x " +
                                              std::to_string(cols) + " tableau");
  }
  auto zp = [&](std::size_t j) { return j - 1; };  // j >= 1
  auto zm = [&](std::size_t j) { return nz + j - 1; };
  auto ap = [&](std::size_t i) { return 2 * nz + i; };
  auto am = [&](std::size_t i) { return 2 * nz + n + i; };
  auto tt = [&](std::size_t i) { return 2 * nz + 2 * n + i; };

  std::vector<double> a(rows * cols, 0.0), b(rows, 0.0), c(cols, 0.0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = sample[i];
    for (std::size_t j = 0; j < d; ++j) {
      double* r = &a[row * cols];
      if (j > 0) {
        r[zp(j)] = 1.0;
        r[zm(j)] = -1.0;
      }
      r[ap(i)] = -1.0;
      r[am(i)] = 1.0;
      b[row++] = x[j];
    }
    for (std::size_t k = 0; k < d; ++k) {
      double* r = &a[row * cols];
      if (k > 0) {
        r[zp(k)] = -1.0;
        r[zm(k)] = 1.0;
      }
      r[ap(i)] = 1.0;
      r[am(i)] = -1.0;
      r[tt(i)] = -1.0;
      b[row++] = -x[k];
    }
    c[tt(i)] = -1.0;
  }
  const LpResult lp = simplex_maximize(a, b, c);
  if (lp.status != LpStatus::Optimal) {
    throw Error(ErrorKind::Degenerate, "fermat_weber: linear program did not reach an optimum");
  }
  std::vector<double> z(d, 0.0);
  for (std::size_t j = 1; j < d; ++j) z[j] = lp.x[zp(j)] - lp.x[zm(j)];

  FermatWeber best{canonicalize(z), fermat_weber_objective(sample, z)};
  // Guard against tableau round-off: every input point is feasible.
  for (const auto& x : sample) {
    const double v = fermat_weber_objective(sample, x.coords());
    if (v < best.objective) best = {x, v};
  }
  return best;
}

FitResult fit_hyperplane(const Sample& sample, const GridSpec& grid, bool refine) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  if (d < 3) throw Error(ErrorKind::DimTooSmall, "fit_hyperplane: d < 3");
  const std::size_t dims = d - 1;

  GridSpec g = grid;
  std::size_t k = g.nodes();
  const double per_node = static_cast<double>(n * d);
  const double budget =
      std::min(static_cast<double>(kMaxGridWork) / per_node, static_cast<double>(kMaxGridNodes));
  const bool coarse = std::pow(static_cast<double>(k), static_cast<double>(dims)) > budget;
  if (coarse) {
    std::size_t kk = static_cast<std::size_t>(std::floor(std::pow(budget, 1.0 / dims)));
    while (kk > 2 && std::pow(static_cast<double>(kk), static_cast<double>(dims)) > budget) --kk;
    k = std::max<std::size_t>(kk, 2);
    g.step = (g.hi - g.lo) / static_cast<double>(k - 1);
  }

  auto f = [&](std::span<const double> omega) { return hyperplane_objective(sample, omega); };
  const GridBest gb = grid_minimum(k, dims, g, f);
  std::vector<double> omega = lattice_point(gb.index, k, dims, g);
  double fo = gb.value;
  if (coarse) {
    const std::size_t count = std::min(n, kMaxApexCandidates);
    std::vector<double> vals(count);
    parallel_for(count, [&](std::size_t i) {
      std::vector<double> w(d);
      for (std::size_t j = 0; j < d; ++j) w[j] = -sample[i][j];
      vals[i] = f(w);
    });
    for (std::size_t i = 0; i < count; ++i) {
      if (vals[i] < fo) {
        fo = vals[i];
        for (std::size_t j = 0; j < d; ++j) omega[j] = -sample[i][j];
      }
    }
  }

  FitResult out;
  out.trace.push_back(fo);
  if (refine) {
    out.iterations = coordinate_descent(omega, fo, torus_directions(d), g.step, f, out.trace);
  }
  const TropPoint normal = canonicalize(omega);
  out.restarts = 1;
  out.projections.reserve(n);
  out.distances.reserve(n);
  for (const auto& x : sample) {
    out.projections.push_back(canonicalize(hyperplane_project(normal.coords(), x.coords())));
    out.distances.push_back(hyperplane_distance(normal.coords(), x.coords()));
  }
  out.objective = std::accumulate(out.distances.begin(), out.distances.end(), 0.0);
  out.space = HyperplaneNormal{normal};
  return out;
}

FitResult fit_stiefel(const Sample& sample, int m, int restarts, std::uint64_t seed) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  if (m < 1 || static_cast<std::size_t>(m) >= d) {
    throw Error(ErrorKind::RankExceedsDim, "fit_stiefel: need 1 <= m < d, got m = " +
                                               std::to_string(m) + ", d = " + std::to_string(d));
  }
  if (m > kMaxBlueRank || d > static_cast<std::size_t>(kMaxBlueDim)) {
    throw Error(ErrorKind::ResourceLimit, "fit_stiefel: Blue Rule limited to m <= " +
                                              std::to_string(kMaxBlueRank) + ", d <= " +
                                              std::to_string(kMaxBlueDim));
  }
  if (restarts < 1) throw Error(ErrorKind::BadParams, "fit_stiefel: restarts < 1");
  const auto mm = static_cast<std::size_t>(m);
  const double s = spread(sample);

  std::vector<double> center;
  try {
    const auto fw = fermat_weber(sample);
    center.assign(fw.point.begin(), fw.point.end());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ResourceLimit) throw;
    center.assign(sample[0].begin(), sample[0].end());
  }

  auto objective = [&](const std::vector<double>& a) {
    return stiefel_objective(sample, StiefelSpace::from_matrix(TropMatrix::from_real(a, mm, d)));
  };
  auto perturbed_center = [&](std::vector<double>& a, std::size_t r) {
    for (std::size_t j = 0; j < d; ++j) a[r * d + j] = center[j];
    if (r > 0) a[r * d + (r % d)] += 0.5 * s;
  };

  struct Run {
    std::vector<double> a;
    double value = 0.0;
    std::vector<double> trace;
    std::size_t moves = 0;
  };
  std::vector<Run> runs(static_cast<std::size_t>(restarts));
  std::vector<Direction> dirs;
  for (std::size_t i = 0; i < mm * d; ++i) dirs.push_back({{i, 1.0}});

  parallel_for(runs.size(), [&](std::size_t r) {
    Stream rng(seed, r);
    std::vector<double> a(mm * d, 0.0);
    if (r == 0) {
      for (std::size_t row = 0; row < mm; ++row) perturbed_center(a, row);
    } else {
      std::vector<std::size_t> pick;
      if (r == 1) {
        // Greedy farthest points, starting from the first.
        std::vector<double> gap(n, std::numeric_limits<double>::infinity());
        std::size_t next = 0;
        while (pick.size() < std::min(mm, n)) {
          pick.push_back(next);
          for (std::size_t i = 0; i < n; ++i) {
            gap[i] = std::min(gap[i], trop_distance(sample[i], sample[next]));
          }
          next = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
        }
      } else {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < std::min(mm, n); ++i) {
          std::swap(idx[i], idx[i + rng.below(n - i)]);
          pick.push_back(idx[i]);
        }
      }
      for (std::size_t row = 0; row < mm; ++row) {
        if (row < pick.size()) {
          for (std::size_t j = 0; j < d; ++j) a[row * d + j] = sample[pick[row]][j];
        } else {
          perturbed_center(a, row);
        }
        if (r >= 2) {
          for (std::size_t j = 0; j < d; ++j) a[row * d + j] += 0.05 * s * rng.normal();
        }
      }
    }
    Run& run = runs[r];
    run.value = objective(a);
    run.trace.push_back(run.value);
    run.moves = coordinate_descent(a, run.value, dirs, 0.25 * s, objective, run.trace);
    run.a = std::move(a);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].value < runs[best].value) best = r;
  }
  if (n == mm) {
    // The points themselves generate a space through all of them.
    Run exact;
    for (const auto& x : sample) exact.a.insert(exact.a.end(), x.begin(), x.end());
    exact.value = 0.0;
    exact.trace.push_back(objective(exact.a));
    runs.push_back(std::move(exact));
    best = runs.size() - 1;
  }
  FitResult out;
  const TropMatrix gen = TropMatrix::from_real(runs[best].a, mm, d);
  const StiefelSpace space = StiefelSpace::from_matrix(gen);
  out.projections.reserve(n);
  out.distances.reserve(n);
  for (const auto& x : sample) {
    out.projections.push_back(blue_rule_project(space, x));
    out.distances.push_back(trop_distance(x, out.projections.back()));
  }
  out.objective = std::accumulate(out.distances.begin(), out.distances.end(), 0.0);
  out.space = space;
  out.generator = gen;
  out.iterations = runs[best].moves;
  out.restarts = static_cast<std::size_t>(restarts);
  out.trace = std::move(runs[best].trace);
  return out;
}

StiefelSpace two_point_stiefel(const TropPoint& mu, const TropPoint& nu, double tol) {
  if (mu.dim() != nu.dim()) {
    throw Error(ErrorKind::DimMismatch, "two_point_stiefel: dimensions " +
                                            std::to_string(mu.dim()) + " and " +
                                            std::to_string(nu.dim()));
  }
  const std::size_t d = mu.dim();
  std::string pairs;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs((mu[i] - nu[i]) - (mu[j] - nu[j])) <= tol) {
        if (!pairs.empty()) pairs += ", ";
        pairs += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      }
    }
  }
  if (!pairs.empty()) {
    throw Error(ErrorKind::NotGeneralPosition,
                "two_point_stiefel: equal differences mu_i - nu_i at " + pairs);
  }
  std::vector<double> rows(mu.begin(), mu.end());
  rows.insert(rows.end(), nu.begin(), nu.end());
  return StiefelSpace::from_matrix(TropMatrix::from_real(rows, 2, d));
}

ContourGrid contour_grid(const Sample& sample, ContourMode mode, const GridSpec& grid) {
  if (sample.dim() != 3) {
    throw Error(ErrorKind::UnsupportedDim,
                "contour_grid: needs d = 3, got d = " + std::to_string(sample.dim()));
  }
  const std::size_t k = grid.nodes();
  ContourGrid out;
  out.xs.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.xs[i] = grid.node(i);
  out.ys = out.xs;
  out.values.resize(k * k);
  parallel_for(k, [&](std::size_t iy) {
    double node[3] = {0.0, 0.0, out.ys[iy]};
    for (std::size_t ix = 0; ix < k; ++ix) {
      node[1] = out.xs[ix];
      out.values[iy * k + ix] = mode == ContourMode::Hyperplane
                                    ? hyperplane_objective(sample, node)
                                    : fermat_weber_objective(sample, node);
    }
  });
  const auto it = std::min_element(out.values.begin(), out.values.end());
  const auto flat = static_cast<std::size_t>(it - out.values.begin());
  out.min_value = *it;
  out.min_ix = flat % k;
  out.min_iy = flat / k;
  return out;
}

}  // namespace tropfit
