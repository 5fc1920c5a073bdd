#include "tropfit/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tropfit/subsets.hpp"

namespace tropfit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMaxGrowTable = std::uint64_t{1} << 22;

// Colex rank of tau + {j} for every j, -1 when j is in tau.
void grow_ranks(std::span<const int> tau, int d, std::int32_t* out) {
  for (int j = 0; j < d; ++j) {
    if (std::binary_search(tau.begin(), tau.end(), j)) {
      out[j] = -1;
      continue;
    }
    std::uint64_t r = 0;
    std::size_t pos = 0;
    bool placed = false;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      if (!placed && j < tau[i]) {
        r += binomial(j, static_cast<int>(pos) + 1);
        ++pos;
        placed = true;
      }
      r += binomial(tau[i], static_cast<int>(pos) + 1);
      ++pos;
    }
    if (!placed) r += binomial(j, static_cast<int>(pos) + 1);
    out[j] = static_cast<std::int32_t>(r);
  }
}

// Colex rank of tau - {tau[s]}.
std::uint64_t shrink_rank(std::span<const int> tau, std::size_t s) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (i < s) r += binomial(tau[i], static_cast<int>(i) + 1);
    if (i > s) r += binomial(tau[i], static_cast<int>(i));
  }
  return r;
}

void check_dim(const StiefelSpace& space, std::size_t n, const char* where) {
  if (static_cast<int>(n) != space.dim()) {
    throw Error(ErrorKind::DimMismatch, std::string(where) + ": point has dimension " +
                                            std::to_string(n) + ", space has " +
                                            std::to_string(space.dim()));
  }
}

// Per (m+1)-subset: top two finite terms p(tau - t) + x_t and the argmax.
template <class F>
void for_each_circuit(const StiefelSpace& space, std::span<const double> x, F&& f) {
  const PluckerVector& p = space.plucker();
  for_each_subset(p.dim(), p.rank() + 1, [&](std::span<const int> tau) {
    double best = -kInf, second = -kInf;
    int arg = -1;
    int finite = 0;
    for (std::size_t s = 0; s < tau.size(); ++s) {
      const ExtReal ps = p.at_rank(static_cast<std::size_t>(shrink_rank(tau, s)));
      if (ps.is_bottom()) continue;
      ++finite;
      const double term = ps.value() + x[static_cast<std::size_t>(tau[s])];
      if (term > best) {
        second = best;
        best = term;
        arg = tau[s];
      } else if (term > second) {
        second = term;
      }
    }
    f(finite, best, second, arg);
  });
}

}  // namespace

StiefelSpace::StiefelSpace(PluckerVector p) : p_(std::move(p)) {
  values_.reserve(p_.size());
  for (const ExtReal& x : p_.coords()) values_.push_back(x.as_double());
  const int d = p_.dim();
  const int m = p_.rank();
  const std::uint64_t rows = binomial(d, m - 1);
  if (rows * static_cast<std::uint64_t>(d) <= kMaxGrowTable) {
    grow_.resize(rows * static_cast<std::size_t>(d));
    std::size_t r = 0;
    for_each_subset(d, m - 1, [&](std::span<const int> tau) {
      grow_ranks(tau, d, grow_.data() + r * static_cast<std::size_t>(d));
      ++r;
    });
  }
}

StiefelSpace StiefelSpace::from_plucker(PluckerVector p, double tol) {
  const auto violations = validate_plucker(p, tol);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::string msg = "StiefelSpace: exchange relation fails (" +
                      std::to_string(violations.size()) + " violations, first gap " +
                      std::to_string(v.gap) + ")";
    throw Error(ErrorKind::InvalidPlucker, msg);
  }
  return StiefelSpace(std::move(p));
}

StiefelSpace StiefelSpace::from_matrix(const TropMatrix& a) {
  return StiefelSpace(plucker_from_matrix(a));
}

StiefelSpace StiefelSpace::hyperplane(std::span<const double> omega) {
  const int d = static_cast<int>(omega.size());
  if (d < 2) throw Error(ErrorKind::DimTooSmall, "hyperplane: dimension < 2");
  std::vector<ExtReal> coords(binomial(d, d - 1));
  std::vector<int> rest;
  for (int i = 0; i < d; ++i) {
    rest.clear();
    for (int j = 0; j < d; ++j) {
      if (j != i) rest.push_back(j);
    }
    coords[static_cast<std::size_t>(colex_rank(rest))] = ExtReal(omega[static_cast<std::size_t>(i)]);
  }
  return StiefelSpace(PluckerVector(d, d - 1, std::move(coords)));
}

double membership_residual(const StiefelSpace& space, std::span<const double> x) {
  check_dim(space, x.size(), "membership_residual");
  double worst = 0.0;
  for_each_circuit(space, x, [&](int finite, double best, double second, int) {
    if (finite == 0) return;
    worst = std::max(worst, finite == 1 ? kInf : best - second);
  });
  return worst;
}

std::vector<double> blue_rule_raw(const StiefelSpace& space, std::span<const double> u) {
  check_dim(space, u.size(), "blue_rule_project");
  const int d = space.dim();
  const int m = space.rank();
  if (m > kMaxBlueRank || d > kMaxBlueDim) {
    throw Error(ErrorKind::ResourceLimit, "blue_rule_project: m=" + std::to_string(m) +
                                              " d=" + std::to_string(d) + " exceeds limits (m <= " +
                                              std::to_string(kMaxBlueRank) + ", d <= " +
                                              std::to_string(kMaxBlueDim) + ")");
  }
  const auto& pv = space.values_;
  std::vector<double> w(static_cast<std::size_t>(d), -kInf);
  std::vector<std::int32_t> scratch;

  auto visit = [&](const std::int32_t* grow) {
    double c = kInf;
    for (int j = 0; j < d; ++j) {
      const std::int32_t idx = grow[j];
      if (idx < 0) continue;
      const double pj = pv[static_cast<std::size_t>(idx)];
      if (pj == -kInf) continue;
      c = std::min(c, u[static_cast<std::size_t>(j)] - pj);
    }
    if (c == kInf) return;
    for (int i = 0; i < d; ++i) {
      const std::int32_t idx = grow[i];
      if (idx < 0) continue;
      const double pi = pv[static_cast<std::size_t>(idx)];
      if (pi == -kInf) continue;
      w[static_cast<std::size_t>(i)] = std::max(w[static_cast<std::size_t>(i)], pi + c);
    }
  };

  if (!space.grow_.empty()) {
    const std::size_t rows = space.grow_.size() / static_cast<std::size_t>(d);
    for (std::size_t r = 0; r < rows; ++r) visit(space.grow_.data() + r * static_cast<std::size_t>(d));
  } else {
    scratch.resize(static_cast<std::size_t>(d));
    for_each_subset(d, m - 1, [&](std::span<const int> tau) {
      grow_ranks(tau, d, scratch.data());
      visit(scratch.data());
    });
  }
  for (int i = 0; i < d; ++i) {
    if (w[static_cast<std::size_t>(i)] == -kInf) {
      throw Error(ErrorKind::DegeneratePlucker,
                  "blue_rule_project: no finite candidate for coordinate " + std::to_string(i + 1));
    }
  }
  return w;
}

TropPoint blue_rule_project(const StiefelSpace& space, const TropPoint& u) {
  return canonicalize(blue_rule_raw(space, u.coords()));
}

std::vector<double> red_rule_residual(const StiefelSpace& space, const TropPoint& u, double tol) {
  check_dim(space, u.dim(), "red_rule_residual");
  std::vector<double> v(u.dim(), 0.0);
  for_each_circuit(space, u.coords(), [&](int finite, double best, double second, int arg) {
    if (finite < 2) return;
    const double gap = best - second;
    if (gap > tol) {
      auto& slot = v[static_cast<std::size_t>(arg)];
      slot = std::max(slot, gap);
    }
  });
  return v;
}

double hyperplane_distance(std::span<const double> omega, std::span<const double> x) {
  if (omega.size() != x.size()) {
    throw Error(ErrorKind::DimMismatch, "hyperplane_distance: dimensions " +
                                            std::to_string(omega.size()) + " and " +
                                            std::to_string(x.size()));
  }
  if (x.size() < 2) throw Error(ErrorKind::DimTooSmall, "hyperplane_distance: d < 2");
  double best = -kInf, second = -kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = omega[i] + x[i];
    if (t > best) {
      second = best;
      best = t;
    } else if (t > second) {
      second = t;
    }
  }
  return best - second;
}

std::vector<double> hyperplane_project(std::span<const double> omega,
                                       std::span<const double> x) {
  const double gap = hyperplane_distance(omega, x);
  std::vector<double> w(x.begin(), x.end());
  if (gap == 0.0) return w;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (omega[i] + x[i] > omega[arg] + x[arg]) arg = i;
  }
  w[arg] -= gap;
  return w;
}

TropMatrix a1_matrix(double mu1, double mu2, int d) {
  const double mu[2] = {mu1, mu2};
  return am_matrix(mu, d);
}

TropMatrix am_matrix(std::span<const double> mu, int d) {
  const int m = static_cast<int>(mu.size());
  if (m < 1 || m >= d) {
    throw Error(ErrorKind::RankExceedsDim, "am_matrix: need 1 <= m < d");
  }
  std::vector<std::vector<ExtReal>> rows(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    auto& row = rows[static_cast<std::size_t>(r)];
    row.assign(static_cast<std::size_t>(d), ExtReal::bottom());
    row[static_cast<std::size_t>(r)] = ExtReal(mu[static_cast<std::size_t>(r)]);
    for (int j = m; j < d; ++j) row[static_cast<std::size_t>(j)] = ExtReal(0.0);
  }
  return TropMatrix(std::move(rows));
}

TropMatrix a0_matrix(int d) {
  if (d < 3) throw Error(ErrorKind::RankExceedsDim, "a0_matrix: need d >= 3");
  std::vector<std::vector<ExtReal>> rows(2, std::vector<ExtReal>(static_cast<std::size_t>(d), 0.0));
  rows[0][0] = 5.0;
  rows[0][1] = -5.0;
  rows[1][0] = -5.0;
  rows[1][1] = 5.0;
  return TropMatrix(std::move(rows));
}

double mth_smallest(std::span<const double> values, int m) {
  if (m < 1 || static_cast<std::size_t>(m) > values.size()) {
    throw Error(ErrorKind::BadParams, "mth_smallest: rank out of range");
  }
  std::vector<double> v(values.begin(), values.end());
  std::nth_element(v.begin(), v.begin() + (m - 1), v.end());
  return v[static_cast<std::size_t>(m - 1)];
}

namespace {

std::vector<double> min_rule(std::span<const double> mu, std::span<const double> eps, int m) {
  const double star = mth_smallest(eps, m);
  std::vector<double> out(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    out[i] = (static_cast<int>(i) < m ? mu[i] : 0.0) + std::min(star, eps[i]);
  }
  return out;
}

void check_formula_args(std::span<const double> mu, std::span<const double> eps, int m) {
  if (m < 1 || static_cast<std::size_t>(m) >= eps.size() || mu.size() != static_cast<std::size_t>(m)) {
    throw Error(ErrorKind::BadParams, "projection formula: need |mu| = m and 1 <= m < d");
  }
}

}  // namespace

std::vector<double> axis_aligned_projection_formula(std::span<const double> mu,
                                                    std::span<const double> eps, int m) {
  check_formula_args(mu, eps, m);
  return min_rule(mu, eps, m);
}

std::vector<double> correlated_projection_formula(std::span<const double> mu,
                                                  std::span<const double> eps, int m) {
  check_formula_args(mu, eps, m);
  const double block = std::accumulate(eps.begin(), eps.begin() + m, 0.0);
  std::vector<double> shared(eps.begin(), eps.end());
  for (int j = 0; j < m; ++j) shared[static_cast<std::size_t>(j)] = block;
  return min_rule(mu, shared, m);
}

std::vector<double> a0_projection_formula(std::span<const double> eps, int component) {
  const std::size_t d = eps.size();
  if (d < 3 || (component != 1 && component != 2)) {
    throw Error(ErrorKind::BadParams, "a0_projection_formula: need d >= 3, component 1 or 2");
  }
  std::vector<double> w(d);
  if (component == 1) {
    double alpha = eps[0];
    for (std::size_t j = 2; j < d; ++j) alpha = std::min(alpha, eps[j]);
    w[0] = 5.0 + alpha;
    w[1] = -5.0 + eps[1];
    for (std::size_t j = 2; j < d; ++j) w[j] = alpha;
  } else {
    double beta = eps[1];
    for (std::size_t j = 2; j < d; ++j) beta = std::min(beta, eps[j]);
    w[0] = -5.0 + eps[0];
    w[1] = 5.0 + beta;
    for (std::size_t j = 2; j < d; ++j) w[j] = beta;
  }
  return w;
}

}  // namespace tropfit
