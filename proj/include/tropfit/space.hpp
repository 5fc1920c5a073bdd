#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tropfit/core.hpp"
#include "tropfit/linalg.hpp"

namespace tropfit {

// A tropical linear space L_p given by a valid Plücker vector.
class StiefelSpace {
 public:
  // Checks the exchange relations; throws InvalidPlucker with the first
  // violation otherwise.
  static StiefelSpace from_plucker(PluckerVector p, double tol = kDefaultTol);
  // L(A). Tropical minors of a matrix always satisfy the exchange relations,
  // so no check is run (this keeps d = 64 spaces cheap to build).
  static StiefelSpace from_matrix(const TropMatrix& a);
  // H_omega as the rank d-1 space with p([d] - {i}) = omega_i.
  static StiefelSpace hyperplane(std::span<const double> omega);

  const PluckerVector& plucker() const noexcept { return p_; }
  int dim() const noexcept { return p_.dim(); }
  int rank() const noexcept { return p_.rank(); }

 private:
  explicit StiefelSpace(PluckerVector p);

  friend std::vector<double> blue_rule_raw(const StiefelSpace&, std::span<const double>);

  PluckerVector p_;
  std::vector<double> values_;  // p as doubles, bottom = -inf
  // For each (m-1)-subset (colex rank r) and column j: rank of r + {j}, or -1
  // when j is already in the subset. Empty when the table would be too large.
  std::vector<std::int32_t> grow_;
};

struct HyperplaneNormal {
  TropPoint omega;
};

// Hard limits for the naive Blue Rule, O(C(d, m-1) * d).
inline constexpr int kMaxBlueRank = 6;
inline constexpr int kMaxBlueDim = 64;

// Max over (m+1)-subsets tau of (max - 2nd max) of p(tau - t) + x_t, t in tau.
// Zero iff x lies on L_p; +inf when some tau has exactly one finite term.
double membership_residual(const StiefelSpace& space, std::span<const double> x);
inline double membership_residual(const StiefelSpace& space, const TropPoint& x) {
  return membership_residual(space, x.coords());
}

// Nearest point of L_p in the tropical metric:
//   w_i = max_{tau not containing i} min_{j not in tau} u_j + p(tau+i) - p(tau+j)
// evaluated as max_tau { p(tau+i) + C(tau) } with C(tau) = min_j u_j - p(tau+j).
// A bottom p(tau+i) drops tau from the max, a bottom p(tau+j) drops j from the
// min. Throws DegeneratePlucker if some w_i has no candidate, ResourceLimit
// beyond kMaxBlueRank / kMaxBlueDim. Only this representative of a possibly
// non-unique closest set is returned.
TropPoint blue_rule_project(const StiefelSpace& space, const TropPoint& u);
// Same, without canonicalization: w lives in the frame of u.
std::vector<double> blue_rule_raw(const StiefelSpace& space, std::span<const double> u);

// v with u = blue(u) + v: for each (m+1)-subset tau whose maximum of
// p(tau - t) + u_t is unique (gap > tol) at t, v_t = max(v_t, gap). Subsets
// with fewer than two finite terms are skipped.
std::vector<double> red_rule_residual(const StiefelSpace& space, const TropPoint& u,
                                      double tol = kDefaultTol);

// max_i(omega_i + x_i) - 2nd max_i(omega_i + x_i).
double hyperplane_distance(std::span<const double> omega, std::span<const double> x);
inline double hyperplane_distance(const HyperplaneNormal& h, const TropPoint& x) {
  return hyperplane_distance(h.omega.coords(), x.coords());
}

// Nearest point of H_omega: the unique largest term of omega + x is lowered
// onto the second largest. Returned in the frame of x.
std::vector<double> hyperplane_project(std::span<const double> omega, std::span<const double> x);

// Generator matrices with closed-form projections.
//   a1_matrix:   rows (mu1, -inf, 0..0), (-inf, mu2, 0..0)
//   am_matrix:   diag(mu_1..mu_m) padded with -inf, zero columns m+1..d
//   a0_matrix:   rows (5, -5, 0..0), (-5, 5, 0..0)
TropMatrix a1_matrix(double mu1, double mu2, int d);
TropMatrix am_matrix(std::span<const double> mu, int d);
TropMatrix a0_matrix(int d);

// The m-th smallest entry of a multiset (1-based m); {2,1,1} has 2nd smallest 1.
double mth_smallest(std::span<const double> values, int m);

// Projection of X = (mu_1 + eps_1, ..., mu_m + eps_m, eps_{m+1}, ..., eps_d)
// onto L(am_matrix(mu)): X'_i = mu_i [i <= m] + min(eps*, eps_i), eps* the
// m-th smallest eps. Returned in the frame of X.
std::vector<double> axis_aligned_projection_formula(std::span<const double> mu,
                                                    std::span<const double> eps, int m);

// Block-correlated input X_j = mu_j + (eps_1 + ... + eps_m) for j <= m and
// eps_j beyond: same rule with eps'_j = sum_{k<=m} eps_k (j <= m), eps_j
// otherwise, eps* the m-th smallest eps'.
std::vector<double> correlated_projection_formula(std::span<const double> mu,
                                                  std::span<const double> eps, int m);

// Projection onto L(a0_matrix) of X = c + eps with c = (5, -5, 0..0) for
// component 1 or (-5, 5, 0..0) for component 2, valid when every |eps_j| < 5:
//   component 1: (5 + alpha, -5 + eps_2, alpha, ..., alpha), alpha = min_{j != 2} eps_j
//   component 2: (-5 + eps_1, 5 + beta, beta, ..., beta),   beta = min_{j >= 2} eps_j
std::vector<double> a0_projection_formula(std::span<const double> eps, int component);

}  // namespace tropfit
