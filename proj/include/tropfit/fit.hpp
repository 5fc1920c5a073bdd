#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tropfit/core.hpp"
#include "tropfit/linalg.hpp"
#include "tropfit/space.hpp"

namespace tropfit {

// n >= 1 canonical points of a common dimension.
class Sample {
 public:
  // Throws BadParams when empty, DimMismatch on mixed dimensions.
  explicit Sample(std::vector<TropPoint> points);
  static Sample from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return points_.front().dim(); }
  const TropPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<TropPoint>& points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

 private:
  std::vector<TropPoint> points_;
};

// Axis range [lo, hi] sampled every `step`, shared by all free axes.
struct GridSpec {
  double lo = -10.0;
  double hi = 10.0;
  double step = 0.1;

  // Throws EmptyGrid on a non-positive step or an empty range.
  std::size_t nodes() const;
  double node(std::size_t k) const { return lo + static_cast<double>(k) * step; }
};

struct FermatWeber {
  TropPoint point;
  double objective = 0.0;
};

// sum_i d_tr(z, x_i)
double fermat_weber_objective(const Sample& sample, std::span<const double> z);
// sum_i hyperplane_distance(omega, x_i)
double hyperplane_objective(const Sample& sample, std::span<const double> omega);
// sum_i d_tr(x_i, blue(L, x_i))
double stiefel_objective(const Sample& sample, const StiefelSpace& space);

// Exact minimizer of the Fermat-Weber objective via a linear program. The
// optimal set can be a polytope; one vertex is returned. Throws
// ResourceLimit when the tableau would exceed kMaxLpEntries.
FermatWeber fermat_weber(const Sample& sample);
inline constexpr std::size_t kMaxLpEntries = std::size_t{1} << 25;

struct FitResult {
  std::variant<HyperplaneNormal, StiefelSpace> space;
  std::optional<TropMatrix> generator;  // set by fit_stiefel
  double objective = 0.0;               // sum of distances
  std::vector<TropPoint> projections;
  std::vector<double> distances;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  std::vector<double> trace;  // objective after each improving move
};

// Coarse grid over the d-1 free coordinates of omega, then coordinate descent
// (steps along e_j and e_j - e_k, halving down to 1e-6) when `refine` is set.
// Grids beyond kMaxGridWork objective terms are coarsened and supplemented
// with the apices at the sample points. Throws DimTooSmall for d < 3,
// EmptyGrid.
FitResult fit_hyperplane(const Sample& sample, const GridSpec& grid = {}, bool refine = true);
inline constexpr std::size_t kMaxGridWork = std::size_t{1} << 31;

// Heuristic local search over real m x d generators with `restarts` seeded
// starts; restart r draws from Stream(seed, r). Restart 0 starts from the
// Fermat-Weber point with axis perturbations, restart 1 from far-apart
// sample points, later ones from random sample points plus noise. Throws
// RankExceedsDim unless 1 <= m < d, BadParams for restarts < 1. With exactly
// m points the points themselves are returned as the generator.
FitResult fit_stiefel(const Sample& sample, int m, int restarts, std::uint64_t seed);

// The m = 2 space through mu and nu, P_ik = max(mu_i + nu_k, mu_k + nu_i).
// Throws NotGeneralPosition (listing 1-based index pairs) when two
// differences mu_i - nu_i agree within tol.
StiefelSpace two_point_stiefel(const TropPoint& mu, const TropPoint& nu, double tol = kDefaultTol);

enum class ContourMode { Hyperplane, FermatWeber };

// Objective on the (x, y) grid, node (x, y) standing for (0, x, y).
struct ContourGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;  // values[iy * xs.size() + ix]
  double min_value = 0.0;
  std::size_t min_ix = 0;
  std::size_t min_iy = 0;
};

// Throws UnsupportedDim unless d = 3, EmptyGrid.
ContourGrid contour_grid(const Sample& sample, ContourMode mode, const GridSpec& grid = {});

}  // namespace tropfit
