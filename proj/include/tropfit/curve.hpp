#pragma once

#include <array>
#include <span>
#include <vector>

#include "tropfit/core.hpp"

namespace tropfit {

// Chart convention: a point of R^3/R1 with canonical form (0, x, y) is drawn
// at (x, y).
using ChartPoint = std::array<double, 2>;

ChartPoint to_chart(const TropPoint& p);  // throws DimMismatch unless d = 3
TropPoint from_chart(const ChartPoint& c);

// Monomial ids, in the order used by every cell and error message.
enum Monomial : int { kConst = 0, kX = 1, kY = 2, kXX = 3 };

// max{wxx + 2x, wx + x, wy + y, 0} (degree 2) or max{wx + x, wy + y, 0}
// (degree 1, wxx bottom).
class TropPoly2 {
 public:
  // Throws NonFinite through ExtReal on NaN/inf inputs.
  static TropPoly2 linear(double wx, double wy);
  static TropPoly2 quadratic(double wxx, double wx, double wy);

  int degree() const noexcept { return wxx_.is_bottom() ? 1 : 2; }
  ExtReal wxx() const noexcept { return wxx_; }
  double wx() const noexcept { return wx_; }
  double wy() const noexcept { return wy_; }

  // Monomials present: 3 for degree 1, 4 for degree 2.
  int monomial_count() const noexcept { return degree() == 1 ? 3 : 4; }
  // Value of monomial `id` at chart point (x, y).
  double monomial(int id, double x, double y) const;

  friend bool operator==(const TropPoly2&, const TropPoly2&) = default;

 private:
  ExtReal wxx_ = ExtReal::bottom();
  double wx_ = 0.0;
  double wy_ = 0.0;
};

struct CurveCell {
  enum class Kind { Vertex, Segment, Ray, Line };
  Kind kind = Kind::Vertex;
  ChartPoint a{};    // vertex, segment start, ray origin, or a point of a line
  ChartPoint b{};    // segment end
  ChartPoint dir{};  // direction of a ray or line
  std::vector<int> monomials;  // the tying monomials, ascending
};

// Maximal cells of the curve: tie lines of monomial pairs clipped by the
// dominance of the others, plus vertices where three or more monomials tie.
std::vector<CurveCell> curve_cells(const TropPoly2& f);

// max - 2nd max of the monomials at the chart point of pt.
double curve_membership_residual(const TropPoly2& f, const TropPoint& pt);

struct CurveProjection {
  TropPoint point;
  double distance = 0.0;
};

// Nearest curve point in the tropical metric. Along each cell the distance is
// convex piecewise linear in the cell parameter, so it is minimized over the
// cell ends and the parameters where two of 0, dx, dy coincide.
CurveProjection project_to_curve(const TropPoly2& f, const TropPoint& pt);
std::vector<CurveProjection> project_to_curve(const TropPoly2& f, std::span<const TropPoint> pts);

// Degree-1 curve through two chart points. Throws DegenerateSlope when the
// points share x, or the slope is 0 or 1 (within tol).
TropPoly2 fit_linear_curve(const TropPoint& p1, const TropPoint& p2, double tol = kDefaultTol);

// Degree-2 curve through three points. Every assignment of the points to a
// tying monomial pair is solved as a 3 x 3 linear system and kept when all
// three points pass membership. Throws Degenerate when x or y values repeat
// (within tol) or when distinct curves fit, Infeasible when none does.
TropPoly2 fit_quadratic_curve(const TropPoint& p1, const TropPoint& p2, const TropPoint& p3,
                              double tol = kDefaultTol);

}  // namespace tropfit
