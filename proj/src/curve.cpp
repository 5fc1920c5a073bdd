#include "tropfit/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tropfit/parallel.hpp"

namespace tropfit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCellTol = 1e-12;
constexpr double kRayHorizon = 1e6;

// Monomial id as c + a*x + b*y.
struct Affine {
  double c, a, b;
};

Affine affine(const TropPoly2& f, int id) {
  switch (id) {
    case kConst: return {0.0, 0.0, 0.0};
    case kX: return {f.wx(), 1.0, 0.0};
    case kY: return {f.wy(), 0.0, 1.0};
    default: return {f.wxx().value(), 2.0, 0.0};
  }
}

double eval(const Affine& m, double x, double y) { return m.c + m.a * x + m.b * y; }

double residual_at(const TropPoly2& f, double x, double y) {
  double best = -kInf, second = -kInf;
  for (int id = 0; id < f.monomial_count(); ++id) {
    const double v = f.monomial(id, x, y);
    if (v > best) {
      second = best;
      best = v;
    } else if (v > second) {
      second = v;
    }
  }
  return best - second;
}

double chart_distance(const ChartPoint& p, double qx, double qy) {
  const double dx = qx - p[0];
  const double dy = qy - p[1];
  return std::max({0.0, dx, dy}) - std::min({0.0, dx, dy});
}

struct Best {
  double dist = kInf;
  ChartPoint q{};
};

// Minimizes the distance from p over a + t*dir, t in [lo, hi].
void minimize_on_cell(const ChartPoint& p, const ChartPoint& a, const ChartPoint& dir, double lo,
                      double hi, Best& best) {
  std::vector<double> ts;
  if (std::isfinite(lo)) ts.push_back(lo);
  if (std::isfinite(hi)) ts.push_back(hi);
  const double ex = a[0] - p[0], ey = a[1] - p[1];
  auto add = [&](double num, double den) {
    if (den == 0.0) return;
    const double t = num / den;
    if (t >= lo && t <= hi) ts.push_back(t);
  };
  add(-ex, dir[0]);               // dx = 0
  add(-ey, dir[1]);               // dy = 0
  add(ey - ex, dir[0] - dir[1]);  // dx = dy
  auto at = [&](double t) { return chart_distance(p, a[0] + t * dir[0], a[1] + t * dir[1]); };
  if (ts.empty()) ts.push_back(std::isfinite(lo) ? lo : std::isfinite(hi) ? hi : 0.0);
  const auto [tmin, tmax] = std::minmax_element(ts.begin(), ts.end());
  // Past the last breakpoint the distance is affine with slope
  // max(0, dir) - min(0, dir) >= 0 towards either infinity.
  if (!std::isfinite(hi) && at(*tmax + kRayHorizon) < at(*tmax) - 1e-9) {
    throw Error(ErrorKind::Degenerate, "project_to_curve: distance decreasing along a ray");
  }
  if (!std::isfinite(lo) && at(*tmin - kRayHorizon) < at(*tmin) - 1e-9) {
    throw Error(ErrorKind::Degenerate, "project_to_curve: distance decreasing along a ray");
  }
  for (double t : ts) {
    const double v = at(t);
    if (v < best.dist) best = {v, {a[0] + t * dir[0], a[1] + t * dir[1]}};
  }
}

// Solves m u = r for 3x3 m; false when singular.
bool solve3(double m[3][3], double r[3], double u[3]) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int i = c + 1; i < 3; ++i) {
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    }
    if (std::abs(m[piv][c]) < 1e-12) return false;
    std::swap(m[c], m[piv]);
    std::swap(r[c], r[piv]);
    for (int i = c + 1; i < 3; ++i) {
      const double f = m[i][c] / m[c][c];
      for (int j = c; j < 3; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  for (int c = 2; c >= 0; --c) {
    double s = r[c];
    for (int j = c + 1; j < 3; ++j) s -= m[c][j] * u[j];
    u[c] = s / m[c][c];
  }
  return true;
}

}  // namespace

ChartPoint to_chart(const TropPoint& p) {
  if (p.dim() != 3) {
    throw Error(ErrorKind::DimMismatch,
                "curve: points must lie in R^3/R1, got d = " + std::to_string(p.dim()));
  }
  return {p[1] - p[0], p[2] - p[0]};
}

TropPoint from_chart(const ChartPoint& c) { return canonicalize(std::vector<double>{0.0, c[0], c[1]}); }

TropPoly2 TropPoly2::linear(double wx, double wy) {
  TropPoly2 f;
  f.wx_ = ExtReal(wx).value();
  f.wy_ = ExtReal(wy).value();
  return f;
}

TropPoly2 TropPoly2::quadratic(double wxx, double wx, double wy) {
  TropPoly2 f = linear(wx, wy);
  f.wxx_ = ExtReal(wxx);
  return f;
}

double TropPoly2::monomial(int id, double x, double y) const {
  if (id < 0 || id >= monomial_count()) {
    throw Error(ErrorKind::BadParams, "curve: no monomial " + std::to_string(id));
  }
  return eval(affine(*this, id), x, y);
}

std::vector<CurveCell> curve_cells(const TropPoly2& f) {
  const int count = f.monomial_count();
  std::vector<CurveCell> cells;

  // Vertices.
  for (int p = 0; p < count; ++p) {
    for (int q = p + 1; q < count; ++q) {
      for (int r = q + 1; r < count; ++r) {
        const Affine mp = affine(f, p), mq = affine(f, q), mr = affine(f, r);
        const double a1 = mp.a - mq.a, b1 = mp.b - mq.b, c1 = mq.c - mp.c;
        const double a2 = mp.a - mr.a, b2 = mp.b - mr.b, c2 = mr.c - mp.c;
        const double det = a1 * b2 - a2 * b1;
        if (det == 0.0) continue;
        const double x = (c1 * b2 - c2 * b1) / det;
        const double y = (a1 * c2 - a2 * c1) / det;
        const double top = eval(mp, x, y);
        std::vector<int> tied;
        bool dominated = false;
        for (int s = 0; s < count; ++s) {
          const double v = f.monomial(s, x, y);
          if (v > top + kCellTol * (1.0 + std::abs(top))) dominated = true;
          if (std::abs(v - top) <= kCellTol * (1.0 + std::abs(top))) tied.push_back(s);
        }
        if (dominated) continue;
        const bool seen = std::any_of(cells.begin(), cells.end(), [&](const CurveCell& c) {
          return c.monomials == tied;
        });
        if (seen) continue;
        CurveCell cell;
        cell.kind = CurveCell::Kind::Vertex;
        cell.a = {x, y};
        cell.monomials = tied;
        cells.push_back(cell);
      }
    }
  }

  // Edges.
  for (int p = 0; p < count; ++p) {
    for (int q = p + 1; q < count; ++q) {
      const Affine mp = affine(f, p), mq = affine(f, q);
      const double A = mp.a - mq.a, B = mp.b - mq.b, C = mq.c - mp.c;
      const ChartPoint base = std::abs(A) >= std::abs(B) ? ChartPoint{C / A, 0.0} : ChartPoint{0.0, C / B};
      const ChartPoint dir{-B, A};
      double lo = -kInf, hi = kInf;
      bool empty = false;
      for (int r = 0; r < count && !empty; ++r) {
        if (r == p || r == q) continue;
        const Affine mr = affine(f, r);
        const double g0 = eval(mp, base[0], base[1]) - eval(mr, base[0], base[1]);
        const double gs = (mp.a - mr.a) * dir[0] + (mp.b - mr.b) * dir[1];
        if (gs == 0.0) {
          empty = g0 < -kCellTol;
          continue;
        }
        const double t = -g0 / gs;
        if (gs > 0.0) {
          lo = std::max(lo, t);
        } else {
          hi = std::min(hi, t);
        }
      }
      if (empty || hi - lo <= kCellTol) continue;
      CurveCell cell;
      cell.monomials = {p, q};
      auto point = [&](double t) { return ChartPoint{base[0] + t * dir[0], base[1] + t * dir[1]}; };
      if (std::isfinite(lo) && std::isfinite(hi)) {
        cell.kind = CurveCell::Kind::Segment;
        cell.a = point(lo);
        cell.b = point(hi);
      } else if (std::isfinite(lo)) {
        cell.kind = CurveCell::Kind::Ray;
        cell.a = point(lo);
        cell.dir = dir;
      } else if (std::isfinite(hi)) {
        cell.kind = CurveCell::Kind::Ray;
        cell.a = point(hi);
        cell.dir = {-dir[0], -dir[1]};
      } else {
        cell.kind = CurveCell::Kind::Line;
        cell.a = base;
        cell.dir = dir;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

double curve_membership_residual(const TropPoly2& f, const TropPoint& pt) {
  const ChartPoint c = to_chart(pt);
  return residual_at(f, c[0], c[1]);
}

CurveProjection project_to_curve(const TropPoly2& f, const TropPoint& pt) {
  const ChartPoint p = to_chart(pt);
  if (residual_at(f, p[0], p[1]) == 0.0) return {pt, 0.0};
  Best best;
  for (const auto& cell : curve_cells(f)) {
    switch (cell.kind) {
      case CurveCell::Kind::Vertex:
        minimize_on_cell(p, cell.a, {0.0, 0.0}, 0.0, 0.0, best);
        break;
      case CurveCell::Kind::Segment:
        minimize_on_cell(p, cell.a, {cell.b[0] - cell.a[0], cell.b[1] - cell.a[1]}, 0.0, 1.0, best);
        break;
      case CurveCell::Kind::Ray:
        minimize_on_cell(p, cell.a, cell.dir, 0.0, kInf, best);
        break;
      case CurveCell::Kind::Line:
        minimize_on_cell(p, cell.a, cell.dir, -kInf, kInf, best);
        break;
    }
  }
  return {from_chart(best.q), best.dist};
}

std::vector<CurveProjection> project_to_curve(const TropPoly2& f, std::span<const TropPoint> pts) {
  std::vector<CurveProjection> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = project_to_curve(f, pts[i]); });
  return out;
}

TropPoly2 fit_linear_curve(const TropPoint& p1, const TropPoint& p2, double tol) {
  ChartPoint a = to_chart(p1), b = to_chart(p2);
  if (a[0] > b[0]) std::swap(a, b);
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  if (dx <= tol) throw Error(ErrorKind::DegenerateSlope, "fit_linear_curve: equal x");
  if (std::abs(dy) <= tol) throw Error(ErrorKind::DegenerateSlope, "fit_linear_curve: slope 0");
  if (std::abs(dy - dx) <= tol) throw Error(ErrorKind::DegenerateSlope, "fit_linear_curve: slope 1");
  const double x1 = a[0], y1 = a[1], x2 = b[0], y2 = b[1];
  if (dy > dx) return TropPoly2::linear(-x1, -x1 + x2 - y2);
  if (dy > 0.0) return TropPoly2::linear(-x2 - y1 + y2, -y1);
  return TropPoly2::linear(-x2, -y1);
}

TropPoly2 fit_quadratic_curve(const TropPoint& p1, const TropPoint& p2, const TropPoint& p3,
                              double tol) {
  std::array<ChartPoint, 3> pts{to_chart(p1), to_chart(p2), to_chart(p3)};
  std::sort(pts.begin(), pts.end());
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(pts[i][0] - pts[j][0]) <= tol || std::abs(pts[i][1] - pts[j][1]) <= tol) {
        throw Error(ErrorKind::Degenerate,
                    "fit_quadratic_curve: points need pairwise distinct x and y");
      }
    }
  }

  // Unknowns u = (wxx, wx, wy); monomial id = coef . u + lin(x, y).
  static constexpr double kCoef[4][3] = {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  auto lin = [](int id, const ChartPoint& p) {
    switch (id) {
      case kConst: return 0.0;
      case kX: return p[0];
      case kY: return p[1];
      default: return 2.0 * p[0];
    }
  };
  std::vector<std::array<int, 2>> pairs;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) pairs.push_back({a, b});
  }

  std::vector<std::array<double, 3>> found;
  for (const auto& e0 : pairs) {
    for (const auto& e1 : pairs) {
      for (const auto& e2 : pairs) {
        const std::array<int, 2>* eq[3] = {&e0, &e1, &e2};
        double m[3][3], r[3], u[3];
        for (int k = 0; k < 3; ++k) {
          const auto [a, b] = *eq[k];
          for (int j = 0; j < 3; ++j) m[k][j] = kCoef[a][j] - kCoef[b][j];
          r[k] = lin(b, pts[static_cast<std::size_t>(k)]) - lin(a, pts[static_cast<std::size_t>(k)]);
        }
        if (!solve3(m, r, u)) continue;
        const TropPoly2 f = TropPoly2::quadratic(u[0], u[1], u[2]);
        bool ok = true;
        for (const auto& p : pts) ok = ok && residual_at(f, p[0], p[1]) <= tol * scale;
        if (!ok) continue;
        const bool seen = std::any_of(found.begin(), found.end(), [&](const auto& v) {
          for (int j = 0; j < 3; ++j) {
            if (std::abs(v[static_cast<std::size_t>(j)] - u[j]) > 1e-7 * (1.0 + std::abs(u[j]))) return false;
          }
          return true;
        });
        if (!seen) found.push_back({u[0], u[1], u[2]});
      }
    }
  }
  if (found.empty()) {
    throw Error(ErrorKind::Infeasible, "fit_quadratic_curve: no x-quadratic curve passes through the points");
  }
  if (found.size() > 1) {
    throw Error(ErrorKind::Degenerate, "fit_quadratic_curve: " + std::to_string(found.size()) +
                                           " distinct curves pass through the points");
  }
  return TropPoly2::quadratic(found[0][0], found[0][1], found[0][2]);
}

}  // namespace tropfit
