#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tropfit/curve.hpp"
#include "tropfit/space.hpp"

using namespace tropfit;

namespace {

TropPoint chart(double x, double y) { return from_chart({x, y}); }

const TropPoly2 kReference = TropPoly2::quadratic(-1.0, 0.0, 0.0);

// Max and the ids attaining it within tol.
std::vector<int> top_monomials(const TropPoly2& f, double x, double y, double tol) {
  double best = -INFINITY;
  for (int id = 0; id < f.monomial_count(); ++id) best = std::max(best, f.monomial(id, x, y));
  std::vector<int> ids;
  for (int id = 0; id < f.monomial_count(); ++id) {
    if (f.monomial(id, x, y) >= best - tol) ids.push_back(id);
  }
  return ids;
}

bool cell_tie_holds(const TropPoly2& f, const CurveCell& c, double x, double y) {
  const auto top = top_monomials(f, x, y, 1e-9);
  return std::all_of(c.monomials.begin(), c.monomials.end(),
                     [&](int id) { return std::find(top.begin(), top.end(), id) != top.end(); });
}

std::vector<ChartPoint> cell_probe_points(const CurveCell& c) {
  switch (c.kind) {
    case CurveCell::Kind::Vertex: return {c.a};
    case CurveCell::Kind::Segment:
      return {c.a, c.b, {(c.a[0] + c.b[0]) / 2, (c.a[1] + c.b[1]) / 2}};
    case CurveCell::Kind::Ray:
      return {c.a, {c.a[0] + c.dir[0], c.a[1] + c.dir[1]}, {c.a[0] + 7 * c.dir[0], c.a[1] + 7 * c.dir[1]}};
    case CurveCell::Kind::Line:
      return {c.a, {c.a[0] - 3 * c.dir[0], c.a[1] - 3 * c.dir[1]}, {c.a[0] + 3 * c.dir[0], c.a[1] + 3 * c.dir[1]}};
  }
  return {};
}

// Dense sampling: 10^4 points on each cell. Rays and lines are clipped to the
// box |q - p|_inf <= bound, which contains every point within tropical
// distance `bound` of p.
double sampled_distance(const TropPoly2& f, const ChartPoint& p) {
  const auto cells = curve_cells(f);
  auto dist = [&](double qx, double qy) {
    const double dx = qx - p[0], dy = qy - p[1];
    return std::max({0.0, dx, dy}) - std::min({0.0, dx, dy});
  };
  double bound = INFINITY;
  for (const auto& c : cells) {
    if (c.kind == CurveCell::Kind::Vertex) bound = std::min(bound, dist(c.a[0], c.a[1]));
  }
  double best = bound;
  constexpr int kSamples = 10000;
  for (const auto& c : cells) {
    double lo = 0.0, hi = 1.0;
    ChartPoint a = c.a, dir{};
    if (c.kind == CurveCell::Kind::Vertex) continue;
    if (c.kind == CurveCell::Kind::Segment) {
      dir = {c.b[0] - c.a[0], c.b[1] - c.a[1]};
    } else {
      dir = c.dir;
      lo = c.kind == CurveCell::Kind::Line ? -INFINITY : 0.0;
      hi = INFINITY;
      for (int axis = 0; axis < 2; ++axis) {
        if (dir[axis] == 0.0) continue;
        double t1 = (p[axis] - bound - a[axis]) / dir[axis];
        double t2 = (p[axis] + bound - a[axis]) / dir[axis];
        if (t1 > t2) std::swap(t1, t2);
        lo = std::max(lo, t1);
        hi = std::min(hi, t2);
      }
      if (lo > hi) continue;
    }
    for (int s = 0; s <= kSamples; ++s) {
      const double t = lo + (hi - lo) * s / kSamples;
      best = std::min(best, dist(a[0] + t * dir[0], a[1] + t * dir[1]));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("chart convention") {
  const auto p = canonicalize(std::vector<double>{2, 5, -1});
  CHECK(to_chart(p) == ChartPoint{3, -3});
  CHECK(from_chart({3, -3}) == p);
  CHECK_THROWS_AS(to_chart(canonicalize(std::vector<double>{0, 1, 2, 3})), Error);
}

TEST_CASE("linear tripod cells") {
  const auto f = TropPoly2::linear(0, 0);
  const auto cells = curve_cells(f);
  int rays = 0, vertices = 0;
  for (const auto& c : cells) {
    if (c.kind == CurveCell::Kind::Ray) ++rays;
    if (c.kind == CurveCell::Kind::Vertex) {
      ++vertices;
      CHECK(c.a == ChartPoint{0, 0});
      CHECK(c.monomials == std::vector<int>{kConst, kX, kY});
    }
  }
  CHECK(rays == 3);
  CHECK(vertices == 1);
  CHECK(cells.size() == 4);
}

TEST_CASE("the reference quadratic has vertices (0,0) and (1,1)") {
  std::vector<ChartPoint> vs;
  for (const auto& c : curve_cells(kReference)) {
    if (c.kind == CurveCell::Kind::Vertex) vs.push_back(c.a);
  }
  std::sort(vs.begin(), vs.end());
  REQUIRE(vs.size() == 2);
  CHECK(vs[0][0] == doctest::Approx(0.0));
  CHECK(vs[0][1] == doctest::Approx(0.0));
  CHECK(vs[1][0] == doctest::Approx(1.0));
  CHECK(vs[1][1] == doctest::Approx(1.0));
  CHECK(curve_membership_residual(kReference, chart(0, 0)) == 0.0);
  CHECK(curve_membership_residual(kReference, chart(1, 1)) == 0.0);
}

TEST_CASE("membership residual examples") {
  const auto h0 = TropPoly2::linear(0, 0);
  CHECK(curve_membership_residual(h0, chart(0, 0)) == 0.0);
  CHECK(curve_membership_residual(h0, chart(3, 1)) == 2.0);
}

TEST_CASE("cells tie and dominate at ends and midpoints") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 1000; ++t) {
    const auto f = t % 4 == 0 ? TropPoly2::linear(u(rng), u(rng)) : TropPoly2::quadratic(u(rng), u(rng), u(rng));
    for (const auto& c : curve_cells(f)) {
      for (const auto& q : cell_probe_points(c)) CHECK(cell_tie_holds(f, c, q[0], q[1]));
    }
  }
}

TEST_CASE("dominance clipping agrees with brute force along tie lines") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 300; ++t) {
    // Include cases where monomial x never reaches the top.
    const double wx = t % 3 == 0 ? -50.0 : u(rng);
    const auto f = TropPoly2::quadratic(u(rng), wx, u(rng));
    const auto cells = curve_cells(f);
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        bool has_edge = false;
        for (const auto& c : cells) {
          has_edge |= c.kind != CurveCell::Kind::Vertex && c.monomials == std::vector<int>{p, q};
        }
        // Walk the tie line p = q.
        int hits = 0;
        for (int s = -4000; s <= 4000; ++s) {
          const double along = s * 0.01;
          double x, y;
          if (p == kY || q == kY) {
            // wy + y equals the other monomial, which does not involve y.
            x = along;
            y = f.monomial(p == kY ? q : p, x, 0) - f.wy();
          } else {
            // Ties among const, x, xx fix x; y is free.
            const auto slope = [](int id) { return id == kConst ? 0.0 : id == kX ? 1.0 : 2.0; };
            x = (f.monomial(q, 0, 0) - f.monomial(p, 0, 0)) / (slope(p) - slope(q));
            y = along;
          }
          const auto top = top_monomials(f, x, y, 1e-9);
          hits += top.size() == 2 && top[0] == p && top[1] == q;
        }
        CHECK(has_edge == (hits > 0));
        if (wx == -50.0 && (p == kX || q == kX)) CHECK_FALSE(has_edge);
      }
    }
  }
}

TEST_CASE("projection of curve points is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const auto f = TropPoly2::quadratic(u(rng), u(rng), u(rng));
    for (const auto& c : curve_cells(f)) {
      for (const auto& q : cell_probe_points(c)) {
        const auto pr = project_to_curve(f, chart(q[0], q[1]));
        CHECK(pr.distance <= 1e-9);
      }
    }
  }
}

TEST_CASE("degree-1 projection equals the hyperplane formula") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 1000; ++t) {
    const double wx = u(rng), wy = u(rng);
    const auto f = TropPoly2::linear(wx, wy);
    const auto p = chart(u(rng), u(rng));
    const auto pr = project_to_curve(f, p);
    const std::vector<double> omega{0, wx, wy};
    CHECK(pr.distance == doctest::Approx(hyperplane_distance(omega, p.coords())).epsilon(1e-12));
    CHECK(curve_membership_residual(f, pr.point) <= 1e-9);
    CHECK(trop_distance(p, pr.point) == doctest::Approx(pr.distance).epsilon(1e-12));
  }
}

TEST_CASE("quadratic projection against the dense-sampling oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3, 4);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const ChartPoint p{u(rng), u(rng)};
    const auto pr = project_to_curve(kReference, chart(p[0], p[1]));
    const double oracle = sampled_distance(kReference, p);
    CHECK(pr.distance <= oracle + 1e-9);
    CHECK(oracle - pr.distance <= 1e-3);
    worst = std::max(worst, oracle - pr.distance);
    CHECK(curve_membership_residual(kReference, pr.point) <= 1e-9);
    CHECK(trop_distance(chart(p[0], p[1]), pr.point) == doctest::Approx(pr.distance).epsilon(1e-12));
  }
  MESSAGE("worst oracle gap " << worst);
}

TEST_CASE("distance is zero exactly on the curve, triangle inequality") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 1000; ++t) {
    const auto f = TropPoly2::quadratic(u(rng), u(rng), u(rng));
    const auto p = chart(u(rng), u(rng));
    const auto pr = project_to_curve(f, p);
    CHECK((pr.distance <= 1e-9) == (curve_membership_residual(f, p) <= 1e-9));
    const auto cells = curve_cells(f);
    for (const auto& c : cells) {
      for (const auto& q : cell_probe_points(c)) {
        const auto qp = chart(q[0], q[1]);
        CHECK(trop_distance(p, qp) <= trop_distance(p, pr.point) + trop_distance(pr.point, qp) + 1e-9);
        CHECK(pr.distance <= trop_distance(p, qp) + 1e-9);
      }
    }
  }
}

TEST_CASE("fit_linear_curve cases") {
  struct Case {
    double x1, y1, x2, y2, wx, wy;
  };
  const Case cases[] = {{0, 0, 1, 3, 0, -2}, {0, 0, 2, 1, -1, 0}, {0, 1, 1, 0, -1, -1}};
  for (const auto& c : cases) {
    const auto a = chart(c.x1, c.y1), b = chart(c.x2, c.y2);
    for (const auto& f : {fit_linear_curve(a, b), fit_linear_curve(b, a)}) {
      CHECK(f.degree() == 1);
      CHECK(f.wx() == c.wx);
      CHECK(f.wy() == c.wy);
      CHECK(curve_membership_residual(f, a) <= 1e-9);
      CHECK(curve_membership_residual(f, b) <= 1e-9);
    }
  }
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 1000; ++t) {
    const auto a = chart(u(rng), u(rng)), b = chart(u(rng), u(rng));
    const auto f = fit_linear_curve(a, b);
    CHECK(curve_membership_residual(f, a) <= 1e-9);
    CHECK(curve_membership_residual(f, b) <= 1e-9);
  }
  for (const auto& [x2, y2] : {std::pair{0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}) {
    try {
      fit_linear_curve(chart(0, 0), chart(x2, y2));
      FAIL("expected DegenerateSlope");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateSlope);
    }
  }
}

namespace {
bool low_too_high(std::array<ChartPoint, 3> p) {
  std::sort(p.begin(), p.end());
  return p[0][1] > p[1][1] && p[0][1] + 2 * (p[2][0] - p[1][0]) < p[2][1];
}
}  // namespace

TEST_CASE("quadratic interpolation: the y1 > y2, y1 + 2(x3 - x2) < y3 configuration") {
  // Every curve (wxx, wx, wy) = (-1 + s, s, -1 + s), s in [0, 1], passes
  // through these three points, so no single answer exists.
  const auto a = chart(0, 1), b = chart(1, 0), c = chart(2, 4);
  for (double s : {0.0, 0.25, 0.5, 1.0}) {
    const auto f = TropPoly2::quadratic(-1 + s, s, -1 + s);
    for (const auto& x : {a, b, c}) CHECK(curve_membership_residual(f, x) == 0.0);
  }
  try {
    fit_quadratic_curve(a, b, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  CHECK_THROWS_AS(fit_quadratic_curve(chart(0, 1), chart(0, 2), chart(2, 4)), Error);
  CHECK_THROWS_AS(fit_quadratic_curve(chart(0, 1), chart(1, 1), chart(2, 4)), Error);
}

TEST_CASE("quadratic interpolation on random triples") {
  // Each point condition is a tropical hyperplane in (wxx, wx, wy)-space and
  // three of them always meet, so random triples in either configuration
  // class have exactly one curve.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5, 5);
  int plain = 0, tall = 0;
  while (plain < 1000 || tall < 200) {
    const std::array<ChartPoint, 3> p{ChartPoint{u(rng), u(rng)}, ChartPoint{u(rng), u(rng)},
                                      ChartPoint{u(rng), u(rng)}};
    const auto a = chart(p[0][0], p[0][1]), b = chart(p[1][0], p[1][1]), c = chart(p[2][0], p[2][1]);
    ++(low_too_high(p) ? tall : plain);
    const auto f = fit_quadratic_curve(a, b, c);
    CHECK(f.degree() == 2);
    for (const auto& x : {a, b, c}) CHECK(curve_membership_residual(f, x) <= 1e-9);
    CHECK(fit_quadratic_curve(c, a, b) == f);
    CHECK(fit_quadratic_curve(b, c, a) == f);
  }
}

TEST_CASE("quadratic interpolation recovers a curve from points on distinct cells") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3, 3), s(0.1, 0.9);
  int done = 0;
  for (int t = 0; t < 5000 && done < 300; ++t) {
    const auto f = TropPoly2::quadratic(u(rng), u(rng), u(rng));
    std::vector<CurveCell> edges;
    for (const auto& c : curve_cells(f)) {
      if (c.kind != CurveCell::Kind::Vertex) edges.push_back(c);
    }
    if (edges.size() < 3) continue;
    std::shuffle(edges.begin(), edges.end(), rng);
    // The curve is pinned down only when the three cells involve all four
    // monomials. Otherwise either monomial x has no cell (wx is merely
    // bounded) or the cells meet at one vertex, whose tie equations are
    // dependent.
    std::vector<int> used;
    for (int k = 0; k < 3; ++k) {
      for (int id : edges[static_cast<std::size_t>(k)].monomials) used.push_back(id);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    const bool pinned = used.size() == 4;
    std::vector<TropPoint> pts;
    std::vector<ChartPoint> cp;
    for (int k = 0; k < 3; ++k) {
      const auto& c = edges[static_cast<std::size_t>(k)];
      const double w = s(rng);
      const ChartPoint q = c.kind == CurveCell::Kind::Segment
                               ? ChartPoint{c.a[0] + w * (c.b[0] - c.a[0]), c.a[1] + w * (c.b[1] - c.a[1])}
                               : ChartPoint{c.a[0] + 3 * w * c.dir[0], c.a[1] + 3 * w * c.dir[1]};
      cp.push_back(q);
      pts.push_back(chart(q[0], q[1]));
    }
    bool general = true;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        general &= std::abs(cp[i][0] - cp[j][0]) > 1e-6 && std::abs(cp[i][1] - cp[j][1]) > 1e-6;
      }
    }
    if (!general) continue;
    if (!pinned) {
      try {
        fit_quadratic_curve(pts[0], pts[1], pts[2]);
        FAIL("expected Degenerate");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
      }
      continue;
    }
    ++done;
    const auto g = fit_quadratic_curve(pts[0], pts[1], pts[2]);
    CHECK(g.wxx().value() == doctest::Approx(f.wxx().value()).epsilon(1e-9));
    CHECK(g.wx() == doctest::Approx(f.wx()).epsilon(1e-9));
    CHECK(g.wy() == doctest::Approx(f.wy()).epsilon(1e-9));
  }
  CHECK(done == 300);
}
