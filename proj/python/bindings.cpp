#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <optional>

#include "tropfit/curve.hpp"
#include "tropfit/fit.hpp"
#include "tropfit/io.hpp"
#include "tropfit/mc.hpp"
#include "tropfit/space.hpp"
#include "tropfit/subsets.hpp"

namespace py = pybind11;
using namespace tropfit;

namespace {

using Rows = std::vector<std::vector<double>>;

std::vector<double> vec(const TropPoint& p) { return {p.begin(), p.end()}; }

Rows rows(const std::vector<TropPoint>& pts) {
  Rows out;
  for (const auto& p : pts) out.push_back(vec(p));
  return out;
}

TropPoint point(const std::vector<double>& v) { return canonicalize(v); }

double as_float(ExtReal v) { return v.value_or(-std::numeric_limits<double>::infinity()); }

TropMatrix matrix(const Rows& a) {
  std::vector<std::vector<ExtReal>> m;
  for (const auto& r : a) {
    std::vector<ExtReal> row;
    for (double v : r) row.push_back(ExtReal::from_double(v));
    m.push_back(std::move(row));
  }
  return TropMatrix(std::move(m));
}

// 1-based subset tuple -> coordinate, -inf for bottom.
py::dict plucker_dict(const PluckerVector& p) {
  py::dict out;
  std::size_t r = 0;
  for_each_subset(p.dim(), p.rank(), [&](std::span<const int> s) {
    py::tuple key(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) key[i] = s[i] + 1;
    out[key] = as_float(p.at_rank(r++));
  });
  return out;
}

py::dict report_dict(const McReport& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["estimate"] = r.estimate;
  d["std_error"] = r.std_error;
  d["n"] = r.n;
  d["seed"] = r.seed;
  d["elapsed"] = r.elapsed;
  d["bound"] = r.bound ? py::object(py::float_(*r.bound)) : py::object(py::none());
  d["excluded"] = r.excluded;
  d["blue_checked"] = r.blue_checked;
  d["blue_max_diff"] = r.blue_max_diff;
  return d;
}

py::dict fit_dict(const FitResult& r) {
  py::dict d;
  if (const auto* h = std::get_if<HyperplaneNormal>(&r.space)) {
    d["omega"] = vec(h->omega);
  } else {
    d["space"] = std::get<StiefelSpace>(r.space);
  }
  if (r.generator) {
    Rows g;
    for (std::size_t i = 0; i < r.generator->rows(); ++i) {
      std::vector<double> row;
      for (std::size_t c = 0; c < r.generator->cols(); ++c) row.push_back(as_float((*r.generator)(i, c)));
      g.push_back(row);
    }
    d["generator"] = g;
  }
  d["objective"] = r.objective;
  d["projections"] = rows(r.projections);
  d["distances"] = r.distances;
  d["iterations"] = r.iterations;
  d["restarts"] = r.restarts;
  d["trace"] = r.trace;
  return d;
}

GridSpec grid(double lo, double hi, double step) {
  GridSpec g;
  g.lo = lo;
  g.hi = hi;
  g.step = step;
  return g;
}

}  // namespace

PYBIND11_MODULE(_tropfit, m) {
  m.doc() = "Tropical PCA core";

  // The module attribute keeps the type alive.
  static PyObject* error_type = py::exception<Error>(m, "TropfitError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  m.def("canonicalize", [](const std::vector<double>& v) { return vec(point(v)); }, py::arg("x"));
  m.def("trop_distance",
        [](const std::vector<double>& v, const std::vector<double>& w) { return trop_distance(v, w); },
        py::arg("v"), py::arg("w"));

  py::class_<StiefelSpace>(m, "StiefelSpace")
      .def_static("from_matrix", [](const Rows& a) { return StiefelSpace::from_matrix(matrix(a)); },
                  py::arg("rows"), "Space spanned by the rows; -inf entries are bottom.")
      .def_static("hyperplane", [](const std::vector<double>& omega) { return StiefelSpace::hyperplane(omega); },
                  py::arg("omega"))
      .def_static("from_json",
                  [](const std::string& text) { return io::space_from_json(text); }, py::arg("text"))
      .def_property_readonly("dim", &StiefelSpace::dim)
      .def_property_readonly("rank", &StiefelSpace::rank)
      .def("plucker", [](const StiefelSpace& s) { return plucker_dict(s.plucker()); },
           "Coordinates keyed by 1-based column tuples.")
      .def("to_json", [](const StiefelSpace& s) { return io::to_json(s.plucker()); });

  m.def("blue_rule_project",
        [](const StiefelSpace& s, const std::vector<double>& u) { return vec(blue_rule_project(s, point(u))); },
        py::arg("space"), py::arg("u"));
  m.def("red_rule_residual",
        [](const StiefelSpace& s, const std::vector<double>& u, double tol) {
          return red_rule_residual(s, point(u), tol);
        },
        py::arg("space"), py::arg("u"), py::arg("tol") = kDefaultTol);
  m.def("membership_residual",
        [](const StiefelSpace& s, const std::vector<double>& x) { return membership_residual(s, point(x)); },
        py::arg("space"), py::arg("x"));
  m.def("hyperplane_distance",
        [](const std::vector<double>& omega, const std::vector<double>& x) {
          return hyperplane_distance(omega, x);
        },
        py::arg("omega"), py::arg("x"));
  m.def("hyperplane_project",
        [](const std::vector<double>& omega, const std::vector<double>& x) {
          return hyperplane_project(omega, x);
        },
        py::arg("omega"), py::arg("x"));

  m.def("fermat_weber",
        [](const Rows& pts) {
          const auto r = fermat_weber(Sample::from_rows(pts));
          return py::make_tuple(vec(r.point), r.objective);
        },
        py::arg("points"), "Returns (point, objective).");
  m.def("fit_hyperplane",
        [](const Rows& pts, double lo, double hi, double step, bool refine) {
          return fit_dict(fit_hyperplane(Sample::from_rows(pts), grid(lo, hi, step), refine));
        },
        py::arg("points"), py::arg("lo") = -10.0, py::arg("hi") = 10.0, py::arg("step") = 0.1,
        py::arg("refine") = true);
  m.def("fit_stiefel",
        [](const Rows& pts, int rank, int restarts, std::uint64_t seed) {
          const Sample sample = Sample::from_rows(pts);
          std::optional<FitResult> r;
          {
            py::gil_scoped_release release;
            r = fit_stiefel(sample, rank, restarts, seed);
          }
          return fit_dict(*r);
        },
        py::arg("points"), py::arg("m"), py::arg("restarts") = 5, py::arg("seed") = 0);
  m.def("two_point_stiefel",
        [](const std::vector<double>& mu, const std::vector<double>& nu, double tol) {
          return two_point_stiefel(point(mu), point(nu), tol);
        },
        py::arg("mu"), py::arg("nu"), py::arg("tol") = kDefaultTol);
  m.def("contour_grid",
        [](const Rows& pts, const std::string& mode, double lo, double hi, double step) {
          if (mode != "hyperplane" && mode != "fw") {
            throw Error(ErrorKind::BadParams, "mode must be \"hyperplane\" or \"fw\"");
          }
          const auto g = contour_grid(Sample::from_rows(pts),
                                      mode == "fw" ? ContourMode::FermatWeber : ContourMode::Hyperplane,
                                      grid(lo, hi, step));
          py::dict d;
          d["xs"] = g.xs;
          d["ys"] = g.ys;
          Rows values(g.ys.size());
          for (std::size_t iy = 0; iy < g.ys.size(); ++iy) {
            values[iy].assign(g.values.begin() + static_cast<std::ptrdiff_t>(iy * g.xs.size()),
                              g.values.begin() + static_cast<std::ptrdiff_t>((iy + 1) * g.xs.size()));
          }
          d["values"] = values;
          d["min_value"] = g.min_value;
          d["argmin"] = std::vector<double>{0.0, g.xs[g.min_ix], g.ys[g.min_iy]};
          return d;
        },
        py::arg("points"), py::arg("mode") = "hyperplane", py::arg("lo") = -10.0,
        py::arg("hi") = 10.0, py::arg("step") = 0.1);

  py::class_<TropPoly2>(m, "TropPoly2")
      .def_static("linear", &TropPoly2::linear, py::arg("wx"), py::arg("wy"))
      .def_static("quadratic", &TropPoly2::quadratic, py::arg("wxx"), py::arg("wx"), py::arg("wy"))
      .def_static("from_json", [](const std::string& text) { return io::curve_from_json(text); },
                  py::arg("text"))
      .def_property_readonly("degree", &TropPoly2::degree)
      .def_property_readonly("wxx", [](const TropPoly2& f) { return as_float(f.wxx()); })
      .def_property_readonly("wx", &TropPoly2::wx)
      .def_property_readonly("wy", &TropPoly2::wy)
      .def("residual",
           [](const TropPoly2& f, const std::vector<double>& x) { return curve_membership_residual(f, point(x)); },
           py::arg("x"))
      .def("to_json", [](const TropPoly2& f) { return io::to_json(f); })
      .def(py::self == py::self)
      .def("__repr__", [](const TropPoly2& f) {
        return "TropPoly2(degree=" + std::to_string(f.degree()) + ", wxx=" +
               io::format_number(as_float(f.wxx())) + ", wx=" + io::format_number(f.wx()) +
               ", wy=" + io::format_number(f.wy()) + ")";
      });

  m.def("project_to_curve",
        [](const TropPoly2& f, const std::vector<double>& x) {
          const auto r = project_to_curve(f, point(x));
          return py::make_tuple(vec(r.point), r.distance);
        },
        py::arg("curve"), py::arg("x"), "Returns (point, distance).");
  m.def("fit_linear_curve",
        [](const std::vector<double>& a, const std::vector<double>& b, double tol) {
          return fit_linear_curve(point(a), point(b), tol);
        },
        py::arg("p1"), py::arg("p2"), py::arg("tol") = kDefaultTol);
  m.def("fit_quadratic_curve",
        [](const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
           double tol) { return fit_quadratic_curve(point(a), point(b), point(c), tol); },
        py::arg("p1"), py::arg("p2"), py::arg("p3"), py::arg("tol") = kDefaultTol);

  m.def("mc_mean_distance_to_h0",
        [](int k, double sigma, std::size_t n, std::uint64_t seed) {
          McReport r;
          {
            py::gil_scoped_release release;
            r = mc_mean_distance_to_h0(k, sigma, n, seed);
          }
          return report_dict(r);
        },
        py::arg("k"), py::arg("sigma") = 1.0, py::arg("n") = 100000, py::arg("seed") = 0);
  m.def("mc_projection_residual",
        [](const std::string& kind, int d, std::vector<double> mu, double sigma, bool correlated,
           std::size_t n, std::uint64_t seed, std::size_t blue_every) {
          ProjectionExperiment e;
          if (kind == "a1") {
            e.kind = SpaceKind::A1;
          } else if (kind == "am") {
            e.kind = SpaceKind::Am;
          } else if (kind == "a0") {
            e.kind = SpaceKind::TwoGaussianA0;
          } else {
            throw Error(ErrorKind::BadParams, "kind must be \"a1\", \"am\" or \"a0\"");
          }
          e.d = d;
          e.mu = std::move(mu);
          e.sigma = sigma;
          e.correlated = correlated;
          e.n = n;
          e.seed = seed;
          e.blue_every = blue_every;
          McReport r;
          {
            py::gil_scoped_release release;
            r = mc_projection_residual(e);
          }
          return report_dict(r);
        },
        py::arg("kind"), py::arg("d") = 4, py::arg("mu") = std::vector<double>{0.0, 0.0},
        py::arg("sigma") = 0.1, py::arg("correlated") = false, py::arg("n") = 10000,
        py::arg("seed") = 0, py::arg("blue_every") = 100);
  m.def("mc_center_bias",
        [](int d, double sigma, std::size_t n_inner, std::size_t n_outer, std::uint64_t seed) {
          McReport r;
          {
            py::gil_scoped_release release;
            r = mc_center_bias(d, sigma, n_inner, n_outer, seed);
          }
          return report_dict(r);
        },
        py::arg("d"), py::arg("sigma"), py::arg("n_inner"), py::arg("n_outer"), py::arg("seed") = 0);
}
