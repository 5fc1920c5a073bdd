#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "toml.hpp"
#include "tropfit/curve.hpp"
#include "tropfit/fit.hpp"
#include "tropfit/io.hpp"
#include "tropfit/mc.hpp"
#include "tropfit/space.hpp"

namespace tropfit::cli {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Io:
      return kParse;
    case ErrorKind::Infeasible:
    case ErrorKind::Degenerate:
    case ErrorKind::DegenerateSlope:
    case ErrorKind::NotGeneralPosition:
    case ErrorKind::DegeneratePlucker:
    case ErrorKind::InvalidPlucker:
      return kInfeasible;
    case ErrorKind::ResourceLimit:
      return kLimit;
    default:
      return kContract;
  }
}

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<TropPoint> load_points(const std::string& path) {
  const auto rows = io::read_points_csv(path);
  std::vector<TropPoint> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(canonicalize(r));
  return pts;
}

void require_dim(const std::string& path, const std::vector<TropPoint>& pts, std::size_t d,
                 const std::string& against) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].dim() != d) {
      throw Error(ErrorKind::DimMismatch, path + " data row " + std::to_string(i + 1) + ": " +
                                              std::to_string(pts[i].dim()) + " columns, " +
                                              against + " has d = " + std::to_string(d));
    }
  }
}

GridSpec parse_range(const std::string& range, double step) {
  const auto colon = range.find(':');
  GridSpec g;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(range);
    std::size_t used = 0;
    const std::string lo = range.substr(0, colon), hi = range.substr(colon + 1);
    g.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(range);
    g.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(range);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "--range: expected a:b, got \"" + range + "\"");
  }
  g.step = step;
  g.nodes();
  return g;
}

std::string csv_row(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += io::format_number(v[i]);
  }
  return s;
}

// project

struct ProjectOpts {
  std::string space, curve, points, out;
};

int cmd_project(const ProjectOpts& o, std::ostream& out) {
  const auto pts = load_points(o.points);
  std::vector<TropPoint> proj;
  std::vector<double> dist, resid;
  if (!o.space.empty()) {
    const auto space = io::space_from_json(io::read_file(o.space));
    require_dim(o.points, pts, static_cast<std::size_t>(space.dim()), o.space);
    for (const auto& x : pts) {
      proj.push_back(blue_rule_project(space, x));
      dist.push_back(trop_distance(x, proj.back()));
      resid.push_back(membership_residual(space, x));
    }
  } else {
    const auto f = io::curve_from_json(io::read_file(o.curve));
    require_dim(o.points, pts, 3, o.curve);
    for (const auto& c : project_to_curve(f, pts)) {
      proj.push_back(c.point);
      dist.push_back(c.distance);
    }
    for (const auto& x : pts) resid.push_back(curve_membership_residual(f, x));
  }
  const std::size_t d = pts.front().dim();
  std::string csv;
  for (std::size_t j = 0; j < d; ++j) csv += "x" + std::to_string(j + 1) + ",";
  for (std::size_t j = 0; j < d; ++j) csv += "p" + std::to_string(j + 1) + ",";
  csv += "distance,residual\n";
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> row(pts[i].begin(), pts[i].end());
    row.insert(row.end(), proj[i].begin(), proj[i].end());
    row.push_back(dist[i]);
    row.push_back(resid[i]);
    csv += csv_row(row) + "\n";
    total += dist[i];
  }
  io::write_file_atomic(o.out, csv);
  out << io::format_number(total) << "\n";
  return kOk;
}

// fit

struct FitOpts {
  std::string kind, points, out;
  int m = 2;
  int degree = 1;
  int restarts = 5;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  std::string range = "-10:10";
  double step = 0.1;
  bool no_refine = false;
};

int cmd_fit(const FitOpts& o, std::ostream& out) {
  const auto pts = load_points(o.points);
  const Sample sample(pts);
  std::string doc;
  double objective = 0.0;
  if (o.kind == "hyperplane") {
    const auto r = fit_hyperplane(sample, parse_range(o.range, o.step), !o.no_refine);
    doc = io::to_json(r);
    objective = r.objective;
  } else if (o.kind == "stiefel") {
    const auto r = fit_stiefel(sample, o.m, o.restarts, o.seed);
    doc = io::to_json(r);
    objective = r.objective;
  } else if (o.kind == "fw") {
    const auto r = fermat_weber(sample);
    doc = io::to_json(r);
    objective = r.objective;
  } else {
    require_dim(o.points, pts, 3, "a plane curve");
    const std::size_t need = o.degree == 1 ? 2 : 3;
    if (o.degree != 1 && o.degree != 2) {
      throw Error(ErrorKind::BadParams, "--degree must be 1 or 2");
    }
    if (pts.size() != need) {
      throw Error(ErrorKind::BadParams, "degree " + std::to_string(o.degree) + " curve needs " +
                                            std::to_string(need) + " points, " + o.points +
                                            " has " + std::to_string(pts.size()));
    }
    const auto f = o.degree == 1 ? fit_linear_curve(pts[0], pts[1], o.tol)
                                 : fit_quadratic_curve(pts[0], pts[1], pts[2], o.tol);
    doc = io::to_json(f, pts);
  }
  if (!o.out.empty()) io::write_file_atomic(o.out, doc);
  out << io::format_number(objective) << "\n";
  return kOk;
}

// mc

struct McOpts {
  std::string experiment, config, out;
  bool timing = false;
  bool gate = false;
  json flags = json::object();  // explicitly given parameters
};

json load_config(const std::string& path) {
  const std::string text = io::read_file(path);
  const auto ext = fs::path(path).extension().string();
  if (ext == ".toml") {
    try {
      const auto table = toml::parse(text, path);
      std::ostringstream ss;
      ss << toml::json_formatter{table};
      return json::parse(ss.str());
    } catch (const toml::parse_error& e) {
      std::ostringstream ss;
      ss << path << ": " << e.description() << " at line " << e.source().begin.line;
      throw Error(ErrorKind::Parse, ss.str());
    }
  }
  if (ext == ".json") {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
  }
  throw Error(ErrorKind::Parse, path + ": config must end in .toml or .json");
}

// A config is one row, an array of rows, or an object whose "run" / "runs"
// array holds the rows and whose other keys are shared defaults.
std::vector<json> config_rows(const json& cfg) {
  std::vector<json> rows;
  if (cfg.is_array()) {
    for (const auto& r : cfg) rows.push_back(r);
  } else if (cfg.is_object()) {
    const char* key = cfg.contains("runs") ? "runs" : (cfg.contains("run") ? "run" : nullptr);
    if (!key) return {cfg};
    if (!cfg[key].is_array()) throw Error(ErrorKind::Parse, std::string("config: ") + key + " must be an array");
    json shared = cfg;
    shared.erase(key);
    for (const auto& r : cfg[key]) {
      json row = shared;
      if (!r.is_object()) throw Error(ErrorKind::Parse, "config: every run must be a table");
      row.update(r);
      rows.push_back(row);
    }
  } else {
    throw Error(ErrorKind::Parse, "config: expected a table or an array of tables");
  }
  for (const auto& r : rows) {
    if (!r.is_object()) throw Error(ErrorKind::Parse, "config: every run must be a table");
  }
  return rows;
}

template <class T>
T param(const json& row, const char* key, T fallback) {
  if (!row.contains(key)) return fallback;
  const auto& v = row[key];
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw Error(ErrorKind::Parse, std::string(key) + ": expected a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw Error(ErrorKind::Parse, std::string(key) + ": expected a string");
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!v.is_array()) throw Error(ErrorKind::Parse, std::string(key) + ": expected an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw Error(ErrorKind::Parse, std::string(key) + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw Error(ErrorKind::Parse, std::string(key) + ": expected an integer");
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
        throw Error(ErrorKind::BadParams, std::string(key) + ": must be non-negative");
      }
    }
    return v.get<T>();
  } else {
    if (!v.is_number()) throw Error(ErrorKind::Parse, std::string(key) + ": expected a number");
    return v.get<T>();
  }
}

McReport run_row(const json& row, bool& gated, std::optional<double>& max) {
  static const std::vector<std::string> known = {
      "experiment", "space", "d", "k", "m", "sigma", "n", "n_inner", "seed",
      "mu", "correlated", "blue_every", "gate", "max"};
  for (const auto& [key, _] : row.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::Parse, "config: unknown key \"" + key + "\"");
    }
  }
  std::string name = param<std::string>(row, "experiment", "");
  gated = param<bool>(row, "gate", false);
  if (row.contains("max")) max = param<double>(row, "max", 0.0);
  const auto seed = param<std::uint64_t>(row, "seed", 0);
  const auto n = param<std::size_t>(row, "n", 100000);
  const double sigma_default = name == "h0-distance" ? 1.0 : 0.1;
  const double sigma = param<double>(row, "sigma", sigma_default);
  if (name == "h0-distance") {
    return mc_mean_distance_to_h0(param<int>(row, "k", 3), sigma, n, seed);
  }
  if (name == "center-bias") {
    return mc_center_bias(param<int>(row, "d", 4), sigma, param<std::size_t>(row, "n_inner", 10),
                          n, seed);
  }
  if (name == "bound-check") {
    gated = true;
    name = "projection-" + param<std::string>(row, "space", "a1");
  }
  ProjectionExperiment e;
  if (name == "projection-a1") {
    e.kind = SpaceKind::A1;
  } else if (name == "projection-am") {
    e.kind = SpaceKind::Am;
  } else if (name == "projection-a0") {
    e.kind = SpaceKind::TwoGaussianA0;
  } else {
    throw Error(ErrorKind::Parse,
                "unknown experiment \"" + name +
                    "\" (h0-distance, projection-a1, projection-am, projection-a0, center-bias, "
                    "bound-check)");
  }
  e.d = param<int>(row, "d", 4);
  const int m = e.kind == SpaceKind::A1 ? 2 : param<int>(row, "m", 2);
  e.mu = param<std::vector<double>>(row, "mu", std::vector<double>(e.kind == SpaceKind::TwoGaussianA0 ? 0 : static_cast<std::size_t>(std::max(m, 0)), 0.0));
  e.sigma = sigma;
  e.correlated = param<bool>(row, "correlated", false);
  e.n = n;
  e.seed = seed;
  e.blue_every = param<std::size_t>(row, "blue_every", 100);
  return mc_projection_residual(e);
}

int cmd_mc(const McOpts& o, std::ostream& out, std::ostream& err) {
  std::vector<json> rows = {json::object()};
  if (!o.config.empty()) rows = config_rows(load_config(o.config));
  std::vector<McReport> reports;
  int code = kOk;
  for (auto row : rows) {
    if (!o.experiment.empty() && !row.contains("experiment")) row["experiment"] = o.experiment;
    row.update(o.flags);
    if (!row.contains("experiment")) throw Error(ErrorKind::Parse, "mc: no experiment given");
    bool gated = false;
    std::optional<double> max;
    const auto start = std::chrono::steady_clock::now();
    McReport r = run_row(row, gated, max);
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto check = [&](double limit, const char* what) {
      if (!(r.estimate <= limit)) {
        err << "gate failed: " << r.experiment << " estimate " << io::format_number(r.estimate)
            << " > " << what << " " << io::format_number(limit) << "\n";
        code = kGateFailed;
      }
    };
    if (gated || o.gate) {
      if (!r.bound && !max) throw Error(ErrorKind::BadParams, r.experiment + ": no bound to gate on");
      if (r.bound) check(*r.bound, "bound");
    }
    if (max) check(*max, "max");
    out << io::format_number(r.estimate) << "\n";
    reports.push_back(std::move(r));
  }
  if (!o.out.empty()) io::write_file_atomic(o.out, io::to_json(reports, o.timing));
  return code;
}

// contour

struct ContourOpts {
  std::string points, mode = "hyperplane", range = "-10:10", out;
  double step = 0.1;
};

int cmd_contour(const ContourOpts& o, std::ostream& out) {
  const auto pts = load_points(o.points);
  if (pts.front().dim() != 3) {
    throw Error(ErrorKind::UnsupportedDim,
                o.points + ": contour grids need d = 3, got d = " + std::to_string(pts.front().dim()));
  }
  const auto mode = o.mode == "fw" ? ContourMode::FermatWeber : ContourMode::Hyperplane;
  const auto g = contour_grid(Sample(pts), mode, parse_range(o.range, o.step));
  std::string csv = "y\\x";
  for (double x : g.xs) csv += "," + io::format_number(x);
  csv += "\n";
  for (std::size_t iy = 0; iy < g.ys.size(); ++iy) {
    csv += io::format_number(g.ys[iy]);
    for (std::size_t ix = 0; ix < g.xs.size(); ++ix) {
      csv += "," + io::format_number(g.values[iy * g.xs.size() + ix]);
    }
    csv += "\n";
  }
  csv += std::string("# minimum: ") + (mode == ContourMode::Hyperplane ? "ω" : "z") + "=(0," +
         io::format_number(g.xs[g.min_ix]) + "," + io::format_number(g.ys[g.min_iy]) +
         ") value=" + io::format_number(g.min_value) + "\n";
  io::write_file_atomic(o.out, csv);
  out << io::format_number(g.min_value) << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tropical PCA: projections, fits, Monte Carlo experiments and contour grids",
               "tropfit"};
  app.require_subcommand(1);

  ProjectOpts po;
  auto* project = app.add_subcommand("project", "Project points onto a linear space or curve");
  auto* sp = project->add_option("--space", po.space, "Space JSON (Plücker, fit result, matrix or omega)");
  auto* cv = project->add_option("--curve", po.curve, "Curve JSON");
  sp->excludes(cv);
  project->add_option("--points", po.points, "Points CSV")->required();
  project->add_option("--out", po.out, "Output CSV")->required();

  FitOpts fo;
  auto* fit = app.add_subcommand("fit", "Fit a hyperplane, Stiefel space, Fermat-Weber point or curve");
  fit->add_option("kind", fo.kind, "hyperplane | stiefel | fw | curve")
      ->required()
      ->check(CLI::IsMember({"hyperplane", "stiefel", "fw", "curve"}));
  fit->add_option("--points", fo.points, "Points CSV")->required();
  fit->add_option("--out", fo.out, "Output JSON");
  fit->add_option("--m", fo.m, "Stiefel rank")->capture_default_str();
  fit->add_option("--degree", fo.degree, "Curve degree (1 or 2)")->capture_default_str();
  fit->add_option("--restarts", fo.restarts, "Stiefel restarts")->capture_default_str();
  fit->add_option("--seed", fo.seed, "Seed")->capture_default_str();
  fit->add_option("--tol", fo.tol, "Tolerance")->capture_default_str();
  fit->add_option("--range", fo.range, "Hyperplane grid range a:b")->capture_default_str();
  fit->add_option("--step", fo.step, "Hyperplane grid step")->capture_default_str();
  fit->add_flag("--no-refine", fo.no_refine, "Skip descent after the grid search");

  McOpts mo;
  int k = 0, d = 0, m = 0;
  double sigma = 0.0;
  std::size_t n = 0, n_inner = 0, blue_every = 0;
  std::uint64_t seed = 0;
  std::string space;
  std::vector<double> mu;
  bool correlated = false;
  auto* mc = app.add_subcommand("mc", "Run Monte Carlo experiments");
  mc->add_option("--experiment", mo.experiment,
                 "h0-distance | projection-a1 | projection-am | projection-a0 | center-bias | bound-check");
  mc->add_option("--config", mo.config, "TOML or JSON config with one or more runs");
  mc->add_option("--out", mo.out, "Output JSON");
  mc->add_flag("--timing", mo.timing, "Record elapsed seconds");
  mc->add_flag("--gate", mo.gate, "Fail when an estimate exceeds its bound");
  auto* ok = mc->add_option("--k", k, "Coordinates (h0-distance)");
  auto* od = mc->add_option("--d", d, "Dimension");
  auto* om = mc->add_option("--m", m, "Rank (projection-am)");
  auto* os = mc->add_option("--sigma", sigma, "Noise scale");
  auto* on = mc->add_option("--n", n, "Draws (replications for center-bias)");
  auto* oni = mc->add_option("--n-inner", n_inner, "Points per replication (center-bias)");
  auto* osd = mc->add_option("--seed", seed, "Seed");
  auto* osp = mc->add_option("--space", space, "a1 | am | a0 (bound-check)");
  auto* omu = mc->add_option("--mu", mu, "Space parameters");
  auto* oc = mc->add_flag("--correlated", correlated, "Block-correlated noise");
  auto* ob = mc->add_option("--blue-every", blue_every, "Blue Rule cross-check stride");
  double max = 0.0;
  auto* omax = mc->add_option("--max", max, "Fail when the estimate exceeds this value");

  ContourOpts co;
  auto* contour = app.add_subcommand("contour", "Objective grid for d = 3 samples");
  contour->add_option("--points", co.points, "Points CSV")->required();
  contour->add_option("--mode", co.mode, "hyperplane | fw")
      ->check(CLI::IsMember({"hyperplane", "fw"}))
      ->capture_default_str();
  contour->add_option("--range", co.range, "Axis range a:b")->capture_default_str();
  contour->add_option("--step", co.step, "Grid step")->capture_default_str();
  contour->add_option("--out", co.out, "Output CSV")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
    if (*project && po.space.empty() == po.curve.empty()) {
      throw CLI::ValidationError("project", "exactly one of --space and --curve is required");
    }
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    if (*project) return cmd_project(po, out);
    if (*fit) return cmd_fit(fo, out);
    if (*contour) return cmd_contour(co, out);
    if (ok->count()) mo.flags["k"] = k;
    if (od->count()) mo.flags["d"] = d;
    if (om->count()) mo.flags["m"] = m;
    if (os->count()) mo.flags["sigma"] = sigma;
    if (on->count()) mo.flags["n"] = n;
    if (oni->count()) mo.flags["n_inner"] = n_inner;
    if (osd->count()) mo.flags["seed"] = seed;
    if (osp->count()) mo.flags["space"] = space;
    if (omu->count()) mo.flags["mu"] = mu;
    if (oc->count()) mo.flags["correlated"] = correlated;
    if (ob->count()) mo.flags["blue_every"] = blue_every;
    if (omax->count()) mo.flags["max"] = max;
    return cmd_mc(mo, out, err);
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    const char* what = e.kind() == ErrorKind::Infeasible ? "infeasible configuration: "
                       : code == kInfeasible             ? "degenerate configuration: "
                                                         : "";
    err << "error: " << what << e.what() << "\n";
    return code;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kLimit;
  }
}

}  // namespace tropfit::cli
