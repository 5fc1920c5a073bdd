#include "tropfit/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "tropfit/subsets.hpp"

namespace tropfit::io {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

ordered ext(ExtReal v) { return v.is_bottom() ? ordered("-inf") : ordered(v.value()); }

ExtReal ext_from(const json& j, const std::string& what) {
  if (j.is_number()) return ExtReal(j.get<double>());
  if (j.is_string() && j.get<std::string>() == "-inf") return ExtReal::bottom();
  throw Error(ErrorKind::Parse, what + ": expected a number or \"-inf\"");
}

double real_from(const json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorKind::Parse, what + ": expected a number");
  return j.get<double>();
}

std::vector<double> reals_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, what + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(real_from(v, what));
  return out;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

std::string subset_key(std::span<const int> s) {
  std::string k;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) k += ',';
    k += std::to_string(s[i] + 1);
  }
  return k;
}

ordered plucker_json(const PluckerVector& p) {
  // Keys sorted ascending as 1-based integer tuples.
  std::vector<std::pair<std::vector<int>, ExtReal>> entries;
  std::size_t r = 0;
  for_each_subset(p.dim(), p.rank(), [&](std::span<const int> s) {
    entries.push_back({{s.begin(), s.end()}, p.at_rank(r++)});
  });
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ordered coords = ordered::object();
  for (const auto& [s, v] : entries) coords[subset_key(s)] = ext(v);
  ordered j;
  j["d"] = p.dim();
  j["m"] = p.rank();
  j["coords"] = coords;
  return j;
}

PluckerVector plucker_from(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("m") || !j.contains("coords")) {
    throw Error(ErrorKind::Parse, "plucker: expected an object with d, m and coords");
  }
  const int d = static_cast<int>(real_from(j["d"], "plucker.d"));
  const int m = static_cast<int>(real_from(j["m"], "plucker.m"));
  if (m < 1 || m >= d) throw Error(ErrorKind::RankExceedsDim, "plucker: need 1 <= m < d");
  if (d > 64) throw Error(ErrorKind::ResourceLimit, "plucker: d > 64");
  const auto& coords = j["coords"];
  if (!coords.is_object()) throw Error(ErrorKind::Parse, "plucker.coords: expected an object");
  std::vector<ExtReal> values;
  for_each_subset(d, m, [&](std::span<const int> s) {
    const std::string key = subset_key(s);
    if (!coords.contains(key)) throw Error(ErrorKind::Parse, "plucker.coords: missing key " + key);
    values.push_back(ext_from(coords[key], "plucker.coords[" + key + "]"));
  });
  if (coords.size() != values.size()) {
    throw Error(ErrorKind::Parse, "plucker.coords: unexpected keys");
  }
  return PluckerVector(d, m, std::move(values));
}

ordered curve_json(const TropPoly2& f) {
  ordered j;
  j["degree"] = f.degree();
  j["wxx"] = ext(f.wxx());
  j["wx"] = f.wx();
  j["wy"] = f.wy();
  return j;
}

TropPoly2 curve_from(const json& j) {
  if (!j.is_object() || !j.contains("wx") || !j.contains("wy")) {
    throw Error(ErrorKind::Parse, "curve: expected an object with wx, wy");
  }
  const double wx = real_from(j["wx"], "curve.wx");
  const double wy = real_from(j["wy"], "curve.wy");
  const ExtReal wxx = j.contains("wxx") ? ext_from(j["wxx"], "curve.wxx") : ExtReal::bottom();
  const int degree = j.contains("degree") ? static_cast<int>(real_from(j["degree"], "curve.degree"))
                                          : (wxx.is_bottom() ? 1 : 2);
  if (degree == 1) {
    if (wxx.is_finite()) throw Error(ErrorKind::Parse, "curve: degree 1 needs wxx = \"-inf\"");
    return TropPoly2::linear(wx, wy);
  }
  if (degree == 2) {
    if (wxx.is_bottom()) throw Error(ErrorKind::Parse, "curve: degree 2 needs a finite wxx");
    return TropPoly2::quadratic(wxx.value(), wx, wy);
  }
  throw Error(ErrorKind::Parse, "curve: degree must be 1 or 2");
}

ordered points_json(std::span<const TropPoint> pts) {
  ordered a = ordered::array();
  for (const auto& p : pts) a.push_back(std::vector<double>(p.begin(), p.end()));
  return a;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_json(const PluckerVector& p) { return plucker_json(p).dump(2) + "\n"; }

std::string to_json(const TropPoly2& f) { return curve_json(f).dump(2) + "\n"; }

std::string to_json(const FitResult& r) {
  ordered j;
  if (const auto* h = std::get_if<HyperplaneNormal>(&r.space)) {
    j["kind"] = "hyperplane";
    j["objective"] = r.objective;
    j["omega"] = std::vector<double>(h->omega.begin(), h->omega.end());
  } else {
    const auto& s = std::get<StiefelSpace>(r.space);
    j["kind"] = "stiefel";
    j["objective"] = r.objective;
    j["m"] = s.rank();
    j["plucker"] = plucker_json(s.plucker());
    if (r.generator) {
      ordered rows = ordered::array();
      for (std::size_t i = 0; i < r.generator->rows(); ++i) {
        ordered row = ordered::array();
        for (std::size_t c = 0; c < r.generator->cols(); ++c) row.push_back(ext((*r.generator)(i, c)));
        rows.push_back(row);
      }
      j["generator"] = rows;
    }
  }
  j["projections"] = points_json(r.projections);
  j["distances"] = r.distances;
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["trace"] = r.trace;
  return j.dump(2) + "\n";
}

std::string to_json(const FermatWeber& fw) {
  ordered j;
  j["kind"] = "fermat_weber";
  j["objective"] = fw.objective;
  j["point"] = std::vector<double>(fw.point.begin(), fw.point.end());
  return j.dump(2) + "\n";
}

std::string to_json(const TropPoly2& f, std::span<const TropPoint> through) {
  ordered j;
  j["kind"] = "curve";
  j["objective"] = 0.0;
  j["curve"] = curve_json(f);
  j["points"] = points_json(through);
  ordered res = ordered::array();
  for (const auto& p : through) res.push_back(curve_membership_residual(f, p));
  j["residuals"] = res;
  return j.dump(2) + "\n";
}

std::string to_json(const std::vector<McReport>& reports, bool with_elapsed) {
  ordered arr = ordered::array();
  for (const auto& r : reports) {
    ordered j;
    j["experiment"] = r.experiment;
    j["estimate"] = r.estimate;
    j["std_error"] = r.std_error;
    j["n"] = r.n;
    j["seed"] = r.seed;
    if (r.bound) {
      j["bound"] = *r.bound;
      j["within_bound"] = r.estimate <= *r.bound;
    }
    j["excluded"] = r.excluded;
    j["blue_checked"] = r.blue_checked;
    j["blue_max_diff"] = r.blue_max_diff;
    if (with_elapsed) j["elapsed"] = r.elapsed;
    arr.push_back(j);
  }
  ordered top;
  top["reports"] = arr;
  return top.dump(2) + "\n";
}

PluckerVector plucker_from_json(std::string_view text) {
  const json j = parse(text);
  return plucker_from(j.contains("plucker") ? j["plucker"] : j);
}

TropPoly2 curve_from_json(std::string_view text) {
  const json j = parse(text);
  return curve_from(j.contains("curve") ? j["curve"] : j);
}

StiefelSpace space_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) throw Error(ErrorKind::Parse, "space: expected a JSON object");
  if (j.contains("plucker")) return StiefelSpace::from_plucker(plucker_from(j["plucker"]));
  if (j.contains("coords")) return StiefelSpace::from_plucker(plucker_from(j));
  if (j.contains("omega")) return StiefelSpace::hyperplane(reals_from(j["omega"], "omega"));
  if (j.contains("matrix")) {
    const auto& rows = j["matrix"];
    if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::Parse, "matrix: expected rows");
    std::vector<std::vector<ExtReal>> m;
    for (const auto& row : rows) {
      if (!row.is_array()) throw Error(ErrorKind::Parse, "matrix: expected rows");
      std::vector<ExtReal> r;
      for (const auto& v : row) r.push_back(ext_from(v, "matrix entry"));
      m.push_back(std::move(r));
    }
    const TropMatrix a(std::move(m));
    if (a.rows() >= a.cols()) throw Error(ErrorKind::RankExceedsDim, "matrix: need rows < cols");
    return StiefelSpace::from_matrix(a);
  }
  throw Error(ErrorKind::Parse, "space: expected plucker, coords, omega or matrix");
}

std::vector<std::vector<double>> read_points_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  const std::string name = path.string();
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    bool numeric = true;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0' || errno == ERANGE) {
        numeric = false;
        break;
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::Parse, name + " row " + std::to_string(lineno) +
                                          ": non-finite value \"" + cell + "\"");
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error(ErrorKind::Parse,
                  name + " row " + std::to_string(lineno) + ": invalid number \"" + cell + "\"");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::DimMismatch, name + " row " + std::to_string(lineno) + ": " +
                                              std::to_string(row.size()) + " columns, expected " +
                                              std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, name + ": no data rows");
  if (rows.front().size() < 2) {
    throw Error(ErrorKind::DimTooSmall, name + ": points need at least 2 columns");
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace tropfit::io
