#include "tropfit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tropfit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimTooSmall: return "DimTooSmall";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::RankExceedsDim: return "RankExceedsDim";
    case ErrorKind::InvalidPlucker: return "InvalidPlucker";
    case ErrorKind::DegeneratePlucker: return "DegeneratePlucker";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::NotGeneralPosition: return "NotGeneralPosition";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::DegenerateSlope: return "DegenerateSlope";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ExtReal::ExtReal(double v) : value_(v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NonFinite,
                "ExtReal: non-finite value; use ExtReal::bottom() for -inf");
  }
}

ExtReal ExtReal::from_double(double v) {
  if (v == -std::numeric_limits<double>::infinity()) return bottom();
  return ExtReal(v);
}

double ExtReal::value() const {
  if (bottom_) throw Error(ErrorKind::NonFinite, "ExtReal: value() of bottom");
  return value_;
}

double ExtReal::as_double() const noexcept {
  return bottom_ ? -std::numeric_limits<double>::infinity() : value_;
}

ExtReal trop_add(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }

ExtReal trop_mul(ExtReal a, ExtReal b) {
  if (a.is_bottom() || b.is_bottom()) return ExtReal::bottom();
  return ExtReal(a.value() + b.value());
}

TropPoint canonicalize(std::span<const double> raw) {
  if (raw.size() < 2) {
    throw Error(ErrorKind::DimTooSmall,
                "canonicalize: dimension " + std::to_string(raw.size()) + " < 2");
  }
  for (double x : raw) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::NonFinite, "canonicalize: non-finite coordinate");
    }
  }
  std::vector<double> out(raw.size());
  const double shift = raw[0];
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] - shift;
  out[0] = 0.0;
  return TropPoint(std::move(out));
}

double trop_distance(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) {
    throw Error(ErrorKind::DimMismatch,
                "trop_distance: dimensions " + std::to_string(v.size()) + " and " +
                    std::to_string(w.size()));
  }
  if (v.empty()) return 0.0;
  double hi = v[0] - w[0];
  double lo = hi;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double diff = v[i] - w[i];
    hi = std::max(hi, diff);
    lo = std::min(lo, diff);
  }
  return hi - lo;
}

double trop_distance(const TropPoint& v, const TropPoint& w) {
  return trop_distance(v.coords(), w.coords());
}

bool same_class(std::span<const double> v, std::span<const double> w, double tol) {
  return trop_distance(v, w) <= tol;
}

}  // namespace tropfit
