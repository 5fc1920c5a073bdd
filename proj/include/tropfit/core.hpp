#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "tropfit/error.hpp"

namespace tropfit {

// Default tolerance for metric comparisons and tie detection.
inline constexpr double kDefaultTol = 1e-9;

// A scalar of the max-plus semiring: a finite real or the bottom element
// (-inf). Bottom is a tag, never an IEEE infinity; constructing from NaN or
// an infinity throws NonFinite.
class ExtReal {
 public:
  constexpr ExtReal() noexcept = default;  // 0, the multiplicative unit
  ExtReal(double v);                       // NOLINT(implicit)

  static constexpr ExtReal bottom() noexcept {
    ExtReal r;
    r.bottom_ = true;
    return r;
  }

  // Accepts -inf as bottom; used when reading arrays that encode bottom as
  // an IEEE infinity at an I/O boundary.
  static ExtReal from_double(double v);

  constexpr bool is_bottom() const noexcept { return bottom_; }
  constexpr bool is_finite() const noexcept { return !bottom_; }

  // Throws NonFinite when called on bottom.
  double value() const;
  constexpr double value_or(double fallback) const noexcept {
    return bottom_ ? fallback : value_;
  }
  // IEEE view: bottom maps to -infinity. Only for internal numeric kernels.
  double as_double() const noexcept;

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
    return a.value_ == b.value_;
  }
  friend constexpr std::partial_ordering operator<=>(const ExtReal& a,
                                                     const ExtReal& b) noexcept {
    if (a.bottom_ && b.bottom_) return std::partial_ordering::equivalent;
    if (a.bottom_) return std::partial_ordering::less;
    if (b.bottom_) return std::partial_ordering::greater;
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool bottom_ = false;
};

// a (+) b = max(a, b)
ExtReal trop_add(ExtReal a, ExtReal b) noexcept;
// a (.) b = a + b, bottom absorbing
ExtReal trop_mul(ExtReal a, ExtReal b);

// A point of the tropical projective torus R^d / R1 in canonical form: the
// first coordinate is exactly zero and every coordinate is finite.
class TropPoint {
 public:
  TropPoint() = default;

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  // Exact comparison of canonical representatives.
  friend bool operator==(const TropPoint&, const TropPoint&) = default;

 private:
  friend TropPoint canonicalize(std::span<const double> raw);
  explicit TropPoint(std::vector<double> coords) : coords_(std::move(coords)) {}

  std::vector<double> coords_;
};

// raw - raw[0] * 1. Throws DimTooSmall for d < 2, NonFinite on NaN/inf.
TropPoint canonicalize(std::span<const double> raw);
inline TropPoint canonicalize(const std::vector<double>& raw) {
  return canonicalize(std::span<const double>(raw));
}

// max_i(v_i - w_i) - min_i(v_i - w_i). Representatives need not be
// canonical. Throws DimMismatch.
double trop_distance(std::span<const double> v, std::span<const double> w);
double trop_distance(const TropPoint& v, const TropPoint& w);

// True when v and w are the same class up to `tol` in the tropical metric.
bool same_class(std::span<const double> v, std::span<const double> w,
                double tol = kDefaultTol);

}  // namespace tropfit
