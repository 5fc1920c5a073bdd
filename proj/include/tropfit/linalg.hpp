#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tropfit/core.hpp"

namespace tropfit {

// m x d generator matrix over R u {-inf}. Every row must contain a finite
// entry.
class TropMatrix {
 public:
  TropMatrix() = default;
  explicit TropMatrix(std::vector<std::vector<ExtReal>> rows);

  // Finite real matrix; convenience for generators built by optimizers.
  static TropMatrix from_real(std::span<const double> row_major, std::size_t rows,
                              std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  ExtReal operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const ExtReal> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ExtReal> data_;
};

// Optimal assignment of a square max-plus matrix.
struct Assignment {
  ExtReal value = ExtReal::bottom();  // bottom iff no all-finite permutation
  std::vector<int> column_of_row;     // empty when value is bottom
};

// max over permutations of sum_i A[i, s(i)], solved as an assignment problem
// (Hungarian method on negated costs, forbidden cells for -inf), O(q^3).
Assignment max_plus_assignment(std::span<const ExtReal> row_major, std::size_t q);

// Tropical determinant. Throws NotSquare.
ExtReal tdet(const TropMatrix& square);
ExtReal tdet(std::span<const ExtReal> row_major, std::size_t q);

// Map from m-subsets of [d] to R u {-inf}. Coordinates are stored densely in
// colexicographic subset order (see subsets.hpp); subsets are 0-based here and
// 1-based in every serialized form.
class PluckerVector {
 public:
  PluckerVector() = default;
  // Throws RankExceedsDim unless 1 <= m < d, BadParams on a size mismatch,
  // InvalidPlucker if every coordinate is bottom, ResourceLimit if C(d, m)
  // exceeds kMaxCoords.
  PluckerVector(int d, int m, std::vector<ExtReal> coords);

  static constexpr std::size_t kMaxCoords = std::size_t{1} << 24;

  int dim() const noexcept { return d_; }
  int rank() const noexcept { return m_; }
  std::size_t size() const noexcept { return coords_.size(); }
  const std::vector<ExtReal>& coords() const noexcept { return coords_; }

  ExtReal at_rank(std::size_t r) const { return coords_[r]; }
  // Sorted, distinct, 0-based subset of size m.
  ExtReal at(std::span<const int> sorted) const;
  // Any order; a repeated element or a size other than m yields bottom.
  ExtReal at_any(std::span<const int> elements) const;

  friend bool operator==(const PluckerVector&, const PluckerVector&) = default;

 private:
  int d_ = 0;
  int m_ = 0;
  std::vector<ExtReal> coords_;
};

// p(w) = tdet(A_w) for every m-subset w of the columns. Throws RankExceedsDim
// unless rows < cols.
PluckerVector plucker_from_matrix(const TropMatrix& a);

struct PluckerViolation {
  std::vector<int> sigma;  // (m-1)-subset, 0-based
  std::vector<int> tau;    // (m+1)-subset, 0-based
  double gap;              // max - 2nd max among finite terms; +inf if only one
};

// Checks the exchange relations: for every (m-1)-subset sigma and (m+1)-subset
// tau, the maximum of p(sigma + t) + p(tau - t) over t in tau is attained at
// least twice (max - 2nd max <= tol). Enumerates C(d,m-1) * C(d,m+1) pairs at
// m+1 terms each, which is fine for d <= 20, m <= 4.
std::vector<PluckerViolation> validate_plucker(const PluckerVector& p,
                                               double tol = kDefaultTol);

}  // namespace tropfit
