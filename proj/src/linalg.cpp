#include "tropfit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tropfit/subsets.hpp"

namespace tropfit {

TropMatrix::TropMatrix(std::vector<std::vector<ExtReal>> rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorKind::BadParams, "TropMatrix: empty matrix");
  }
  rows_ = rows.size();
  cols_ = rows.front().size();
  data_.reserve(rows_ * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rows[i].size() != cols_) {
      throw Error(ErrorKind::DimMismatch,
                  "TropMatrix: row " + std::to_string(i + 1) + " has " +
                      std::to_string(rows[i].size()) + " entries, expected " +
                      std::to_string(cols_));
    }
    if (std::none_of(rows[i].begin(), rows[i].end(),
                     [](ExtReal x) { return x.is_finite(); })) {
      throw Error(ErrorKind::BadParams,
                  "TropMatrix: row " + std::to_string(i + 1) + " has no finite entry");
    }
    data_.insert(data_.end(), rows[i].begin(), rows[i].end());
  }
}

TropMatrix TropMatrix::from_real(std::span<const double> row_major, std::size_t rows,
                                 std::size_t cols) {
  if (row_major.size() != rows * cols) {
    throw Error(ErrorKind::DimMismatch, "TropMatrix::from_real: size mismatch");
  }
  std::vector<std::vector<ExtReal>> r(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    r[i].assign(row_major.begin() + static_cast<std::ptrdiff_t>(i * cols),
                row_major.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }
  return TropMatrix(std::move(r));
}

Assignment max_plus_assignment(std::span<const ExtReal> a, std::size_t q) {
  if (a.size() != q * q || q == 0) {
    throw Error(ErrorKind::NotSquare, "tdet: matrix is not square");
  }
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const ExtReal& x : a) {
    if (x.is_bottom()) continue;
    hi = std::max(hi, x.value());
    lo = std::min(lo, x.value());
  }
  if (!(hi >= lo)) return {};

  // Costs hi - A in [0, hi - lo]; a forbidden cell costs more than any
  // permutation made of allowed cells, so it is used only when unavoidable.
  const double forbidden = static_cast<double>(q) * (hi - lo) + 1.0;
  const std::size_t n = q;
  auto cost = [&](std::size_t i, std::size_t j) {
    const ExtReal& x = a[(i - 1) * q + (j - 1)];
    return x.is_bottom() ? forbidden : hi - x.value();
  };

  // Shortest augmenting path with potentials, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.column_of_row[p[j] - 1] = static_cast<int>(j - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ExtReal& x = a[i * q + static_cast<std::size_t>(out.column_of_row[i])];
    if (x.is_bottom()) return {};
    sum += x.value();
  }
  out.value = ExtReal(sum);
  return out;
}

ExtReal tdet(std::span<const ExtReal> row_major, std::size_t q) {
  if (q == 1 && row_major.size() == 1) return row_major[0];
  if (q == 2 && row_major.size() == 4) {
    return trop_add(trop_mul(row_major[0], row_major[3]), trop_mul(row_major[1], row_major[2]));
  }
  return max_plus_assignment(row_major, q).value;
}

ExtReal tdet(const TropMatrix& square) {
  if (square.rows() != square.cols()) {
    throw Error(ErrorKind::NotSquare, "tdet: " + std::to_string(square.rows()) + "x" +
                                          std::to_string(square.cols()) + " matrix");
  }
  return tdet(square.data(), square.rows());
}

PluckerVector::PluckerVector(int d, int m, std::vector<ExtReal> coords)
    : d_(d), m_(m), coords_(std::move(coords)) {
  if (m < 1 || m >= d) {
    throw Error(ErrorKind::RankExceedsDim, "PluckerVector: need 1 <= m < d, got m=" +
                                               std::to_string(m) + " d=" + std::to_string(d));
  }
  if (d > 64 || binomial(d, m) > kMaxCoords) {
    throw Error(ErrorKind::ResourceLimit, "PluckerVector: C(d, m) too large");
  }
  if (coords_.size() != binomial(d, m)) {
    throw Error(ErrorKind::BadParams, "PluckerVector: expected " +
                                          std::to_string(binomial(d, m)) + " coordinates, got " +
                                          std::to_string(coords_.size()));
  }
  if (std::none_of(coords_.begin(), coords_.end(), [](ExtReal x) { return x.is_finite(); })) {
    throw Error(ErrorKind::InvalidPlucker, "PluckerVector: all coordinates are -inf");
  }
}

ExtReal PluckerVector::at(std::span<const int> sorted) const {
  return coords_[static_cast<std::size_t>(colex_rank(sorted))];
}

ExtReal PluckerVector::at_any(std::span<const int> elements) const {
  if (static_cast<int>(elements.size()) != m_) return ExtReal::bottom();
  std::vector<int> s(elements.begin(), elements.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return ExtReal::bottom();
  return at(s);
}

PluckerVector plucker_from_matrix(const TropMatrix& a) {
  const int m = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  if (m >= d) {
    throw Error(ErrorKind::RankExceedsDim, "plucker_from_matrix: " + std::to_string(m) +
                                               " rows for " + std::to_string(d) + " columns");
  }
  std::vector<ExtReal> coords;
  coords.reserve(binomial(d, m));
  std::vector<ExtReal> minor(static_cast<std::size_t>(m * m));
  for_each_subset(d, m, [&](std::span<const int> cols) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        minor[i * cols.size() + j] = a(i, static_cast<std::size_t>(cols[j]));
      }
    }
    coords.push_back(tdet(minor, static_cast<std::size_t>(m)));
  });
  return PluckerVector(d, m, std::move(coords));
}

std::vector<PluckerViolation> validate_plucker(const PluckerVector& p, double tol) {
  const int d = p.dim();
  const int m = p.rank();
  std::vector<PluckerViolation> out;
  std::vector<int> buf;
  std::vector<double> terms;
  for_each_subset(d, m - 1, [&](std::span<const int> sigma) {
    for_each_subset(d, m + 1, [&](std::span<const int> tau) {
      terms.clear();
      for (std::size_t s = 0; s < tau.size(); ++s) {
        const int t = tau[s];
        if (std::binary_search(sigma.begin(), sigma.end(), t)) continue;
        buf.assign(sigma.begin(), sigma.end());
        buf.insert(std::upper_bound(buf.begin(), buf.end(), t), t);
        const ExtReal left = p.at(buf);
        buf.assign(tau.begin(), tau.end());
        buf.erase(buf.begin() + static_cast<std::ptrdiff_t>(s));
        const ExtReal right = p.at(buf);
        const ExtReal term = trop_mul(left, right);
        if (term.is_finite()) terms.push_back(term.value());
      }
      // No finite term: the relation holds vacuously.
      if (terms.empty()) return;
      double gap = std::numeric_limits<double>::infinity();
      if (terms.size() >= 2) {
        std::partial_sort(terms.begin(), terms.begin() + 2, terms.end(), std::greater<>());
        gap = terms[0] - terms[1];
      }
      if (gap > tol) {
        out.push_back({std::vector<int>(sigma.begin(), sigma.end()),
                       std::vector<int>(tau.begin(), tau.end()), gap});
      }
    });
  });
  return out;
}

}  // namespace tropfit
