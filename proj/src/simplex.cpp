#include "tropfit/simplex.hpp"

#include <cmath>
#include <utility>

#include "tropfit/error.hpp"

namespace tropfit {
namespace {

class Tableau {
 public:
  Tableau(const std::vector<double>& a, const std::vector<double>& b,
          const std::vector<double>& c, double eps)
      : m_(b.size()), n_(c.size()), eps_(eps), width_(n_ + 2),
        d_((m_ + 2) * width_, 0.0), basis_(m_), nonbasis_(n_ + 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = a[i * n_ + j];
      at(i, n_) = -1.0;
      at(i, n_ + 1) = b[i];
      basis_[i] = static_cast<long>(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      at(m_, j) = -c[j];
    }
    nonbasis_[n_] = -1;  // auxiliary variable of phase one
    at(m_ + 1, n_) = 1.0;
  }

  LpResult solve() {
    LpResult out;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && at(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!run(true) || at(m_ + 1, n_ + 1) < -eps_) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (at(i, j) < at(i, s) || (at(i, j) == at(i, s) && nonbasis_[j] < nonbasis_[s])) s = j;
        }
        pivot(i, s);
      }
    }
    if (!run(false)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) {
        out.x[static_cast<std::size_t>(basis_[i])] = at(i, n_ + 1);
      }
    }
    out.value = at(m_, n_ + 1);
    return out;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return d_[i * width_ + j]; }

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / at(r, s);
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = at(i, s) * inv;
      if (f == 0.0) continue;
      double* row = &d_[i * width_];
      const double* prow = &d_[r * width_];
      for (std::size_t j = 0; j < width_; ++j) {
        if (j != s) row[j] -= prow[j] * f;
      }
      row[s] = -f;
    }
    for (std::size_t j = 0; j < width_; ++j) {
      if (j != s) at(r, j) *= inv;
    }
    at(r, s) = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // false when unbounded
  bool run(bool phase_one) {
    const std::size_t obj = phase_one ? m_ + 1 : m_;
    const std::size_t limit = 50 * (m_ + n_) + 10000;
    int degenerate_run = 0;
    for (std::size_t iter = 0; iter < limit; ++iter) {
      const bool bland = degenerate_run > 50;
      long s = -1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasis_[j] == -1) continue;
        const double rc = at(obj, j);
        if (rc >= -eps_) continue;
        if (s < 0) {
          s = static_cast<long>(j);
        } else if (bland ? nonbasis_[j] < nonbasis_[static_cast<std::size_t>(s)]
                         : rc < at(obj, static_cast<std::size_t>(s))) {
          s = static_cast<long>(j);
        }
      }
      if (s < 0) return true;
      const auto sc = static_cast<std::size_t>(s);
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i) {
        if (at(i, sc) <= eps_) continue;
        if (r < 0) {
          r = static_cast<long>(i);
          continue;
        }
        const auto rr = static_cast<std::size_t>(r);
        const double lhs = at(i, n_ + 1) / at(i, sc);
        const double rhs = at(rr, n_ + 1) / at(rr, sc);
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[rr])) r = static_cast<long>(i);
      }
      if (r < 0) return false;
      const auto rr = static_cast<std::size_t>(r);
      degenerate_run = at(rr, n_ + 1) <= eps_ ? degenerate_run + 1 : 0;
      pivot(rr, sc);
    }
    throw Error(ErrorKind::Degenerate, "simplex: iteration limit reached");
  }

  std::size_t m_, n_;
  double eps_;
  std::size_t width_;
  std::vector<double> d_;
  std::vector<long> basis_, nonbasis_;
};

}  // namespace

LpResult simplex_maximize(const std::vector<double>& a, const std::vector<double>& b,
                          const std::vector<double>& c, double eps) {
  if (a.size() != b.size() * c.size()) {
    throw Error(ErrorKind::DimMismatch, "simplex: constraint matrix has wrong size");
  }
  return Tableau(a, b, c, eps).solve();
}

}  // namespace tropfit
