#pragma once

#include <cstddef>
#include <vector>

namespace tropfit {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
};

// maximize c.x subject to A x <= b, x >= 0, with A dense row-major
// (rows = b.size(), cols = c.size()). Two-phase tableau simplex; Dantzig
// pricing, switching to Bland's rule after a run of degenerate pivots.
LpResult simplex_maximize(const std::vector<double>& a, const std::vector<double>& b,
                          const std::vector<double>& c, double eps = 1e-10);

}  // namespace tropfit
