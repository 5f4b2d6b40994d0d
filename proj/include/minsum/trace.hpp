#ifndef MINSUM_TRACE_HPP
#define MINSUM_TRACE_HPP

#include <iosfwd>
#include <vector>

#include "minsum/common.hpp"

namespace minsum {

/// One iteration of a solver run. NaN fields mean "not available" and print
/// as empty CSV cells. grid_points is 0 on the parametric path.
struct TraceRow {
  int t = 0;
  std::vector<double> x;
  double step_inf = kNaN;      // ||x^(t) - x^(t-1)||_inf
  double residual_inf = kNaN;  // ||Ax - b||_inf, or ||grad F||_inf on the general path
  double err_weighted = kNaN;  // max_r |x_r - x*_r| / w_r
  double bound_value = kNaN;   // rate-bound right-hand side at this t
  int grid_points = 0;
};

struct SolveTrace {
  int n = 0;
  std::vector<TraceRow> rows;
  bool converged = false;

  const TraceRow& last() const { return rows.back(); }
};

/// Columns: t, x_0..x_{n-1} (only with full_x), step_inf, residual_inf,
/// err_weighted, bound_value, grid_points.
void write_trace_csv(std::ostream& os, const SolveTrace& trace, bool full_x);

}  // namespace minsum

#endif
