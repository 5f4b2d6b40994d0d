#include "minsum/trace.hpp"

#include <cmath>
#include <ostream>

namespace minsum {

namespace {
void put(std::ostream& os, double v) {
  if (std::isnan(v))
    os << "";
  else
    os << v;
}
}  // namespace

void write_trace_csv(std::ostream& os, const SolveTrace& trace, bool full_x) {
  const auto flags = os.flags();
  os.precision(17);
  os << "t";
  if (full_x)
    for (int i = 0; i < trace.n; ++i) os << ",x_" << i;
  os << ",step_inf,residual_inf,err_weighted,bound_value,grid_points\n";
  for (const auto& row : trace.rows) {
    os << row.t;
    if (full_x)
      for (int i = 0; i < trace.n; ++i) os << "," << row.x[i];
    os << ",";
    put(os, row.step_inf);
    os << ",";
    put(os, row.residual_inf);
    os << ",";
    put(os, row.err_weighted);
    os << ",";
    put(os, row.bound_value);
    os << ",";
    if (row.grid_points > 0) os << row.grid_points;
    os << "\n";
  }
  os.flags(flags);
}

}  // namespace minsum
