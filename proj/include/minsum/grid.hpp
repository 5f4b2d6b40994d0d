#ifndef MINSUM_GRID_HPP
#define MINSUM_GRID_HPP

#include <span>
#include <vector>

#include "minsum/common.hpp"

namespace minsum {

/// Uniform grid with 0 exactly on a grid node (the message normalisation
/// point must be representable without interpolation). points is a power of
/// two plus one, >= 65, so one halving refinement keeps old nodes in place.
struct GridDomain {
  double lo = -1, hi = 1;
  int points = 0;
  double h = 0;
  int zero_index = 0;
  std::vector<double> xs;  // xs[k] = (k - zero_index) * h; xs[zero_index] == 0

  static GridDomain build(double lo_target, double hi_target, int points);
  /// Same extent, spacing halved: 2*(points-1)+1 nodes, old nodes preserved.
  GridDomain refined() const;

  bool contains(double x) const { return x >= lo && x <= hi; }
  /// Cell index such that xs[k] <= x <= xs[k+1], clamped to [0, points-2].
  int cell(double x) const;
};

/// Not-a-knot cubic spline on a uniform grid (C^2, reproduces cubics).
class CubicSpline {
 public:
  CubicSpline() = default;
  static CubicSpline fit(double lo, double h, std::span<const double> values);

  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;

 private:
  double lo_ = 0, h_ = 1;
  std::vector<double> v_;  // knot values
  std::vector<double> m_;  // knot second derivatives (moments)
  int cell(double x) const;
};

/// One directed-edge message sampled on the receiver's grid, normalised so
/// the value at x = 0 is exactly zero, plus the minimiser map recorded for
/// diagnostics and the derivative-identity checks.
struct GridMessage {
  std::vector<double> values;
  std::vector<double> minimizer;
  CubicSpline spline;
};

}  // namespace minsum

#endif
