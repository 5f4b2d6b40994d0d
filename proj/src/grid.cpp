#include "minsum/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace minsum {

namespace {
bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }
}

GridDomain GridDomain::build(double lo_target, double hi_target, int points) {
  if (points < 65 || !power_of_two(points - 1))
    throw Error("grid points must be a power of two plus one, >= 65 (got " +
                std::to_string(points) + ")");
  if (!std::isfinite(lo_target) || !std::isfinite(hi_target) ||
      lo_target >= hi_target)
    throw Error("grid domain target must be a finite interval");
  lo_target = std::min(lo_target, -1e-6);
  hi_target = std::max(hi_target, 1e-6);

  const int cells = points - 1;
  int m = static_cast<int>(
      std::lround(-lo_target / (hi_target - lo_target) * cells));
  m = std::clamp(m, 1, cells - 1);
  const double h = std::max(-lo_target / m, hi_target / (cells - m));

  GridDomain d;
  d.points = points;
  d.zero_index = m;
  d.h = h;
  d.xs.resize(points);
  for (int k = 0; k < points; ++k) d.xs[k] = (k - m) * h;
  d.lo = d.xs.front();
  d.hi = d.xs.back();
  return d;
}

GridDomain GridDomain::refined() const {
  GridDomain d;
  d.points = 2 * (points - 1) + 1;
  d.zero_index = 2 * zero_index;
  d.h = 0.5 * h;
  d.xs.resize(d.points);
  for (int k = 0; k < d.points; ++k) d.xs[k] = (k - d.zero_index) * d.h;
  d.lo = d.xs.front();
  d.hi = d.xs.back();
  return d;
}

int GridDomain::cell(double x) const {
  int k = static_cast<int>(std::floor((x - lo) / h));
  return std::clamp(k, 0, points - 2);
}

CubicSpline CubicSpline::fit(double lo, double h, std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 5) throw Error("cubic spline needs at least 5 knots");
  CubicSpline s;
  s.lo_ = lo;
  s.h_ = h;
  s.v_.assign(values.begin(), values.end());
  s.m_.assign(n, 0.0);

  std::vector<double> d(n, 0.0);
  for (int k = 1; k <= n - 2; ++k)
    d[k] = 6.0 * (values[k - 1] - 2.0 * values[k] + values[k + 1]) / (h * h);

  // Not-a-knot: the third derivative is continuous across the first and last
  // interior knots, which pins M_1 and M_{n-2} directly on a uniform grid.
  s.m_[1] = d[1] / 6.0;
  s.m_[n - 2] = d[n - 2] / 6.0;

  const int m = n - 4;  // unknowns M_2 .. M_{n-3}
  if (m > 0) {
    std::vector<double> diag(m, 4.0), rhs(m);
    for (int j = 0; j < m; ++j) rhs[j] = d[j + 2];
    rhs[0] -= s.m_[1];
    rhs[m - 1] -= s.m_[n - 2];
    // Thomas
    for (int j = 1; j < m; ++j) {
      const double w = 1.0 / diag[j - 1];
      diag[j] -= w;
      rhs[j] -= w * rhs[j - 1];
    }
    s.m_[2 + m - 1] = rhs[m - 1] / diag[m - 1];
    for (int j = m - 2; j >= 0; --j)
      s.m_[2 + j] = (rhs[j] - s.m_[2 + j + 1]) / diag[j];
  }
  s.m_[0] = 2.0 * s.m_[1] - s.m_[2];
  s.m_[n - 1] = 2.0 * s.m_[n - 2] - s.m_[n - 3];
  return s;
}

int CubicSpline::cell(double x) const {
  int k = static_cast<int>(std::floor((x - lo_) / h_));
  return std::clamp(k, 0, static_cast<int>(v_.size()) - 2);
}

double CubicSpline::value(double x) const {
  const int k = cell(x);
  const double xk = lo_ + k * h_;
  const double a = (xk + h_ - x) / h_;
  const double b = (x - xk) / h_;
  return a * v_[k] + b * v_[k + 1] +
         ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * (h_ * h_) / 6.0;
}

double CubicSpline::deriv(double x) const {
  const int k = cell(x);
  const double xk = lo_ + k * h_;
  const double a = (xk + h_ - x) / h_;
  const double b = (x - xk) / h_;
  return (v_[k + 1] - v_[k]) / h_ +
         ((3.0 * b * b - 1.0) * m_[k + 1] - (3.0 * a * a - 1.0) * m_[k]) * h_ / 6.0;
}

double CubicSpline::second(double x) const {
  const int k = cell(x);
  const double xk = lo_ + k * h_;
  const double a = (xk + h_ - x) / h_;
  const double b = (x - xk) / h_;
  return a * m_[k] + b * m_[k + 1];
}

}  // namespace minsum
