#ifndef MINSUM_OPTIMIZE1D_HPP
#define MINSUM_OPTIMIZE1D_HPP

#include <array>
#include <cmath>

#include "minsum/common.hpp"

namespace minsum {

struct Min1D {
  double x = 0;
  double value = 0;
  int evals = 0;
  bool converged = false;
};

/// Golden-section search on [lo, hi].
template <class F>
Min1D golden_min(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm), evals + 1, (b - a) <= xtol};
}

/// Brent's method (golden section + parabolic steps) on [lo, hi].
template <class F>
Min1D brent_min(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  constexpr double gr = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + gr * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0, e = 0;
  int evals = 1;
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = xtol * std::fabs(x) + 1e-14;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) return {x, fx, evals, true};
    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0) p = -p;
      q = std::fabs(q);
      const double etmp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etmp) && p > q * (a - x) &&
          p < q * (b - x)) {
        parabolic = true;
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = gr * e;
    }
    const double u = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0) ? tol1 : -tol1);
    const double fu = f(u);
    ++evals;
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx, evals, false};
}

/// Expands a bracket around `centre` by doubling (shifting toward the lower
/// side) until the midpoint value is no larger than both ends. Throws after
/// max_expand doublings (non-coercive input).
template <class F>
std::array<double, 2> bracket_valley(F&& f, double centre, double step0,
                                     int max_expand = 60) {
  double c = centre;
  double s = std::max(step0, 1e-8);
  double fc = f(c);
  for (int k = 0; k < max_expand; ++k) {
    const double fl = f(c - s);
    const double fr = f(c + s);
    if (fc <= fl && fc <= fr) return {c - s, c + s};
    if (fl < fr) {
      c -= s;
      fc = fl;
    } else {
      c += s;
      fc = fr;
    }
    s *= 2.0;
  }
  throw Error("bracket search exceeded " + std::to_string(max_expand) +
              " doublings; objective does not look coercive");
}

}  // namespace minsum

#endif
