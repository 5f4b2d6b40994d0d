#include "minsum/factors.hpp"

#include <cmath>

namespace minsum {

namespace {
constexpr double kLn2 = 0.6931471805599453094;

double logcosh_stable(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - kLn2;
}

double sech2(double x) {
  // 2e^{-|x|}/(1+e^{-2|x|}) squared; no overflow for large |x|.
  const double e = std::exp(-std::fabs(x));
  const double sech = 2.0 * e / (1.0 + e * e);
  return sech * sech;
}
}  // namespace

double ScalarFactor::value(double x) const {
  switch (family) {
    case NodeFamily::quadratic:
      return 0.5 * a * x * x - b * x;
    case NodeFamily::quartic:
      return 0.25 * (x * x) * (x * x) + 0.5 * c * x * x - b * x;
    case NodeFamily::logcosh:
      return s * logcosh_stable(x) + 0.5 * c * x * x - b * x;
    case NodeFamily::custom:
      return custom_f(x);
  }
  return 0;
}

double ScalarFactor::deriv(double x) const {
  switch (family) {
    case NodeFamily::quadratic:
      return a * x - b;
    case NodeFamily::quartic:
      return x * x * x + c * x - b;
    case NodeFamily::logcosh:
      return s * std::tanh(x) + c * x - b;
    case NodeFamily::custom:
      return custom_df(x);
  }
  return 0;
}

double ScalarFactor::second(double x) const {
  switch (family) {
    case NodeFamily::quadratic:
      return a;
    case NodeFamily::quartic:
      return 3.0 * x * x + c;
    case NodeFamily::logcosh:
      return s * sech2(x) + c;
    case NodeFamily::custom:
      return custom_d2f(x);
  }
  return 0;
}

CurvatureRange ScalarFactor::curvature_range() const {
  switch (family) {
    case NodeFamily::quadratic:
      return {a, a};
    case NodeFamily::quartic:
      return {c, kInf};  // 3x^2 + c
    case NodeFamily::logcosh:
      return {c, c + s};  // s*sech^2 + c; infimum approached as |x| -> inf
    case NodeFamily::custom:
      return custom_curvature;
  }
  return {0, 0};
}

double ScalarFactor::curvature_argmin(double lo, double hi) const {
  switch (family) {
    case NodeFamily::quadratic:
      return 0.5 * (lo + hi);
    case NodeFamily::quartic:
      // curvature minimal at 0 when inside the box
      return (lo <= 0 && 0 <= hi) ? 0.0 : (std::fabs(lo) < std::fabs(hi) ? lo : hi);
    case NodeFamily::logcosh:
      // sech^2 decays away from 0
      return std::fabs(lo) > std::fabs(hi) ? lo : hi;
    case NodeFamily::custom: {
      // coarse scan; adversarial sampling only, not a proof
      double best_x = lo, best = custom_d2f(lo);
      for (int k = 1; k <= 64; ++k) {
        const double x = lo + (hi - lo) * k / 64.0;
        const double v = custom_d2f(x);
        if (v < best) {
          best = v;
          best_x = x;
        }
      }
      return best_x;
    }
  }
  return lo;
}

ScalarFactor ScalarFactor::quadratic(double a, double b) {
  if (!(a > 0)) throw Error("quadratic node factor needs a > 0");
  ScalarFactor f;
  f.family = NodeFamily::quadratic;
  f.a = a;
  f.b = b;
  return f;
}

ScalarFactor ScalarFactor::quartic(double c, double b) {
  if (!(c > 0)) throw Error("quartic node factor needs c > 0");
  ScalarFactor f;
  f.family = NodeFamily::quartic;
  f.c = c;
  f.b = b;
  return f;
}

ScalarFactor ScalarFactor::logcosh(double s, double c, double b) {
  if (!(s >= 0) || !(c >= 0) || !(s + c > 0))
    throw Error("logcosh node factor needs s >= 0, c >= 0, s + c > 0");
  ScalarFactor f;
  f.family = NodeFamily::logcosh;
  f.s = s;
  f.c = c;
  f.b = b;
  return f;
}

ScalarFactor ScalarFactor::custom(std::function<double(double)> f,
                                  std::function<double(double)> df,
                                  std::function<double(double)> d2f,
                                  CurvatureRange curvature) {
  ScalarFactor r;
  r.family = NodeFamily::custom;
  r.custom_f = std::move(f);
  r.custom_df = std::move(df);
  r.custom_d2f = std::move(d2f);
  r.custom_curvature = curvature;
  return r;
}

double EdgeFactor::value(double x, double y) const {
  return family == EdgeFamily::bilinear ? a * x * y : custom_f(x, y);
}
double EdgeFactor::d1(double x, double y) const {
  return family == EdgeFamily::bilinear ? a * y : custom_d1(x, y);
}
double EdgeFactor::d2(double x, double y) const {
  return family == EdgeFamily::bilinear ? a * x : custom_d2(x, y);
}
double EdgeFactor::d11(double x, double y) const {
  return family == EdgeFamily::bilinear ? 0.0 : custom_d11(x, y);
}
double EdgeFactor::d22(double x, double y) const {
  return family == EdgeFamily::bilinear ? 0.0 : custom_d22(x, y);
}
double EdgeFactor::d12(double x, double y) const {
  return family == EdgeFamily::bilinear ? a : custom_d12(x, y);
}

double EdgeFactor::mixed_abs_sup() const {
  return family == EdgeFamily::bilinear ? std::fabs(a) : custom_mixed_abs_sup;
}
double EdgeFactor::own_curvature_min() const {
  return family == EdgeFamily::bilinear ? 0.0 : custom_own_curvature_min;
}

EdgeFactor EdgeFactor::bilinear(double a) {
  EdgeFactor f;
  f.family = EdgeFamily::bilinear;
  f.a = a;
  return f;
}

EdgeFactor EdgeFactor::custom(std::function<double(double, double)> f,
                              std::function<double(double, double)> d1,
                              std::function<double(double, double)> d2,
                              std::function<double(double, double)> d11,
                              std::function<double(double, double)> d22,
                              std::function<double(double, double)> d12,
                              double mixed_abs_sup, double own_curvature_min) {
  EdgeFactor r;
  r.family = EdgeFamily::custom;
  r.custom_f = std::move(f);
  r.custom_d1 = std::move(d1);
  r.custom_d2 = std::move(d2);
  r.custom_d11 = std::move(d11);
  r.custom_d22 = std::move(d22);
  r.custom_d12 = std::move(d12);
  r.custom_mixed_abs_sup = mixed_abs_sup;
  r.custom_own_curvature_min = own_curvature_min;
  return r;
}

std::string family_name(NodeFamily f) {
  switch (f) {
    case NodeFamily::quadratic: return "quadratic";
    case NodeFamily::quartic: return "quartic";
    case NodeFamily::logcosh: return "logcosh";
    case NodeFamily::custom: return "custom";
  }
  return "?";
}

std::string family_name(EdgeFamily f) {
  switch (f) {
    case EdgeFamily::bilinear: return "bilinear";
    case EdgeFamily::custom: return "custom";
  }
  return "?";
}

}  // namespace minsum
