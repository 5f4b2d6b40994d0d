#include "minsum/kernels.hpp"

#include <cmath>
#include <limits>

// Reference kernels. Operation order matches the AVX2 variants exactly
// (this file is compiled with -ffp-contract=off so the compiler cannot
// fuse the multiply-adds that AVX2 keeps separate).

namespace minsum::kernels {
namespace {

void add_inplace_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void eval_quadratic_scalar(double* out, const double* x, std::size_t n,
                           double a, double b) {
  const double ha = 0.5 * a;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x[i] * x[i];
    out[i] = ha * t - b * x[i];
  }
}

void eval_quartic_scalar(double* out, const double* x, std::size_t n,
                         double c, double b) {
  const double hc = 0.5 * c;
  for (std::size_t i = 0; i < n; ++i) {
    const double t2 = x[i] * x[i];
    const double q = 0.25 * (t2 * t2);
    out[i] = (q + hc * t2) - b * x[i];
  }
}

// log(cosh(x)) = |x| + log1p(exp(-2|x|)) - log(2); stable for any x.
void eval_logcosh_scalar(double* out, const double* x, std::size_t n,
                         double s, double c, double b) {
  const double hc = 0.5 * c;
  const double ln2 = 0.6931471805599453094;
  for (std::size_t i = 0; i < n; ++i) {
    const double ax = std::fabs(x[i]);
    const double lc = ax + std::log1p(std::exp(-2.0 * ax)) - ln2;
    out[i] = (s * lc + hc * (x[i] * x[i])) - b * x[i];
  }
}

ArgMin scaled_argmin_scalar(const double* vals, const double* xs, double slope,
                            std::size_t n) {
  ArgMin best{std::numeric_limits<double>::infinity(), -1};
  for (std::size_t i = 0; i < n; ++i) {
    const double v = vals[i] + slope * xs[i];
    if (v < best.value) {
      best.value = v;
      best.index = static_cast<std::int64_t>(i);
    }
  }
  return best;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

double max_weighted_abs_diff_scalar(const double* a, const double* b,
                                    const double* w, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]) / w[i];
    if (d > m) m = d;
  }
  return m;
}

}  // namespace

const Table& scalar() {
  static const Table table{
      "scalar",
      add_inplace_scalar,
      eval_quadratic_scalar,
      eval_quartic_scalar,
      eval_logcosh_scalar,
      scaled_argmin_scalar,
      max_abs_diff_scalar,
      max_weighted_abs_diff_scalar,
  };
  return table;
}

}  // namespace minsum::kernels
