#ifndef MINSUM_KERNELS_HPP
#define MINSUM_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the grid message path and the trace
// reductions. Every operation has a scalar reference implementation and
// (on x86-64) an AVX2 variant; the two are written with identical operation
// order so equivalence tests can compare them bit for bit. Which table runs
// is decided once at startup (cpuid + MINSUM_KERNELS env override).

namespace minsum::kernels {

struct ArgMin {
  double value;
  std::int64_t index;  // first index attaining the minimum
};

struct Table {
  const char* name;
  // dst[i] += src[i]
  void (*add_inplace)(double* dst, const double* src, std::size_t n);
  // out[i] = 0.5*a*x^2 - b*x
  void (*eval_quadratic)(double* out, const double* x, std::size_t n,
                         double a, double b);
  // out[i] = x^4/4 + c*x^2/2 - b*x
  void (*eval_quartic)(double* out, const double* x, std::size_t n,
                       double c, double b);
  // out[i] = s*log(cosh(x)) + c*x^2/2 - b*x, overflow-safe
  void (*eval_logcosh)(double* out, const double* x, std::size_t n,
                       double s, double c, double b);
  // argmin_i of vals[i] + slope*xs[i]; ties resolve to the lowest index
  ArgMin (*scaled_argmin)(const double* vals, const double* xs, double slope,
                          std::size_t n);
  // max_i |a[i] - b[i]|
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  // max_i |a[i] - b[i]| / w[i]
  double (*max_weighted_abs_diff)(const double* a, const double* b,
                                  const double* w, std::size_t n);
};

const Table& scalar();

/// AVX2 table, or nullptr when the build or the CPU lacks AVX2.
const Table* avx2();

/// Runtime-selected table. Honours MINSUM_KERNELS={auto,scalar,avx2}.
const Table& active();

/// Test hook: force a specific table; nullptr restores auto selection.
void select(const Table* table);

}  // namespace minsum::kernels

#endif
