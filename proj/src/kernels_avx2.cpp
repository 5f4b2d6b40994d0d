#include "minsum/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>
#include <limits>

// AVX2 variants. No FMA is used: each multiply-add stays a separate mul and
// add so results are bit-identical to the scalar reference kernels.

namespace minsum::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

void add_inplace_avx2(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_loadu_pd(dst + i);
    const __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, s));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

void eval_quadratic_avx2(double* out, const double* x, std::size_t n,
                         double a, double b) {
  const double ha = 0.5 * a;
  const __m256d vha = _mm256_set1_pd(ha);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d t = _mm256_mul_pd(vx, vx);
    const __m256d r = _mm256_sub_pd(_mm256_mul_pd(vha, t), _mm256_mul_pd(vb, vx));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) {
    const double t = x[i] * x[i];
    out[i] = ha * t - b * x[i];
  }
}

void eval_quartic_avx2(double* out, const double* x, std::size_t n,
                       double c, double b) {
  const double hc = 0.5 * c;
  const __m256d vq = _mm256_set1_pd(0.25);
  const __m256d vhc = _mm256_set1_pd(hc);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d t2 = _mm256_mul_pd(vx, vx);
    const __m256d q = _mm256_mul_pd(vq, _mm256_mul_pd(t2, t2));
    const __m256d r = _mm256_add_pd(q, _mm256_mul_pd(vhc, t2));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(r, _mm256_mul_pd(vb, vx)));
  }
  for (; i < n; ++i) {
    const double t2 = x[i] * x[i];
    const double q = 0.25 * (t2 * t2);
    out[i] = (q + hc * t2) - b * x[i];
  }
}

// No vector transcendentals here; the scalar kernel is already the exact
// semantics wanted, so the table reuses it.
void eval_logcosh_avx2(double* out, const double* x, std::size_t n,
                       double s, double c, double b) {
  scalar().eval_logcosh(out, x, n, s, c, b);
}

ArgMin scaled_argmin_avx2(const double* vals, const double* xs, double slope,
                          std::size_t n) {
  const __m256d vslope = _mm256_set1_pd(slope);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256i bidx = _mm256_set1_epi64x(0);
  __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i step = _mm256_set1_epi64x(4);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(vals + i),
                                    _mm256_mul_pd(vslope, _mm256_loadu_pd(xs + i)));
    const __m256d lt = _mm256_cmp_pd(v, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, v, lt);
    bidx = _mm256_castpd_si256(_mm256_blendv_pd(
        _mm256_castsi256_pd(bidx), _mm256_castsi256_pd(idx), lt));
    idx = _mm256_add_epi64(idx, step);
  }

  alignas(32) double lane_val[4];
  alignas(32) std::int64_t lane_idx[4];
  _mm256_store_pd(lane_val, best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), bidx);

  ArgMin out{std::numeric_limits<double>::infinity(), -1};
  for (int k = 0; k < 4; ++k) {
    if (lane_val[k] < out.value ||
        (lane_val[k] == out.value && out.index >= 0 && lane_idx[k] < out.index)) {
      out.value = lane_val[k];
      out.index = lane_idx[k];
    }
  }
  for (; i < n; ++i) {
    const double v = vals[i] + slope * xs[i];
    if (v < out.value) {
      out.value = v;
      out.index = static_cast<std::int64_t>(i);
    }
  }
  return out;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vmax = _mm256_max_pd(vmax, abs_pd(d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double m = 0.0;
  for (int k = 0; k < 4; ++k)
    if (lanes[k] > m) m = lanes[k];
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

double max_weighted_abs_diff_avx2(const double* a, const double* b,
                                  const double* w, std::size_t n) {
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d q = _mm256_div_pd(abs_pd(d), _mm256_loadu_pd(w + i));
    vmax = _mm256_max_pd(vmax, q);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double m = 0.0;
  for (int k = 0; k < 4; ++k)
    if (lanes[k] > m) m = lanes[k];
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]) / w[i];
    if (d > m) m = d;
  }
  return m;
}

}  // namespace

const Table* avx2_table_impl() {
  static const Table table{
      "avx2",
      add_inplace_avx2,
      eval_quadratic_avx2,
      eval_quartic_avx2,
      eval_logcosh_avx2,
      scaled_argmin_avx2,
      max_abs_diff_avx2,
      max_weighted_abs_diff_avx2,
  };
  return &table;
}

}  // namespace minsum::kernels

#endif  // x86_64
