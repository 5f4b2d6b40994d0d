#include <doctest.h>

#include <cmath>
#include <vector>

#include "minsum/common.hpp"
#include "minsum/kernels.hpp"

using namespace minsum;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  const auto& k = kernels::scalar();
  Rng rng(7);
  const auto x = random_vec(rng, 37, -3, 3);

  std::vector<double> out(x.size());
  k.eval_quadratic(out.data(), x.data(), x.size(), 2.0, 0.5);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(out[i] == doctest::Approx(0.5 * 2.0 * x[i] * x[i] - 0.5 * x[i]).epsilon(1e-14));

  k.eval_quartic(out.data(), x.data(), x.size(), 1.5, -0.25);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(out[i] == doctest::Approx(0.25 * std::pow(x[i], 4) + 0.75 * x[i] * x[i] +
                                    0.25 * x[i])
                        .epsilon(1e-13));

  k.eval_logcosh(out.data(), x.data(), x.size(), 1.2, 0.3, 0.1);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(out[i] == doctest::Approx(1.2 * std::log(std::cosh(x[i])) +
                                    0.15 * x[i] * x[i] - 0.1 * x[i])
                        .epsilon(1e-12));

  // overflow-safe far from zero
  double big = 800.0, val;
  k.eval_logcosh(&val, &big, 1, 1.0, 0.0, 0.0);
  CHECK(std::isfinite(val));
  CHECK(val == doctest::Approx(800.0 - std::log(2.0)).epsilon(1e-12));

  auto dst = random_vec(rng, 37, -1, 1);
  const auto dst_before = dst;
  const auto src = random_vec(rng, 37, -1, 1);
  k.add_inplace(dst.data(), src.data(), dst.size());
  for (std::size_t i = 0; i < dst.size(); ++i)
    CHECK(dst[i] == dst_before[i] + src[i]);

  const auto vals = random_vec(rng, 53, -2, 2);
  const auto xs = random_vec(rng, 53, -2, 2);
  const auto am = k.scaled_argmin(vals.data(), xs.data(), 0.7, vals.size());
  double best = kInf;
  std::int64_t best_i = -1;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = vals[i] + 0.7 * xs[i];
    if (v < best) {
      best = v;
      best_i = static_cast<std::int64_t>(i);
    }
  }
  CHECK(am.index == best_i);
  CHECK(am.value == best);

  const auto a = random_vec(rng, 41, -2, 2);
  const auto b = random_vec(rng, 41, -2, 2);
  const auto w = random_vec(rng, 41, 0.5, 2.0);
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m1 = std::max(m1, std::fabs(a[i] - b[i]));
    m2 = std::max(m2, std::fabs(a[i] - b[i]) / w[i]);
  }
  CHECK(k.max_abs_diff(a.data(), b.data(), a.size()) == m1);
  CHECK(k.max_weighted_abs_diff(a.data(), b.data(), w.data(), a.size()) == m2);
}

TEST_CASE("argmin tie-break picks the first index") {
  const auto& k = kernels::scalar();
  // duplicate minima straddling a lane boundary
  std::vector<double> vals{3, 1, 4, 1, 1, 5, 1, 2, 9};
  std::vector<double> xs(vals.size(), 0.0);
  const auto am = k.scaled_argmin(vals.data(), xs.data(), 0.0, vals.size());
  CHECK(am.index == 1);
  CHECK(am.value == 1.0);
  if (const auto* avx = kernels::avx2()) {
    const auto am2 = avx->scaled_argmin(vals.data(), xs.data(), 0.0, vals.size());
    CHECK(am2.index == 1);
    CHECK(am2.value == 1.0);
  }
}

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  const auto* avx = kernels::avx2();
  if (avx == nullptr) {
    MESSAGE("AVX2 not available on this host; dispatch falls back to scalar");
    return;
  }
  const auto& ref = kernels::scalar();
  Rng rng(42);
  // sizes straddling the vector width, including tails and tiny arrays
  for (const std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 65u, 1025u}) {
    const auto x = random_vec(rng, n, -4, 4);
    std::vector<double> r1(n), r2(n);

    ref.eval_quadratic(r1.data(), x.data(), n, 2.3, -0.7);
    avx->eval_quadratic(r2.data(), x.data(), n, 2.3, -0.7);
    CHECK(r1 == r2);

    ref.eval_quartic(r1.data(), x.data(), n, 0.9, 1.7);
    avx->eval_quartic(r2.data(), x.data(), n, 0.9, 1.7);
    CHECK(r1 == r2);

    auto d1 = random_vec(rng, n, -1, 1);
    auto d2 = d1;
    const auto src = random_vec(rng, n, -1, 1);
    ref.add_inplace(d1.data(), src.data(), n);
    avx->add_inplace(d2.data(), src.data(), n);
    CHECK(d1 == d2);

    const auto vals = random_vec(rng, n, -2, 2);
    const auto am1 = ref.scaled_argmin(vals.data(), x.data(), -0.4, n);
    const auto am2 = avx->scaled_argmin(vals.data(), x.data(), -0.4, n);
    CHECK(am1.index == am2.index);
    CHECK(am1.value == am2.value);

    const auto b = random_vec(rng, n, -2, 2);
    CHECK(ref.max_abs_diff(vals.data(), b.data(), n) ==
          avx->max_abs_diff(vals.data(), b.data(), n));
    const auto w = random_vec(rng, n, 0.25, 4.0);
    CHECK(ref.max_weighted_abs_diff(vals.data(), b.data(), w.data(), n) ==
          avx->max_weighted_abs_diff(vals.data(), b.data(), w.data(), n));
  }
}

TEST_CASE("kernel table selection hook") {
  const auto& before = kernels::active();
  kernels::select(&kernels::scalar());
  CHECK(std::string(kernels::active().name) == "scalar");
  kernels::select(nullptr);
  CHECK(&kernels::active() == &before);
}
