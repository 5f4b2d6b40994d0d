#include <doctest.h>

#include <cmath>

#include "minsum/problem_io.hpp"
#include "minsum/reference.hpp"
#include "test_util.hpp"

using namespace minsum;
using namespace minsum::testutil;

TEST_CASE("direct solve on the running examples") {
  const auto x = solve_quadratic_direct(two_node());
  CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));

  const auto diag = QuadraticProblem::build(Graph::build(3, {}), {2, 4, 8}, {},
                                            {1, 1, -4});
  const auto xd = solve_quadratic_direct(diag);
  CHECK(xd[0] == doctest::Approx(0.5));
  CHECK(xd[1] == doctest::Approx(0.25));
  CHECK(xd[2] == doctest::Approx(-0.5));

  const auto xc = solve_quadratic_direct(three_cycle());
  for (double v : xc) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("direct solve residual contract and failure detection") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto q = generate_random_sdd(40, 4, 0.9, seed);
    const auto x = solve_quadratic_direct(q);
    double bmax = 0;
    for (double v : q.b) bmax = std::max(bmax, std::fabs(v));
    CHECK(q.residual_inf(x) <= 1e-10 * (1.0 + bmax));
  }
  // indefinite matrix: diagonal 1, off-diagonal 2
  const auto bad = QuadraticProblem::build(Graph::build(2, {{0, 1}}), {1, 1},
                                           {2.0}, {0, 0});
  CHECK_THROWS_AS(solve_quadratic_direct(bad), Error);
}

TEST_CASE("newton on quadratic objectives matches the direct solve") {
  const auto q = two_node();
  const auto obj = q.to_pairwise();
  const auto xn = solve_general_newton(obj, {5.0, -7.0});
  const auto xd = solve_quadratic_direct(q);
  CHECK(std::fabs(xn[0] - xd[0]) <= 1e-10);
  CHECK(std::fabs(xn[1] - xd[1]) <= 1e-10);

  // one Newton step suffices from any start on a quadratic
  NewtonOptions tight;
  tight.max_iterations = 2;
  CHECK_NOTHROW(solve_general_newton(obj, {100.0, -250.0}, tight));
}

TEST_CASE("isolated quartic node against a bisection oracle") {
  // minimiser of x^4/4 + x^2/2 - 30x solves x^3 + x = 30 (root exactly 3)
  const auto obj = PairwiseObjective::build(
      Graph::build(1, {}), {ScalarFactor::quartic(1.0, 30.0)}, {});
  const auto x = solve_general_newton(obj, {0.0});

  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid + mid < 30.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  CHECK(root == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(x[0] == doctest::Approx(root).epsilon(1e-9));
}

TEST_CASE("zero-gradient start returns immediately") {
  const auto q = two_node();
  const auto obj = q.to_pairwise();
  const auto x_star = solve_quadratic_direct(q);
  NewtonOptions opts;
  opts.max_iterations = 1;  // no step budget: must already be converged
  const auto x = solve_general_newton(obj, x_star, opts);
  CHECK(x[0] == doctest::Approx(x_star[0]));
}

TEST_CASE("returned minimiser beats random perturbations") {
  const auto obj = quartic_cycle();
  const auto x = solve_general_newton(obj, {});
  CHECK(obj.gradient_inf(x) <= 1e-10);
  const double fstar = obj.value(x);
  Rng rng(12);
  for (int k = 0; k < 1000; ++k) {
    auto y = x;
    double norm = 0;
    std::vector<double> delta(y.size());
    for (auto& d : delta) {
      d = rng.uniform(-1, 1);
      norm += d * d;
    }
    norm = std::sqrt(norm);
    const double scale = rng.uniform(0.0, 0.1) / (norm > 0 ? norm : 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += scale * delta[i];
    CHECK(obj.value(y) >= fstar - 1e-12);
  }
}
