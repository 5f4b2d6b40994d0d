#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "minsum/dominance.hpp"
#include "minsum/problem_io.hpp"
#include "minsum/quadratic_minsum.hpp"
#include "minsum/reference.hpp"
#include "test_util.hpp"

using namespace minsum;
using namespace minsum::testutil;

TEST_CASE("initial messages from x0") {
  const auto q = two_node();
  const auto zero = init_messages_quadratic(q, InitialMessages::zero(2));
  CHECK(zero.alpha == std::vector<double>{0.0, 0.0});
  CHECK(zero.beta == std::vector<double>{0.0, 0.0});

  const auto s = init_messages_quadratic(q, InitialMessages::from_x0({1.0, 0.0}));
  // beta_{1->2} = -a_21 * x0_1 = -1; beta_{2->1} = 0
  CHECK(s.beta[q.graph.directed(0, 1)] == doctest::Approx(-1.0));
  CHECK(s.beta[q.graph.directed(1, 0)] == 0.0);
  CHECK(s.x == std::vector<double>{1.0, 0.0});
}

TEST_CASE("explicit initial alpha validated against the rho bound") {
  const auto q = two_node();
  RhoWitness wit{0.6, 0.5, {1.0, 1.0}};
  // alpha0 = -rho |a_21| = -0.6 is admissible (rho < 1/lambda = 2)
  const auto ok = InitialMessages::quadratic_affine({-0.6, -0.6}, {0.0, 0.0}, wit);
  CHECK_NOTHROW(init_messages_quadratic(q, ok));
  const auto bad = InitialMessages::quadratic_affine({-0.61, 0.0}, {0.0, 0.0}, wit);
  CHECK_THROWS_AS(init_messages_quadratic(q, bad), Error);
  RhoWitness too_big{2.1, 0.5, {1.0, 1.0}};  // rho >= 1/lambda
  const auto bad_rho = InitialMessages::quadratic_affine({0.0, 0.0}, {0.0, 0.0}, too_big);
  CHECK_THROWS_AS(init_messages_quadratic(q, bad_rho), Error);
}

TEST_CASE("two-node recursion by hand") {
  const auto q = two_node();
  const auto s0 = init_messages_quadratic(q, InitialMessages::zero(2));

  const auto s1 = update_messages_quadratic(q, s0);
  const int d01 = q.graph.directed(0, 1), d10 = q.graph.directed(1, 0);
  CHECK(s1.alpha[d01] == doctest::Approx(-0.5));
  CHECK(s1.alpha[d10] == doctest::Approx(-0.5));
  CHECK(s1.beta[d01] == doctest::Approx(-0.5));
  CHECK(s1.beta[d10] == 0.0);
  CHECK(s1.x[0] == doctest::Approx(0.5));
  CHECK(s1.x[1] == 0.0);

  const auto s2 = update_messages_quadratic(q, s1);
  CHECK(s2.x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s2.x[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("three-cycle recursion by hand") {
  const auto q = three_cycle();
  auto s = init_messages_quadratic(q, InitialMessages::zero(3));
  s = update_messages_quadratic(q, s);
  for (double v : s.x) CHECK(v == doctest::Approx(0.5));
  s = update_messages_quadratic(q, s);
  for (double v : s.x) CHECK(v == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("run terminates at the documented iterations") {
  const auto q = two_node();
  QuadraticRunOptions opts;
  opts.t_max = 60;
  opts.tol = 1e-12;
  const auto run = run_quadratic(q, InitialMessages::zero(2), opts);
  CHECK(run.trace.converged);
  CHECK(run.trace.last().t == 3);
  CHECK(run.trace.last().x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(run.trace.last().x[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));

  // diagonal problem: x^(1) = b_i / a_ii, stationary at t = 2
  const auto diag = QuadraticProblem::build(Graph::build(3, {}), {2, 4, 5}, {},
                                            {1, 2, -10});
  const auto drun = run_quadratic(diag, InitialMessages::zero(3), opts);
  CHECK(drun.trace.converged);
  CHECK(drun.trace.last().t == 2);
  CHECK(drun.trace.rows[1].x[0] == doctest::Approx(0.5));
  CHECK(drun.trace.rows[1].x[2] == doctest::Approx(-2.0));
}

TEST_CASE("three-cycle converges to the direct solve") {
  const auto q = three_cycle();
  const auto x_star = solve_quadratic_direct(q);
  for (double v : x_star) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  QuadraticRunOptions opts;
  opts.t_max = 60;
  opts.tol = 0.0;
  opts.x_star = &x_star;
  const auto run = run_quadratic(q, InitialMessages::zero(3), opts);
  double prev = kInf;
  for (const auto& row : run.trace.rows) {
    if (row.t == 0) continue;
    CHECK(row.err_weighted <= prev + 1e-15);
    prev = row.err_weighted;
  }
  CHECK(run.trace.last().err_weighted <= 1e-12);
}

TEST_CASE("fixed point satisfies the normal equations") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto q = generate_loopy_sdd(12, 4, 0.7, seed);
    QuadraticRunOptions opts;
    opts.t_max = 200;
    opts.tol = 1e-14;
    const auto run = run_quadratic(q, InitialMessages::zero(q.n()), opts);
    CHECK(run.trace.converged);
    double bmax = 0;
    for (double v : q.b) bmax = std::max(bmax, std::fabs(v));
    CHECK(run.trace.last().residual_inf <= 1e-9 * std::max(1.0, bmax));
  }
}

TEST_CASE("message invariants hold under a valid certificate") {
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    const auto q = generate_loopy_sdd(10, 3, 0.85, seed);
    const auto cert = std::get<DominanceCertificate>(certify_quadratic(q));
    QuadraticRunOptions opts;
    opts.t_max = 40;
    opts.tol = 0.0;
    opts.cert = &cert;
    const auto run = run_quadratic(q, InitialMessages::zero(q.n()), opts);
    CHECK(run.invariants_ok);
    CHECK(run.alpha_max < 0.0);
  }
}

TEST_CASE("permutation equivariance of the iterates") {
  const auto q = generate_loopy_sdd(9, 3, 0.75, 33);
  const int n = q.n();
  Rng rng(8);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);

  std::vector<std::array<int, 2>> pedges;
  std::vector<double> poff;
  for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
    pedges.push_back({perm[q.graph.edges[e][0]], perm[q.graph.edges[e][1]]});
    poff.push_back(q.offdiag[e]);
  }
  // re-canonicalise: Graph::build sorts, so rebuild the value arrays keyed
  // by the sorted pair
  std::vector<double> pdiag(n), pb(n);
  for (int i = 0; i < n; ++i) {
    pdiag[perm[i]] = q.diag[i];
    pb[perm[i]] = q.b[i];
  }
  Graph pg = Graph::build(n, pedges);
  std::vector<double> poff_sorted(pg.edge_count());
  for (std::size_t e = 0; e < pedges.size(); ++e) {
    auto key = pedges[e];
    if (key[0] > key[1]) std::swap(key[0], key[1]);
    poff_sorted[pg.edge_between(key[0], key[1])] = poff[e];
  }
  const auto pq = QuadraticProblem::build(pg, pdiag, poff_sorted, pb);

  QuadraticRunOptions opts;
  opts.t_max = 25;
  opts.tol = 0.0;
  const auto r1 = run_quadratic(q, InitialMessages::zero(n), opts);
  const auto r2 = run_quadratic(pq, InitialMessages::zero(n), opts);
  REQUIRE(r1.trace.rows.size() == r2.trace.rows.size());
  for (std::size_t row = 0; row < r1.trace.rows.size(); ++row)
    for (int i = 0; i < n; ++i)
      CHECK(r1.trace.rows[row].x[i] ==
            doctest::Approx(r2.trace.rows[row].x[perm[i]]).epsilon(1e-12));
}

TEST_CASE("non-dominant input aborts with a located edge or converges") {
  const auto q = refuted_3x3();
  QuadraticRunOptions opts;
  opts.t_max = 100;
  opts.tol = 1e-12;
  try {
    const auto run = run_quadratic(q, InitialMessages::zero(3), opts);
    for (double v : run.trace.last().x) CHECK(std::isfinite(v));
  } catch (const WellPosednessError& err) {
    CHECK(err.from >= 0);
    CHECK(err.from < 3);
    CHECK(err.iteration > 0);
    CHECK(err.value <= 0.0);
  }
}
