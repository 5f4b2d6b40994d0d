#include <doctest.h>

#include <cmath>

#include "minsum/common.hpp"
#include "minsum/problem.hpp"
#include "test_util.hpp"

using namespace minsum;
using namespace minsum::testutil;

TEST_CASE("graph construction and validation") {
  const Graph g = Graph::build(4, {{2, 0}, {1, 2}, {0, 1}});
  CHECK(g.edge_count() == 3);
  CHECK(g.edges[0] == std::array<int, 2>{0, 1});  // canonicalised and sorted
  CHECK(g.degree(3) == 0);
  CHECK(g.edge_between(0, 2) >= 0);
  CHECK(g.edge_between(0, 3) == -1);
  CHECK(g.directed(0, 1) == 2 * g.edge_between(0, 1));
  CHECK(g.directed(1, 0) == 2 * g.edge_between(0, 1) + 1);

  CHECK_THROWS_AS(Graph::build(3, {{0, 0}}), Error);
  CHECK_THROWS_AS(Graph::build(3, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Graph::build(3, {{0, 3}}), Error);
}

TEST_CASE("objective evaluation on the running examples") {
  const auto q = two_node();
  CHECK(q.objective(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(q.objective(std::vector<double>{1.0, 1.0}) == doctest::Approx(2.0));

  const auto obj = q.to_pairwise();
  CHECK(obj.value(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(obj.value(std::vector<double>{1.0, 1.0}) == doctest::Approx(2.0));

  // isolated quartic node, c = 1, b = 0: x = 2 -> 2^4/4 + 2^2/2 = 6
  const auto quartic = PairwiseObjective::build(
      Graph::build(1, {}), {ScalarFactor::quartic(1.0, 0.0)}, {});
  CHECK(quartic.value(std::vector<double>{2.0}) == doctest::Approx(6.0));

  CHECK_THROWS_AS(obj.value(std::vector<double>{1.0}), Error);
}

TEST_CASE("partial hessian entries") {
  const auto q = two_node();
  const auto obj = q.to_pairwise();
  const std::vector<double> x{0.3, -0.8};
  CHECK(obj.partial_hessian(x, 0, 0) == doctest::Approx(2.0));
  CHECK(obj.partial_hessian(x, 0, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(obj.partial_hessian(x, 0, 2), Error);

  // quartic node c = 1 with one bilinear edge a = 0.3 at x_i = 2:
  // f'' = 3*4 + 1 = 13, the bilinear edge adds nothing to the diagonal
  const auto mixed = PairwiseObjective::build(
      Graph::build(2, {{0, 1}}),
      {ScalarFactor::quartic(1.0, 0.0), ScalarFactor::quadratic(1.0, 0.0)},
      {EdgeFactor::bilinear(0.3)});
  const std::vector<double> y{2.0, -1.0};
  CHECK(mixed.partial_hessian(y, 0, 0) == doctest::Approx(13.0));
  CHECK(mixed.partial_hessian(y, 0, 1) == doctest::Approx(0.3));
}

TEST_CASE("quadratic_to_pairwise reproduces the closed form") {
  const auto q = two_node();
  const auto obj = quadratic_to_pairwise(q);
  // f_1 = x^2 - x, f_2 = x^2, f_12 = x1 x2
  CHECK(obj.node_factors[0].value(1.5) == doctest::Approx(1.5 * 1.5 - 1.5));
  CHECK(obj.node_factors[1].value(1.5) == doctest::Approx(1.5 * 1.5));
  CHECK(obj.edge_factors[0].value(2.0, 3.0) == doctest::Approx(6.0));

  // both representations agree at x = [1, -1] (value 0)
  const std::vector<double> x{1.0, -1.0};
  CHECK(q.objective(x) == doctest::Approx(obj.value(x)).epsilon(1e-15));
  CHECK(q.objective(x) == doctest::Approx(0.0));

  // diagonal A -> no edge factors
  const auto diag = QuadraticProblem::build(Graph::build(3, {}), {1, 2, 3}, {},
                                            {0, 0, 0});
  CHECK(diag.to_pairwise().edge_factors.empty());

  CHECK_THROWS_AS(QuadraticProblem::build(Graph::build(2, {{0, 1}}), {1.0, 0.0},
                                          {0.5}, {0, 0}),
                  Error);
}

TEST_CASE("representation equivalence on random quadratic problems") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 20);
    std::vector<std::array<int, 2>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < 0.3) edges.push_back({i, j});
    std::vector<double> off(edges.size());
    for (auto& v : off) v = rng.uniform(-1, 1);
    std::vector<double> diag(n), b(n);
    for (auto& v : diag) v = rng.uniform(0.5, 3.0);
    for (auto& v : b) v = rng.uniform(-1, 1);
    const auto q = QuadraticProblem::build(Graph::build(n, edges), diag, off, b);
    const auto obj = q.to_pairwise();
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x(n);
      for (auto& v : x) v = rng.uniform(-5, 5);
      const double f1 = q.objective(x);
      const double f2 = obj.value(x);
      CHECK(std::fabs(f1 - f2) <= 1e-12 * (1.0 + std::fabs(f1)));
    }
  }
}

TEST_CASE("partial hessian against central finite differences") {
  Graph g = Graph::build(3, {{0, 1}, {1, 2}});
  std::vector<ScalarFactor> nodes{ScalarFactor::quartic(0.8, 0.3),
                                  ScalarFactor::logcosh(1.1, 0.4, -0.2),
                                  ScalarFactor::quadratic(2.2, 0.9)};
  std::vector<EdgeFactor> edges{EdgeFactor::bilinear(0.45),
                                EdgeFactor::bilinear(-0.3)};
  const auto obj = PairwiseObjective::build(g, nodes, edges);

  Rng rng(5);
  const double h = 1e-4;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> x(3);
    for (auto& v : x) v = rng.uniform(-2, 2);
    for (int i = 0; i < 3; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd =
          (obj.value(xp) - 2.0 * obj.value(x) + obj.value(xm)) / (h * h);
      const double exact = obj.partial_hessian(x, i, i);
      CHECK(std::fabs(fd - exact) <= 1e-5 * std::max(1.0, std::fabs(exact)));
    }
    for (const auto [i, j] : obj.graph.edges) {
      auto xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[j] += h;
      xpm[i] += h; xpm[j] -= h;
      xmp[i] -= h; xmp[j] += h;
      xmm[i] -= h; xmm[j] -= h;
      const double fd = (obj.value(xpp) - obj.value(xpm) - obj.value(xmp) +
                         obj.value(xmm)) /
                        (4.0 * h * h);
      const double exact = obj.partial_hessian(x, i, j);
      CHECK(std::fabs(fd - exact) <= 1e-5 * std::max(1.0, std::fabs(exact)));
    }
  }
}

TEST_CASE("builtin node families are coercive") {
  const ScalarFactor fams[] = {ScalarFactor::quadratic(0.7, 5.0),
                               ScalarFactor::quartic(0.2, -3.0),
                               ScalarFactor::logcosh(2.0, 0.1, 1.0)};
  for (const auto& f : fams) {
    CHECK(f.value(1e6) > f.value(0.0));
    CHECK(f.value(-1e6) > f.value(0.0));
  }
}

TEST_CASE("curvature ranges per family") {
  CHECK(ScalarFactor::quadratic(2, 0).curvature_range().lo == 2.0);
  CHECK(ScalarFactor::quadratic(2, 0).curvature_range().hi == 2.0);
  CHECK(ScalarFactor::quartic(0.5, 0).curvature_range().lo == 0.5);
  CHECK(ScalarFactor::quartic(0.5, 0).curvature_range().hi == kInf);
  CHECK(ScalarFactor::logcosh(1.5, 0.25, 0).curvature_range().lo == 0.25);
  CHECK(ScalarFactor::logcosh(1.5, 0.25, 0).curvature_range().hi ==
        doctest::Approx(1.75));
}
