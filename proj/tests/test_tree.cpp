#include <doctest.h>

#include <cmath>
#include <map>

#include "minsum/computation_tree.hpp"
#include "minsum/problem_io.hpp"
#include "minsum/quadratic_minsum.hpp"
#include "test_util.hpp"

using namespace minsum;
using namespace minsum::testutil;

namespace {

std::map<int, int> level_sizes(const ComputationTree& tree) {
  std::map<int, int> sizes;
  for (const auto& nd : tree.nodes) sizes[nd.depth]++;
  return sizes;
}

}  // namespace

TEST_CASE("two-node chain unrolls to the path itself") {
  const auto q = two_node();
  const auto tree = build_tree(q.graph, 0, 2);
  REQUIRE(tree.nodes.size() == 2);
  CHECK(tree.nodes[0].sigma == 0);
  CHECK(tree.nodes[1].sigma == 1);

  const auto x = solve_tree_quadratic(q, InitialMessages::zero(2), tree);
  CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // t = 1: the root alone, every neighbour's initial message absorbed
  const auto t1 = build_tree(q.graph, 0, 1);
  REQUIRE(t1.nodes.size() == 1);
  const auto x1 = solve_tree_quadratic(q, InitialMessages::zero(2), t1);
  CHECK(x1[0] == doctest::Approx(0.5));
}

TEST_CASE("five-node loopy topology level counts") {
  const Graph g = fig1_graph();
  // unrolled level sizes from the root 0: 1, 3, 3, 6, 6, ...
  const auto t5 = build_tree(g, 0, 5);
  const auto sizes = level_sizes(t5);
  CHECK(t5.nodes.size() == 19);
  CHECK(sizes.at(0) == 1);
  CHECK(sizes.at(1) == 3);
  CHECK(sizes.at(2) == 3);
  CHECK(sizes.at(3) == 6);
  CHECK(sizes.at(4) == 6);
  CHECK(build_tree(g, 0, 4).nodes.size() == 13);
  CHECK(build_tree(g, 0, 3).nodes.size() == 7);
  CHECK(projected_tree_nodes(g, 0, 5) == 19);
}

TEST_CASE("level sizes satisfy the degree recurrence") {
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const auto q = generate_loopy_sdd(9, 4, 0.8, seed);
    const auto tree = build_tree(q.graph, 2, 4);
    const auto sizes = level_sizes(tree);
    // sum over depth-d nodes of (deg(sigma) - 1); the root contributes deg
    std::map<int, long> expected{{0, 1}};
    for (int d = 0; expected.count(d) && sizes.count(d + 1); ++d) {
      long total = 0;
      for (const auto& nd : tree.nodes) {
        if (nd.depth != d) continue;
        total += q.graph.degree(nd.sigma) - (nd.parent >= 0 ? 1 : 0);
      }
      expected[d + 1] = total;
      CHECK(sizes.at(d + 1) == total);
    }
  }
}

TEST_CASE("sigma structure invariants") {
  const auto q = generate_loopy_sdd(8, 3, 0.8, 99);
  const auto tree = build_tree(q.graph, 1, 4);
  CHECK(tree.children[0].size() == static_cast<std::size_t>(q.graph.degree(1)));
  for (std::size_t k = 1; k < tree.nodes.size(); ++k) {
    const auto& nd = tree.nodes[k];
    const int psig = tree.nodes[nd.parent].sigma;
    CHECK(q.graph.edge_between(nd.sigma, psig) == nd.edge);
    CHECK(nd.depth == tree.nodes[nd.parent].depth + 1);
  }
  // interior nodes cover N(sigma) \ parent exactly
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    if (tree.children[k].empty()) continue;
    const auto& nd = tree.nodes[k];
    const int psig = nd.parent >= 0 ? tree.nodes[nd.parent].sigma : -1;
    std::size_t expected = 0;
    for (int u : q.graph.adj[nd.sigma])
      if (u != psig) ++expected;
    CHECK(tree.children[k].size() == expected);
  }
}

TEST_CASE("tree graphs unroll without duplication") {
  const auto q = generate_tree_sdd(12, 0.7, 7);
  const int diam = q.graph.diameter_edges();
  const auto tree = build_tree(q.graph, 0, diam + 2);
  CHECK(tree.nodes.size() == static_cast<std::size_t>(q.n()));  // bijective sigma
}

TEST_CASE("elimination solve matches a dense solve of the unrolled system") {
  for (std::uint64_t seed = 60; seed < 64; ++seed) {
    const auto q = generate_loopy_sdd(7, 3, 0.8, seed);
    const auto init = InitialMessages::from_x0(std::vector<double>(q.n(), 0.25));
    const auto tree = build_tree(q.graph, 0, 3);

    std::vector<int> sigma, parent, parent_edge;
    std::vector<double> aa, ab;
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      sigma.push_back(tree.nodes[k].sigma);
      parent.push_back(tree.nodes[k].parent);
      parent_edge.push_back(tree.nodes[k].edge);
      double alpha = 0, beta = 0;
      if (tree.children[k].empty()) {
        const int psig = tree.nodes[k].parent >= 0
                             ? tree.nodes[tree.nodes[k].parent].sigma
                             : -1;
        for (int u : q.graph.adj[tree.nodes[k].sigma]) {
          if (u == psig) continue;
          alpha += init.alpha_q(q, u, tree.nodes[k].sigma);
          beta += init.beta_q(q, u, tree.nodes[k].sigma);
        }
      }
      aa.push_back(alpha);
      ab.push_back(beta);
    }
    const auto dense = dense_tree_solve(q, sigma, parent, parent_edge, aa, ab);
    const auto elim = solve_tree_quadratic(q, init, tree);
    REQUIRE(dense.size() == elim.size());
    for (std::size_t k = 0; k < dense.size(); ++k)
      CHECK(elim[k] == doctest::Approx(dense[k]).epsilon(1e-10));
  }
}

TEST_CASE("key property on the three-cycle (hand values)") {
  const auto q = three_cycle();
  const auto res = key_property_quadratic(q, InitialMessages::zero(3), 0, 2);
  CHECK(res.x_root_loopy == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(res.x_root_tree == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
  CHECK(res.diff <= 1e-12);
  CHECK(res.tree_nodes == 3);

  const auto res3 = key_property_quadratic(q, InitialMessages::zero(3), 0, 3);
  CHECK(res3.x_root_tree == doctest::Approx(9.0 / 26.0).epsilon(1e-12));
  CHECK(res3.diff <= 1e-12);
}

TEST_CASE("key property across random loopy graphs, roots and iterations") {
  for (std::uint64_t seed = 70; seed < 76; ++seed) {
    const auto q = generate_loopy_sdd(8, 3, 0.85, seed);
    const auto init = seed % 2 == 0
                          ? InitialMessages::zero(q.n())
                          : InitialMessages::from_x0(
                                std::vector<double>(q.n(), -0.4));
    for (int root : {0, q.n() / 2, q.n() - 1}) {
      for (int t = 1; t <= 4; ++t) {
        if (projected_tree_nodes(q.graph, root, t) > 200000) break;
        const auto res = key_property_quadratic(q, init, root, t);
        CHECK(res.diff <= 1e-9);
      }
    }
  }
}

TEST_CASE("single-node tree minimises the node factor") {
  const auto q = QuadraticProblem::build(Graph::build(1, {}), {2.0}, {}, {1.0});
  const auto tree = build_tree(q.graph, 0, 1);
  const auto x = solve_tree_quadratic(q, InitialMessages::zero(1), tree);
  CHECK(x[0] == doctest::Approx(0.5));
}

TEST_CASE("size guardrail") {
  // complete graph on 12 nodes: rapid blowup
  std::vector<std::array<int, 2>> edges;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) edges.push_back({i, j});
  const Graph g = Graph::build(12, edges);
  CHECK(projected_tree_nodes(g, 0, 8) > 200000);
  CHECK_THROWS_AS(build_tree(g, 0, 8), TreeSizeError);
}

TEST_CASE("general tree solve agrees with the quadratic elimination") {
  const auto q = three_cycle();
  const auto obj = q.to_pairwise();
  const auto init = InitialMessages::zero(3);
  for (int t : {1, 2, 3}) {
    const auto tree = build_tree(q.graph, 0, t);
    const auto xq = solve_tree_quadratic(q, init, tree);
    const auto xg = solve_tree_general(obj, init, tree);
    CHECK(std::fabs(xq[0] - xg[0]) <= 1e-8);
  }
}

TEST_CASE("key property for the quartic cycle (grid-limited)") {
  const auto obj = quartic_cycle();
  GridConfig grid;
  const auto res = key_property_general(obj, InitialMessages::zero(3), 0, 3, grid);
  CHECK(res.diff <= 1e-5);
}
