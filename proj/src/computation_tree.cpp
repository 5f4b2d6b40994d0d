#include "minsum/computation_tree.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "minsum/optimize1d.hpp"
#include "minsum/quadratic_minsum.hpp"

namespace minsum {

std::size_t projected_tree_nodes(const Graph& g, int root, int t,
                                 std::size_t cap) {
  if (t < 1) throw Error("projected_tree_nodes: t must be >= 1");
  if (root < 0 || root >= g.n) throw Error("projected_tree_nodes: bad root");
  const int levels = t - 1;
  // count per (sigma, parent-sigma) class per level; degrees fix the rest
  std::map<std::pair<int, int>, std::size_t> level{{{root, -1}, 1}};
  std::size_t total = 1;
  for (int d = 0; d < levels && total <= cap; ++d) {
    std::map<std::pair<int, int>, std::size_t> next;
    for (const auto& [key, count] : level) {
      const auto [sigma, psigma] = key;
      for (int u : g.adj[sigma]) {
        if (u == psigma) continue;
        next[{u, sigma}] += count;
        total += count;
        if (total > cap) return total;
      }
    }
    level = std::move(next);
  }
  return total;
}

ComputationTree build_tree(const Graph& g, int root, int t,
                           std::size_t max_nodes) {
  if (t < 1) throw Error("build_tree: t must be >= 1");
  if (root < 0 || root >= g.n) throw Error("build_tree: bad root");
  const std::size_t projected = projected_tree_nodes(g, root, t, max_nodes);
  if (projected > max_nodes) throw TreeSizeError(projected, max_nodes);

  ComputationTree tree;
  tree.root = root;
  tree.t = t;
  tree.nodes.push_back({root, -1, 0, -1});
  const int levels = t - 1;
  std::size_t frontier_begin = 0;
  for (int d = 0; d < levels; ++d) {
    const std::size_t frontier_end = tree.nodes.size();
    for (std::size_t k = frontier_begin; k < frontier_end; ++k) {
      const int sigma = tree.nodes[k].sigma;
      const int psigma =
          tree.nodes[k].parent >= 0 ? tree.nodes[tree.nodes[k].parent].sigma : -1;
      for (std::size_t a = 0; a < g.adj[sigma].size(); ++a) {
        const int u = g.adj[sigma][a];
        if (u == psigma) continue;
        tree.nodes.push_back({u, static_cast<int>(k), d + 1,
                              g.adj_edge[sigma][a]});
      }
    }
    frontier_begin = frontier_end;
  }
  tree.children.assign(tree.nodes.size(), {});
  for (std::size_t k = 1; k < tree.nodes.size(); ++k)
    tree.children[tree.nodes[k].parent].push_back(static_cast<int>(k));
  return tree;
}

namespace {

/// Neighbours of sigma(k) whose initial messages are absorbed at node k:
/// everything not represented by the parent or a child. Empty for interior
/// nodes by construction.
std::vector<int> absorbed_neighbours(const Graph& g, const ComputationTree& tree,
                                     int k) {
  const int sigma = tree.nodes[k].sigma;
  const int psigma =
      tree.nodes[k].parent >= 0 ? tree.nodes[tree.nodes[k].parent].sigma : -1;
  std::vector<int> covered;
  for (int c : tree.children[k]) covered.push_back(tree.nodes[c].sigma);
  std::vector<int> out;
  for (int u : g.adj[sigma]) {
    if (u == psigma) continue;
    bool is_child = false;
    for (int c : covered)
      if (c == u) is_child = true;
    if (!is_child) out.push_back(u);
  }
  return out;
}

}  // namespace

std::vector<double> solve_tree_quadratic(const QuadraticProblem& q,
                                         const InitialMessages& init,
                                         const ComputationTree& tree) {
  const std::size_t m = tree.nodes.size();
  std::vector<double> eff_a(m), eff_b(m);
  for (std::size_t k = 0; k < m; ++k) {
    const int sigma = tree.nodes[k].sigma;
    eff_a[k] = q.diag[sigma];
    eff_b[k] = q.b[sigma];
    for (int u : absorbed_neighbours(q.graph, tree, k)) {
      eff_a[k] += init.alpha_q(q, u, sigma);
      eff_b[k] += init.beta_q(q, u, sigma);
    }
  }
  // upward elimination (children precede parents in reverse BFS order)
  for (std::size_t k = m; k-- > 1;) {
    if (!(eff_a[k] > 0))
      throw Error("solve_tree_quadratic: non-positive pivot " +
                  std::to_string(eff_a[k]) + " at tree node " + std::to_string(k));
    const int p = tree.nodes[k].parent;
    const double c = q.offdiag[tree.nodes[k].edge];
    eff_a[p] -= c * c / eff_a[k];
    eff_b[p] -= c * eff_b[k] / eff_a[k];
  }
  if (!(eff_a[0] > 0))
    throw Error("solve_tree_quadratic: non-positive pivot at the root");
  // downward substitution
  std::vector<double> x(m);
  x[0] = eff_b[0] / eff_a[0];
  for (std::size_t k = 1; k < m; ++k) {
    const int p = tree.nodes[k].parent;
    const double c = q.offdiag[tree.nodes[k].edge];
    x[k] = (eff_b[k] - c * x[p]) / eff_a[k];
  }
  return x;
}

namespace {

struct GeneralTreeSolver {
  const PairwiseObjective& obj;
  const InitialMessages& init;
  const ComputationTree& tree;
  double xtol;

  double node_term(int k, double y) const {
    const int sigma = tree.nodes[k].sigma;
    double v = obj.node_factors[sigma].value(y);
    for (int u : absorbed_neighbours(obj.graph, tree, k))
      v += init.value(obj, u, sigma, y);
    return v;
  }

  double edge_term(int k, double xp, double y) const {
    // factor between sigma(k) and its parent's sigma, child variable y
    const int e = tree.nodes[k].edge;
    const int psigma = tree.nodes[tree.nodes[k].parent].sigma;
    return obj.oriented(e, psigma).value(xp, y);
  }

  /// min over x_k of the subtree objective, parent coordinate fixed.
  Min1D subtree_min(int k, double xp) const {
    const auto f = [&](double y) {
      double v = node_term(k, y) + edge_term(k, xp, y);
      for (int c : tree.children[k]) v += subtree_min(c, y).value;
      return v;
    };
    const auto br = bracket_valley(f, init.x0_at(tree.nodes[k].sigma), 1.0);
    const auto r = brent_min(f, br[0], br[1], xtol);
    if (!r.converged)
      throw Error("solve_tree_general: inner 1-D minimisation did not converge");
    return r;
  }
};

}  // namespace

std::vector<double> solve_tree_general(const PairwiseObjective& obj,
                                       const InitialMessages& init,
                                       const ComputationTree& tree,
                                       double xtol) {
  int max_depth = 0;
  for (const auto& nd : tree.nodes) max_depth = std::max(max_depth, nd.depth);
  if (max_depth > 3)
    throw Error("solve_tree_general: nested minimisation supports at most 3 "
                "levels (tree has " + std::to_string(max_depth) + ")");

  GeneralTreeSolver solver{obj, init, tree, xtol};
  const auto froot = [&](double y) {
    double v = solver.node_term(0, y);
    for (int c : tree.children[0]) v += solver.subtree_min(c, y).value;
    return v;
  };
  const auto br = bracket_valley(froot, init.x0_at(tree.root), 1.0);
  const auto r = brent_min(froot, br[0], br[1], xtol);
  if (!r.converged)
    throw Error("solve_tree_general: root minimisation did not converge");

  std::vector<double> x(tree.nodes.size());
  x[0] = r.x;
  for (std::size_t k = 1; k < tree.nodes.size(); ++k)
    x[k] = solver.subtree_min(static_cast<int>(k), x[tree.nodes[k].parent]).x;
  return x;
}

KeyPropertyResult key_property_quadratic(const QuadraticProblem& q,
                                         const InitialMessages& init, int root,
                                         int t, std::size_t max_nodes) {
  QuadraticRunOptions opts;
  opts.t_max = t;
  opts.tol = 0.0;
  const auto run = run_quadratic(q, init, opts);
  const auto tree = build_tree(q.graph, root, t, max_nodes);
  const auto tx = solve_tree_quadratic(q, init, tree);
  KeyPropertyResult res;
  res.x_root_tree = tx[0];
  res.x_root_loopy = run.trace.last().x[root];
  res.diff = std::fabs(res.x_root_tree - res.x_root_loopy);
  res.tree_nodes = tree.nodes.size();
  return res;
}

KeyPropertyResult key_property_general(const PairwiseObjective& obj,
                                       const InitialMessages& init, int root,
                                       int t, const GridConfig& grid,
                                       std::size_t max_nodes) {
  GeneralRunOptions opts;
  opts.t_max = t;
  opts.tol = 0.0;
  opts.grid = grid;
  const auto run = run_general(obj, init, opts);
  const auto tree = build_tree(obj.graph, root, t, max_nodes);
  const auto tx = solve_tree_general(obj, init, tree);
  KeyPropertyResult res;
  res.x_root_tree = tx[0];
  res.x_root_loopy = run.trace.last().x[root];
  res.diff = std::fabs(res.x_root_tree - res.x_root_loopy);
  res.tree_nodes = tree.nodes.size();
  return res;
}

}  // namespace minsum
