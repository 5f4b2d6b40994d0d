#ifndef MINSUM_COMPUTATION_TREE_HPP
#define MINSUM_COMPUTATION_TREE_HPP

#include <cstddef>
#include <vector>

#include "minsum/general_minsum.hpp"
#include "minsum/init_messages.hpp"
#include "minsum/problem.hpp"

namespace minsum {

/// Breadth-first unrolling of the graph from a root. build_tree(r, t)
/// produces the tree whose exact minimiser's root coordinate equals the
/// iterate x_r^{(t)}: t - 1 unrolled levels below the root, with the initial
/// messages of every neighbour not represented by a child absorbed into the
/// node factor (for t = 1 the root itself absorbs all of its incoming
/// initial messages).
struct ComputationTree {
  struct Node {
    int sigma;   // original node id
    int parent;  // tree index, -1 for the root
    int depth;
    int edge;    // original edge id towards the parent, -1 for the root
  };
  std::vector<Node> nodes;  // BFS order, root first
  std::vector<std::vector<int>> children;
  int root = 0;  // original id
  int t = 1;
};

/// Node count of build_tree(root, t) without building it; counting stops
/// once `cap` is exceeded (the return value is then > cap).
std::size_t projected_tree_nodes(const Graph& g, int root, int t,
                                 std::size_t cap = 200000);

/// Throws TreeSizeError beyond max_nodes.
ComputationTree build_tree(const Graph& g, int root, int t,
                           std::size_t max_nodes = 200000);

/// Exact minimiser of the unrolled quadratic objective by leaf-to-root
/// variable elimination and back-substitution (independent of the message
/// recursion). Returns one coordinate per tree node, root first.
std::vector<double> solve_tree_quadratic(const QuadraticProblem& q,
                                         const InitialMessages& init,
                                         const ComputationTree& tree);

/// Exact minimiser for general factors by nested 1-D minimisation
/// (bracket + Brent at every level). Cost grows exponentially with depth;
/// levels above 3 are refused.
std::vector<double> solve_tree_general(const PairwiseObjective& obj,
                                       const InitialMessages& init,
                                       const ComputationTree& tree,
                                       double xtol = 1e-11);

struct KeyPropertyResult {
  double x_root_tree = 0;
  double x_root_loopy = 0;
  double diff = 0;
  std::size_t tree_nodes = 0;
};

/// Runs t iterations of the parametric recursion and solves the matching
/// tree; the two root values agree up to round-off.
KeyPropertyResult key_property_quadratic(const QuadraticProblem& q,
                                         const InitialMessages& init, int root,
                                         int t, std::size_t max_nodes = 200000);

KeyPropertyResult key_property_general(const PairwiseObjective& obj,
                                       const InitialMessages& init, int root,
                                       int t, const GridConfig& grid = {},
                                       std::size_t max_nodes = 200000);

}  // namespace minsum

#endif
