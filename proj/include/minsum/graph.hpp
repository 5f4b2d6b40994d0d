#ifndef MINSUM_GRAPH_HPP
#define MINSUM_GRAPH_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace minsum {

/// Undirected simple graph, 0-based nodes, edges stored once with the
/// canonical orientation lo < hi. Directed-edge quantities (messages) are
/// addressed as 2*e for lo->hi and 2*e+1 for hi->lo.
struct Graph {
  int n = 0;
  std::vector<std::array<int, 2>> edges;      // [lo, hi], lo < hi
  std::vector<std::vector<int>> adj;          // neighbour ids, ascending
  std::vector<std::vector<int>> adj_edge;     // edge id parallel to adj

  /// Validates: indices in range, no self-loops, no duplicates.
  static Graph build(int n, std::vector<std::array<int, 2>> edge_list);

  std::size_t edge_count() const { return edges.size(); }
  int degree(int i) const { return static_cast<int>(adj[i].size()); }

  /// Edge id between i and j, or -1 when not adjacent.
  int edge_between(int i, int j) const;

  /// Directed message slot for the message from -> to; asserts adjacency.
  int directed(int from, int to) const;

  int directed_from(int edge, int from) const {
    return 2 * edge + (from == edges[edge][0] ? 0 : 1);
  }

  /// Connected-component label per node (labels are 0..k-1 in first-seen order).
  std::vector<int> components() const;

  /// Longest shortest path in edges; graph must be connected.
  int diameter_edges() const;
};

}  // namespace minsum

#endif
