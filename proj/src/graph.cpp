#include "minsum/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "minsum/common.hpp"

namespace minsum {

Graph Graph::build(int n, std::vector<std::array<int, 2>> edge_list) {
  if (n <= 0) throw Error("graph needs at least one node");
  Graph g;
  g.n = n;
  std::set<std::array<int, 2>> seen;
  g.edges.reserve(edge_list.size());
  for (auto e : edge_list) {
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    if (e[0] == e[1])
      throw Error("self-loop at node " + std::to_string(e[0]));
    if (e[0] < 0 || e[1] >= n)
      throw Error("edge (" + std::to_string(e[0]) + "," + std::to_string(e[1]) +
                  ") out of range for n = " + std::to_string(n));
    if (!seen.insert(e).second)
      throw Error("duplicate edge (" + std::to_string(e[0]) + "," +
                  std::to_string(e[1]) + ")");
    g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.adj.assign(n, {});
  g.adj_edge.assign(n, {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [lo, hi] = g.edges[e];
    g.adj[lo].push_back(hi);
    g.adj_edge[lo].push_back(static_cast<int>(e));
    g.adj[hi].push_back(lo);
    g.adj_edge[hi].push_back(static_cast<int>(e));
  }
  // Neighbour lists ascending; keeps iteration order deterministic.
  for (int i = 0; i < n; ++i) {
    std::vector<std::size_t> order(g.adj[i].size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.adj[i][a] < g.adj[i][b]; });
    std::vector<int> a2(order.size()), e2(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      a2[k] = g.adj[i][order[k]];
      e2[k] = g.adj_edge[i][order[k]];
    }
    g.adj[i] = std::move(a2);
    g.adj_edge[i] = std::move(e2);
  }
  return g;
}

int Graph::edge_between(int i, int j) const {
  const auto& nb = adj[i];
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return -1;
  return adj_edge[i][static_cast<std::size_t>(it - nb.begin())];
}

int Graph::directed(int from, int to) const {
  const int e = edge_between(from, to);
  if (e < 0)
    throw Error("no edge between " + std::to_string(from) + " and " +
                std::to_string(to));
  return directed_from(e, from);
}

std::vector<int> Graph::components() const {
  std::vector<int> label(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int u : adj[v]) {
        if (label[u] < 0) {
          label[u] = next;
          q.push(u);
        }
      }
    }
    ++next;
  }
  return label;
}

int Graph::diameter_edges() const {
  int diam = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int u : adj[v]) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          q.push(u);
        }
      }
    }
    for (int v = 0; v < n; ++v) {
      if (dist[v] < 0) throw Error("diameter_edges: graph is disconnected");
      diam = std::max(diam, dist[v]);
    }
  }
  return diam;
}

}  // namespace minsum
