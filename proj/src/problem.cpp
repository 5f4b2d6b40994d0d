#include "minsum/problem.hpp"

#include <cmath>
#include <string>

namespace minsum {

PairwiseObjective PairwiseObjective::build(Graph g,
                                           std::vector<ScalarFactor> nodes,
                                           std::vector<EdgeFactor> edges) {
  if (nodes.size() != static_cast<std::size_t>(g.n))
    throw Error("node factor count " + std::to_string(nodes.size()) +
                " != node count " + std::to_string(g.n));
  if (edges.size() != g.edge_count())
    throw Error("edge factor count " + std::to_string(edges.size()) +
                " != edge count " + std::to_string(g.edge_count()));
  PairwiseObjective obj;
  obj.graph = std::move(g);
  obj.node_factors = std::move(nodes);
  obj.edge_factors = std::move(edges);
  return obj;
}

double PairwiseObjective::value(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(graph.n))
    throw Error("dimension mismatch: " + std::to_string(x.size()) + " vs n = " +
                std::to_string(graph.n));
  double v = 0;
  for (int i = 0; i < graph.n; ++i) v += node_factors[i].value(x[i]);
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto [lo, hi] = graph.edges[e];
    v += edge_factors[e].value(x[lo], x[hi]);
  }
  return v;
}

std::vector<double> PairwiseObjective::gradient(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(graph.n))
    throw Error("dimension mismatch in gradient");
  std::vector<double> g(graph.n);
  for (int i = 0; i < graph.n; ++i) g[i] = node_factors[i].deriv(x[i]);
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto [lo, hi] = graph.edges[e];
    g[lo] += edge_factors[e].d1(x[lo], x[hi]);
    g[hi] += edge_factors[e].d2(x[lo], x[hi]);
  }
  return g;
}

double PairwiseObjective::gradient_inf(std::span<const double> x) const {
  const auto g = gradient(x);
  double m = 0;
  for (double v : g) m = std::max(m, std::fabs(v));
  return m;
}

double PairwiseObjective::partial_hessian(std::span<const double> x, int i,
                                          int j) const {
  if (x.size() != static_cast<std::size_t>(graph.n))
    throw Error("dimension mismatch in partial_hessian");
  if (i == j) {
    double h = node_factors[i].second(x[i]);
    for (std::size_t k = 0; k < graph.adj[i].size(); ++k) {
      const int u = graph.adj[i][k];
      const int e = graph.adj_edge[i][k];
      h += oriented(e, i).d2_recv(x[i], x[u]);
    }
    return h;
  }
  const int e = graph.edge_between(i, j);
  if (e < 0)
    throw Error("partial_hessian: (" + std::to_string(i) + "," +
                std::to_string(j) + ") is not an edge");
  return oriented(e, i).d12(x[i], x[j]);
}

CurvatureRange PairwiseObjective::node_curvature_range(int i) const {
  CurvatureRange r = node_factors[i].curvature_range();
  for (int e : graph.adj_edge[i]) {
    // bilinear edges contribute zero own-curvature; custom edges their range
    r.lo += edge_factors[e].own_curvature_min();
    if (edge_factors[e].family != EdgeFamily::bilinear) r.hi = kInf;
  }
  return r;
}

bool PairwiseObjective::all_builtin() const {
  for (const auto& f : node_factors)
    if (f.family == NodeFamily::custom) return false;
  for (const auto& f : edge_factors)
    if (f.family == EdgeFamily::custom) return false;
  return true;
}

QuadraticProblem QuadraticProblem::build(Graph g, std::vector<double> diag,
                                         std::vector<double> offdiag,
                                         std::vector<double> b) {
  if (diag.size() != static_cast<std::size_t>(g.n) ||
      b.size() != static_cast<std::size_t>(g.n) ||
      offdiag.size() != g.edge_count())
    throw Error("quadratic problem: inconsistent dimensions");
  for (int i = 0; i < g.n; ++i)
    if (!(diag[i] > 0))
      throw Error("diagonal entry a_" + std::to_string(i + 1) + "," +
                  std::to_string(i + 1) + " = " + std::to_string(diag[i]) +
                  " must be positive");
  QuadraticProblem q;
  q.graph = std::move(g);
  q.diag = std::move(diag);
  q.offdiag = std::move(offdiag);
  q.b = std::move(b);
  return q;
}

double QuadraticProblem::objective(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n()))
    throw Error("dimension mismatch in objective");
  double v = 0;
  for (int i = 0; i < n(); ++i) v += 0.5 * diag[i] * x[i] * x[i] - b[i] * x[i];
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto [lo, hi] = graph.edges[e];
    v += offdiag[e] * x[lo] * x[hi];
  }
  return v;
}

std::vector<double> QuadraticProblem::multiply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n()))
    throw Error("dimension mismatch in multiply");
  std::vector<double> y(n());
  for (int i = 0; i < n(); ++i) y[i] = diag[i] * x[i];
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto [lo, hi] = graph.edges[e];
    y[lo] += offdiag[e] * x[hi];
    y[hi] += offdiag[e] * x[lo];
  }
  return y;
}

double QuadraticProblem::residual_inf(std::span<const double> x) const {
  const auto ax = multiply(x);
  double m = 0;
  for (int i = 0; i < n(); ++i) m = std::max(m, std::fabs(ax[i] - b[i]));
  return m;
}

PairwiseObjective QuadraticProblem::to_pairwise() const {
  std::vector<ScalarFactor> nodes;
  nodes.reserve(n());
  for (int i = 0; i < n(); ++i)
    nodes.push_back(ScalarFactor::quadratic(diag[i], b[i]));
  std::vector<EdgeFactor> edges;
  edges.reserve(graph.edge_count());
  for (double a : offdiag) edges.push_back(EdgeFactor::bilinear(a));
  return PairwiseObjective::build(graph, std::move(nodes), std::move(edges));
}

double evaluate_objective(const PairwiseObjective& obj, std::span<const double> x) {
  return obj.value(x);
}

PairwiseObjective quadratic_to_pairwise(const QuadraticProblem& q) {
  return q.to_pairwise();
}

}  // namespace minsum
