#ifndef MINSUM_PROBLEM_HPP
#define MINSUM_PROBLEM_HPP

#include <span>
#include <vector>

#include "minsum/factors.hpp"
#include "minsum/graph.hpp"

namespace minsum {

/// F(x) = sum_i f_i(x_i) + sum_{(i,j) in E} f_ij(x_i, x_j).
/// Immutable after construction; safe for concurrent reads.
struct PairwiseObjective {
  Graph graph;
  std::vector<ScalarFactor> node_factors;  // one per node
  std::vector<EdgeFactor> edge_factors;    // one per edge, canonical order

  static PairwiseObjective build(Graph g, std::vector<ScalarFactor> nodes,
                                 std::vector<EdgeFactor> edges);

  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  double gradient_inf(std::span<const double> x) const;

  /// d^2F/dx_i dx_j; requires i == j or (i,j) in E.
  double partial_hessian(std::span<const double> x, int i, int j) const;

  /// Exact range of d^2F/dx_i^2 over R for builtin families; custom edge and
  /// node factors contribute their stated ranges.
  CurvatureRange node_curvature_range(int i) const;

  OrientedEdge oriented(int edge, int receiver) const {
    return OrientedEdge{&edge_factors[edge], receiver == graph.edges[edge][0]};
  }

  bool all_builtin() const;
};

/// F(x) = 0.5 x^T A x - b^T x with A symmetric, positive diagonal, and the
/// off-diagonal sparsity pattern equal to the graph's edge set.
struct QuadraticProblem {
  Graph graph;
  std::vector<double> diag;     // a_ii, one per node
  std::vector<double> offdiag;  // a_ij, one per edge (canonical order)
  std::vector<double> b;

  static QuadraticProblem build(Graph g, std::vector<double> diag,
                                std::vector<double> offdiag,
                                std::vector<double> b);

  int n() const { return graph.n; }
  double objective(std::span<const double> x) const;
  std::vector<double> multiply(std::span<const double> x) const;  // A x
  double residual_inf(std::span<const double> x) const;           // ||Ax - b||_inf

  /// Eq-for-eq pairwise form: f_i = a_ii x^2/2 - b_i x, f_ij = a_ij x_i x_j.
  PairwiseObjective to_pairwise() const;
};

double evaluate_objective(const PairwiseObjective& obj, std::span<const double> x);

PairwiseObjective quadratic_to_pairwise(const QuadraticProblem& q);

}  // namespace minsum

#endif
