#include "minsum/reference.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>

namespace minsum {

namespace {

Eigen::SparseMatrix<double> assemble_sparse(const QuadraticProblem& q) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(q.n() + 2 * q.graph.edge_count());
  for (int i = 0; i < q.n(); ++i) trip.emplace_back(i, i, q.diag[i]);
  for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
    const auto [lo, hi] = q.graph.edges[e];
    trip.emplace_back(lo, hi, q.offdiag[e]);
    trip.emplace_back(hi, lo, q.offdiag[e]);
  }
  Eigen::SparseMatrix<double> a(q.n(), q.n());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

std::vector<double> solve_quadratic_direct(const QuadraticProblem& q) {
  const int n = q.n();
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(q.b.data(), n);
  Eigen::VectorXd x;
  if (n < 512) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = q.diag[i];
    for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
      const auto [lo, hi] = q.graph.edges[e];
      a(lo, hi) = q.offdiag[e];
      a(hi, lo) = q.offdiag[e];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
      throw Error("solve_quadratic_direct: A is not positive definite");
    x = llt.solve(b);
  } else {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(assemble_sparse(q));
    if (llt.info() != Eigen::Success)
      throw Error("solve_quadratic_direct: A is not positive definite");
    x = llt.solve(b);
  }
  std::vector<double> out(x.data(), x.data() + n);
  // one refinement step tightens the residual to the contract level
  const auto ax = q.multiply(out);
  double res = 0, bmax = 0;
  for (int i = 0; i < n; ++i) {
    res = std::max(res, std::fabs(ax[i] - q.b[i]));
    bmax = std::max(bmax, std::fabs(q.b[i]));
  }
  if (res > 1e-10 * (1.0 + bmax)) {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = q.b[i] - ax[i];
    Eigen::VectorXd dx;
    if (n < 512) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) a(i, i) = q.diag[i];
      for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
        const auto [lo, hi] = q.graph.edges[e];
        a(lo, hi) = q.offdiag[e];
        a(hi, lo) = q.offdiag[e];
      }
      dx = a.llt().solve(r);
    } else {
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(assemble_sparse(q));
      dx = llt.solve(r);
    }
    for (int i = 0; i < n; ++i) out[i] += dx[i];
  }
  return out;
}

std::vector<double> solve_general_newton(const PairwiseObjective& obj,
                                         std::vector<double> x_init,
                                         const NewtonOptions& opts) {
  const int n = obj.graph.n;
  if (x_init.empty()) x_init.assign(n, 0.0);
  if (static_cast<int>(x_init.size()) != n)
    throw Error("solve_general_newton: x_init has wrong length");

  std::vector<double> x = std::move(x_init);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const auto grad = obj.gradient(x);
    double gmax = 0;
    for (double g : grad) gmax = std::max(gmax, std::fabs(g));
    if (gmax <= opts.tol) return x;

    // analytic Hessian on the graph pattern
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n + 2 * obj.graph.edge_count());
    for (int i = 0; i < n; ++i)
      trip.emplace_back(i, i, obj.partial_hessian(x, i, i));
    for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
      const auto [lo, hi] = obj.graph.edges[e];
      const double m = obj.edge_factors[e].d12(x[lo], x[hi]);
      trip.emplace_back(lo, hi, m);
      trip.emplace_back(hi, lo, m);
    }
    Eigen::SparseMatrix<double> h(n, n);
    h.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(h);
    if (ldlt.info() != Eigen::Success)
      throw Error("solve_general_newton: Hessian factorisation failed");
    Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(grad.data(), n);
    Eigen::VectorXd d = ldlt.solve(-g);

    const double f0 = obj.value(x);
    const double slope = g.dot(d);
    double step = 1.0;
    std::vector<double> trial(n);
    bool accepted = false;
    for (int h2 = 0; h2 < opts.max_halvings; ++h2) {
      for (int i = 0; i < n; ++i) trial[i] = x[i] + step * d[i];
      if (obj.value(trial) <= f0 + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw Error("solve_general_newton: line search failed after " +
                  std::to_string(opts.max_halvings) + " halvings");
    x = trial;
  }
  throw Error("solve_general_newton: no convergence within " +
              std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace minsum
