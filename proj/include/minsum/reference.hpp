#ifndef MINSUM_REFERENCE_HPP
#define MINSUM_REFERENCE_HPP

#include <vector>

#include "minsum/problem.hpp"

namespace minsum {

/// x* solving A x = b by Cholesky (dense below n = 512, sparse above).
/// Throws Error when A is not positive definite.
std::vector<double> solve_quadratic_direct(const QuadraticProblem& q);

struct NewtonOptions {
  double tol = 1e-10;     // on ||grad F||_inf
  int max_iterations = 200;
  int max_halvings = 60;  // Armijo backtracking
};

/// Damped Newton with analytically assembled sparse Hessian; the ground
/// truth for general strictly convex coercive objectives.
std::vector<double> solve_general_newton(const PairwiseObjective& obj,
                                         std::vector<double> x_init,
                                         const NewtonOptions& opts = {});

}  // namespace minsum

#endif
