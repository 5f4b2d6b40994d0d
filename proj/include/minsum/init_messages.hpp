#ifndef MINSUM_INIT_MESSAGES_HPP
#define MINSUM_INIT_MESSAGES_HPP

#include <functional>
#include <optional>
#include <vector>

#include "minsum/problem.hpp"

namespace minsum {

/// Witness that explicitly supplied initial messages satisfy the admissible
/// curvature condition alpha0_{i->j} >= -rho (w_i/w_j) |a_ji|, rho < 1/lambda.
struct RhoWitness {
  double rho;
  double lambda;
  std::vector<double> w;
};

/// Initial messages J^0 shared by the quadratic path, the grid path, the
/// computation tree and the rate bounds.
///
///  - from_x0: J^0_{i->j}(x) = f_ji(x, x0_i); for quadratic problems this is
///    alpha0 = 0, beta0_{i->j} = -a_ji * x0_i.
///  - quadratic_affine: explicit (alpha0, beta0) per directed edge; validated
///    against the rho condition when a witness is supplied.
///  - general_custom: caller-supplied J^0 and dJ^0 per directed edge,
///    together with nominal estimates x0 (trusted, library-only).
struct InitialMessages {
  enum class Kind { from_x0, quadratic_affine, general_custom };
  Kind kind = Kind::from_x0;

  std::vector<double> x0;                   // n (empty means all zeros)
  std::vector<double> alpha0, beta0;        // 2|E| for quadratic_affine
  std::optional<RhoWitness> witness;

  std::vector<std::function<double(double)>> j0;   // 2|E| for general_custom
  std::vector<std::function<double(double)>> dj0;

  static InitialMessages zero(int n);
  static InitialMessages from_x0(std::vector<double> x0);
  static InitialMessages quadratic_affine(std::vector<double> alpha0,
                                          std::vector<double> beta0,
                                          std::optional<RhoWitness> witness = {});
  static InitialMessages general_custom(
      std::vector<double> x0,
      std::vector<std::function<double(double)>> j0,
      std::vector<std::function<double(double)>> dj0);

  double x0_at(int i) const { return x0.empty() ? 0.0 : x0[i]; }

  /// J^0_{from->to}(x) for a general objective.
  double value(const PairwiseObjective& obj, int from, int to, double x) const;
  /// d/dx J^0_{from->to}(x).
  double deriv(const PairwiseObjective& obj, int from, int to, double x) const;

  /// Quadratic-path coefficients of J^0_{from->to} = alpha x^2/2 - beta x.
  double alpha_q(const QuadraticProblem& q, int from, int to) const;
  double beta_q(const QuadraticProblem& q, int from, int to) const;
};

}  // namespace minsum

#endif
