#ifndef MINSUM_DOMINANCE_HPP
#define MINSUM_DOMINANCE_HPP

#include <optional>
#include <variant>
#include <vector>

#include "minsum/problem.hpp"

namespace minsum {

/// (lambda, w) pair witnessing scaled diagonal dominance:
/// sum_{j in N_i} w_j |d2F/dx_i dx_j| <= lambda w_i d2F/dx_i^2 for all i, x.
struct DominanceCertificate {
  enum class Kind { exact_quadratic, sampled };
  double lambda = 0;        // in [0, 1); 0 only for edgeless (diagonal) problems
  std::vector<double> w;    // positive, max-normalised to 1
  Kind kind = Kind::exact_quadratic;
  long sample_count = 0;    // 0 for exact certificates
};

/// Best achievable lambda turned out to be >= 1 (quadratic case: the spectral
/// radius of D^-1 |A_off|, attained at the returned scaling vector).
struct DominanceRefutation {
  double lambda_star = 1;
  std::vector<double> w;
};

using QuadraticCertifyResult =
    std::variant<DominanceCertificate, DominanceRefutation>;

/// Exact certification for quadratic problems: lambda* = rho(D^-1 |A_off|)
/// via shifted power iteration per connected component, w = the Perron
/// scaling. Returns a certificate iff lambda* < 1. Throws
/// PowerIterationError if the iteration does not settle within the cap.
QuadraticCertifyResult certify_quadratic(const QuadraticProblem& q);

/// Per-row slack lambda w_i a_ii - sum_j w_j |a_ij|; all >= 0 iff (lambda, w)
/// certifies.
std::vector<double> dominance_margin(const QuadraticProblem& q, double lambda,
                                     const std::vector<double>& w);

struct DominanceWitness {
  int row = -1;
  std::vector<double> x;
  double lhs = 0, rhs = 0;
};

struct GeneralCertifyResult {
  bool pass = false;
  // pass proven from closed-form curvature bounds (all-builtin factors) vs.
  // only checked at sample points
  bool global = false;
  long samples_checked = 0;
  std::optional<DominanceWitness> witness;
};

/// Sampled verification of scaled diagonal dominance for a general
/// objective over a
/// box: deterministic candidates (box centre, per-node adversarial curvature
/// points, the four corners of each edge's 2-D slice) plus `samples`
/// quasi-random points. A pass is a proof only when `global` is set (builtin
/// families with closed-form curvature bounds); otherwise it is a sampled
/// check, not a proof.
GeneralCertifyResult certify_general(const PairwiseObjective& obj,
                                     const std::vector<double>& box_lo,
                                     const std::vector<double>& box_hi,
                                     long samples, double lambda,
                                     const std::vector<double>& w);

/// Smallest lambda that the closed-form row bounds support for builtin
/// factors (w fixed); +inf when some row has non-positive curvature infimum.
double estimate_lambda_general(const PairwiseObjective& obj,
                               const std::vector<double>& w);

}  // namespace minsum

#endif
