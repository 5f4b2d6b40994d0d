#ifndef MINSUM_QUADRATIC_MINSUM_HPP
#define MINSUM_QUADRATIC_MINSUM_HPP

#include <vector>

#include "minsum/dominance.hpp"
#include "minsum/init_messages.hpp"
#include "minsum/problem.hpp"
#include "minsum/trace.hpp"

namespace minsum {

/// Parametric message state for quadratic problems. Message J_{i->j}(x) =
/// alpha x^2/2 - beta x lives in slot graph.directed(i, j); J(0) = 0 holds
/// by construction (no constant term). The estimates are indexed as in
/// the local-objective extraction: x^{(t)} minimises the node objective
/// built from the messages of iteration t-1, so they lag the messages in
/// the same state by one update.
struct QuadraticMessageState {
  int t = 0;
  std::vector<double> alpha;  // 2|E|
  std::vector<double> beta;   // 2|E|
  std::vector<double> x;      // estimates x^{(t)}
};

/// Builds the t = 0 state. For from_x0 inits this is the alpha = 0,
/// beta_{i->j} = -a_ji x0_i choice; explicit (alpha, beta) pairs are
/// validated against the admissible-curvature condition when a RhoWitness
/// is attached (throws Error on violation).
QuadraticMessageState init_messages_quadratic(const QuadraticProblem& q,
                                              const InitialMessages& init);

/// One synchronous flooding update: all 2|E| messages of t+1 from the state
/// at t, plus the estimates extracted from the state-t messages. Pure; the
/// input state is not modified. Throws WellPosednessError with the offending
/// directed edge when a message denominator a_{i->j} is non-positive.
QuadraticMessageState update_messages_quadratic(const QuadraticProblem& q,
                                                const QuadraticMessageState& s);

/// Message denominators a_{i->j}^{(t)} = a_ii + sum_{u in N_i \ j} alpha_{u->i},
/// one per directed edge, computed from the state's messages.
std::vector<double> message_denominators(const QuadraticProblem& q,
                                         const QuadraticMessageState& s);

/// Concavity and dominance invariants of the updated messages (t >= 1):
/// every alpha < 0 and lambda w_i a_{i->j} >= w_j |a_ji| on every directed
/// edge. `tol` is the relative slack granted for the finite-precision
/// certificate (the Perron rows can be exactly tight).
struct MessageInvariantReport {
  bool ok = true;
  double alpha_max = -kInf;  // most positive alpha seen
  double min_slack = kInf;   // min of lambda w_i a_{i->j} - w_j |a_ji| (scaled)
  int worst_from = -1, worst_to = -1;
};
MessageInvariantReport check_message_invariants(
    const QuadraticProblem& q, const QuadraticMessageState& s, double lambda,
    const std::vector<double>& w, double tol = 1e-9);

struct QuadraticRunOptions {
  int t_max = 60;
  double tol = 1e-10;
  const DominanceCertificate* cert = nullptr;     // enables invariant tracking + weighting
  const std::vector<double>* x_star = nullptr;    // enables err_weighted column
  double invariant_tol = 1e-9;
};

struct QuadraticRunResult {
  SolveTrace trace;
  QuadraticMessageState state;  // final
  bool invariants_ok = true;    // over all iterations with t >= 1 (cert runs)
  double invariant_min_slack = kInf;
  double alpha_max = -kInf;
};

/// Iterates update_messages_quadratic until the successive-iterate infinity
/// norm drops to tol or t reaches t_max, recording the full trace.
QuadraticRunResult run_quadratic(const QuadraticProblem& q,
                                 const InitialMessages& init,
                                 const QuadraticRunOptions& opts = {});

}  // namespace minsum

#endif
