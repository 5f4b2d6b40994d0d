#ifndef MINSUM_GENERAL_MINSUM_HPP
#define MINSUM_GENERAL_MINSUM_HPP

#include <vector>

#include "minsum/dominance.hpp"
#include "minsum/grid.hpp"
#include "minsum/init_messages.hpp"
#include "minsum/problem.hpp"
#include "minsum/trace.hpp"

namespace minsum {

struct GridConfig {
  int points = 1025;          // per node; power of two plus one
  int max_points = 4097;      // refinement cap
  double margin = 2.0;        // domain widening factor (> 1)
  double inner_grad_tol = 1e-10;  // Newton polish on the interpolant
  // Stall detector for grid refinement: the step norm is considered stalled
  // above tol when step(t) > stall_ratio * step(t - stall_window). A
  // certified contraction keeps shrinking the step norm (grid error shifts
  // the fixed point rather than flooring the steps), so this only fires on
  // jitter floors near the margins of applicability.
  double stall_ratio = 0.9;
  int stall_window = 4;
};

/// Per-node grid brackets containing x0, 0, and every candidate minimiser:
/// the hull of {0, x0_i, x*_i} (x* from the damped-Newton reference when it
/// is available) padded by margin times the certificate-weighted initial
/// error; falls back to a doubling sign-bracket search on the separable
/// curvature surrogate when no reference solution can be computed.
std::vector<GridDomain> choose_domains(const PairwiseObjective& obj,
                                       const std::vector<double>& x0,
                                       double margin, int points,
                                       const DominanceCertificate* cert = nullptr);

/// All directed-edge messages plus estimates for one iteration; messages
/// into node i live on node i's grid. Same estimate indexing as the
/// quadratic path: x^{(t)} minimises the local objective built from the
/// messages of iteration t-1.
struct GeneralMessageState {
  int t = 0;
  std::vector<GridDomain> domains;    // per node
  std::vector<GridMessage> messages;  // per directed edge
  std::vector<double> x;              // estimates x^{(t)}
};

GeneralMessageState init_messages_general(const PairwiseObjective& obj,
                                          const InitialMessages& init,
                                          std::vector<GridDomain> domains);

/// Curvature invariants observed while stepping (all ratios are violation /
/// allowance, so <= 1 passes):
///  - gamma_curvature_min: min interior second difference of any local
///    objective (strict convexity demands > 0);
///  - envelope_excess_ratio: message-curvature envelope violation vs the
///    10 h^2 grid allowance;
///  - slope_err_ratio: minimiser-map derivative identity deviation vs the
///    100 h^2 relative allowance.
struct GeneralChecks {
  double gamma_curvature_min = kInf;
  double envelope_excess_ratio = 0;
  double slope_err_ratio = 0;
};

/// New message for directed edge from->to, minimising the partially
/// summarised objective over the sender's grid for every receiver grid node
/// (grid argmin scan + Newton polish on the interpolant). Boundary
/// minimisers throw DomainTooSmallError.
GridMessage update_message_general(const PairwiseObjective& obj,
                                   const GeneralMessageState& s, int from,
                                   int to, const GridConfig& cfg);

/// Minimiser of the local objective f_i + sum of incoming messages.
double extract_estimate_general(const PairwiseObjective& obj,
                                const GeneralMessageState& s, int node,
                                const GridConfig& cfg);

/// One synchronous iteration: estimates from the current messages, then all
/// 2|E| new messages. Pure. Invariant checks run when `cert` is non-null.
GeneralMessageState step_general(const PairwiseObjective& obj,
                                 const GeneralMessageState& s,
                                 const GridConfig& cfg,
                                 const DominanceCertificate* cert = nullptr,
                                 GeneralChecks* checks = nullptr);

struct GeneralRunOptions {
  int t_max = 60;
  double tol = 1e-8;
  GridConfig grid;
  const DominanceCertificate* cert = nullptr;
  const std::vector<double>* x_star = nullptr;  // enables err_weighted column
  // Debug dump: one CSV (x, value, minimizer) per directed edge per listed
  // iteration, written under dump_dir; an empty list with a non-empty dir
  // dumps every iteration.
  std::string dump_dir;
  std::vector<int> dump_iterations;
};

struct GeneralRunResult {
  SolveTrace trace;
  GeneralMessageState state;
  GeneralChecks checks;
  int refinements = 0;
};

/// Flooding iteration with the successive-iterate stopping rule; when the
/// step norm stalls above tol the grids are halved once per stall (up to
/// max_points) and the run continues on the finer grids.
GeneralRunResult run_general(const PairwiseObjective& obj,
                             const InitialMessages& init,
                             const GeneralRunOptions& opts = {});

}  // namespace minsum

#endif
