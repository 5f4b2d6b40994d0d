#ifndef MINSUM_BOUNDS_HPP
#define MINSUM_BOUNDS_HPP

#include <iosfwd>
#include <vector>

#include "minsum/dominance.hpp"
#include "minsum/init_messages.hpp"
#include "minsum/problem.hpp"
#include "minsum/trace.hpp"

namespace minsum {

enum class BoundKind {
  general_eq14,             // lambda^t/(1-lambda) * max_i sum_u |grad mismatch| / (w_i min curvature)
  general_simplified_eq15,  // lambda^(t+1) M/(1-lambda) * weighted initial error
  quadratic_eq35,           // eq14 specialised to alpha/beta initial messages
  quadratic_eq36,           // eq15 with M = 1 (quadratic diagonal is constant)
};

const char* bound_kind_name(BoundKind k);

/// Precomputed right-hand-side pieces of one bound for one (problem, init,
/// x*) combination. Construction throws when the bound is inapplicable
/// (wrong init kind for the simplified forms, unbounded diagonal curvature
/// for the eq15 kind, degenerate curvature denominators).
struct BoundContext {
  BoundKind kind = BoundKind::quadratic_eq36;
  double lambda = 0;
  std::vector<double> w;
  std::vector<double> x_star;
  double numerator_max = 0;  // eq14 / eq35
  double m_value = 1;        // eq15 (1 for eq36)
  double e0 = 0;             // eq15 / eq36
  // The bounds are exact-arithmetic statements; once the right-hand side
  // shrinks below the representation noise of the iterates no double vector
  // other than x* itself can satisfy it. Comparisons therefore allow this
  // absolute floor (a few ulps of the weighted iterates).
  double noise_floor = 0;
};

/// x_star may be empty: it is then computed with the reference solver.
BoundContext make_bound_context(const QuadraticProblem& q,
                                const DominanceCertificate& cert,
                                const InitialMessages& init, BoundKind kind,
                                std::vector<double> x_star = {});

BoundContext make_bound_context(const PairwiseObjective& obj,
                                const DominanceCertificate& cert,
                                const InitialMessages& init, BoundKind kind,
                                std::vector<double> x_star = {});

/// Right-hand side for the estimate in trace row t (t >= 1). Row t's
/// estimate is extracted from the messages of iteration t - 1, so the
/// geometric factor is lambda^(t-1) for the gradient-mismatch bounds and
/// lambda^t for the simplified x0-form bounds. Powers are accumulated by
/// repeated multiplication, so bound(t+1) == lambda * bound(t) exactly.
double bound_value(const BoundContext& ctx, int t);

struct BoundReport {
  BoundKind kind;
  double lambda = 0;
  std::vector<double> w;
  double m_value = 1;
  struct Row {
    int t;
    double measured;
    double bound;
    bool satisfied;  // measured <= bound * (1 + 1e-9) + noise_floor
  };
  std::vector<Row> rows;
  bool all_satisfied = true;
};

/// Evaluates the bound against every trace row with t >= 1.
BoundReport check_trace(const SolveTrace& trace, const BoundContext& ctx);

/// Fills the bound_value column of an existing trace.
void annotate_trace(SolveTrace& trace, const BoundContext& ctx);

void write_bound_csv(std::ostream& os, const BoundReport& report);

}  // namespace minsum

#endif
