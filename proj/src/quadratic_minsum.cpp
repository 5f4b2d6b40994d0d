#include "minsum/quadratic_minsum.hpp"

#include <cmath>

#include "minsum/kernels.hpp"

namespace minsum {

namespace {

void incoming_sums(const QuadraticProblem& q, const QuadraticMessageState& s,
                   std::vector<double>& sum_alpha, std::vector<double>& sum_beta) {
  const int n = q.n();
  sum_alpha.assign(n, 0.0);
  sum_beta.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < q.graph.adj[i].size(); ++a) {
      const int u = q.graph.adj[i][a];
      const int e = q.graph.adj_edge[i][a];
      const int d = q.graph.directed_from(e, u);  // u -> i
      sum_alpha[i] += s.alpha[d];
      sum_beta[i] += s.beta[d];
    }
  }
}

}  // namespace

QuadraticMessageState init_messages_quadratic(const QuadraticProblem& q,
                                              const InitialMessages& init) {
  const std::size_t m2 = 2 * q.graph.edge_count();
  QuadraticMessageState s;
  s.t = 0;

  switch (init.kind) {
    case InitialMessages::Kind::from_x0: {
      if (!init.x0.empty() &&
          init.x0.size() != static_cast<std::size_t>(q.n()))
        throw Error("init_messages_quadratic: x0 has wrong length");
      s.alpha.assign(m2, 0.0);
      s.beta.assign(m2, 0.0);
      for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
        const auto [lo, hi] = q.graph.edges[e];
        // J^0_{i->j}(x_j) = a_ji x_j x0_i, i.e. beta = -a_ji x0_i
        s.beta[2 * e] = -q.offdiag[e] * init.x0_at(lo);       // lo -> hi
        s.beta[2 * e + 1] = -q.offdiag[e] * init.x0_at(hi);   // hi -> lo
      }
      s.x.assign(q.n(), 0.0);
      for (int i = 0; i < q.n(); ++i) s.x[i] = init.x0_at(i);
      break;
    }
    case InitialMessages::Kind::quadratic_affine: {
      if (init.alpha0.size() != m2 || init.beta0.size() != m2)
        throw Error("init_messages_quadratic: alpha0/beta0 need one entry per directed edge");
      if (init.witness) {
        const auto& wit = *init.witness;
        if (!(wit.lambda > 0 && wit.lambda < 1))
          throw Error("rho witness: lambda must lie in (0,1)");
        if (!(wit.rho >= 0 && wit.rho < 1.0 / wit.lambda))
          throw Error("rho witness: need 0 <= rho < 1/lambda");
        if (wit.w.size() != static_cast<std::size_t>(q.n()))
          throw Error("rho witness: w has wrong length");
        for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
          const auto [lo, hi] = q.graph.edges[e];
          const double aji = std::fabs(q.offdiag[e]);
          const double bound_lo_hi = -wit.rho * wit.w[lo] / wit.w[hi] * aji;
          const double bound_hi_lo = -wit.rho * wit.w[hi] / wit.w[lo] * aji;
          const double tol = 1e-12;
          if (init.alpha0[2 * e] < bound_lo_hi - tol * (1.0 + std::fabs(bound_lo_hi)))
            throw Error("initial alpha for edge " + std::to_string(lo) + "->" +
                        std::to_string(hi) + " violates the admissible curvature bound");
          if (init.alpha0[2 * e + 1] < bound_hi_lo - tol * (1.0 + std::fabs(bound_hi_lo)))
            throw Error("initial alpha for edge " + std::to_string(hi) + "->" +
                        std::to_string(lo) + " violates the admissible curvature bound");
        }
      }
      s.alpha = init.alpha0;
      s.beta = init.beta0;
      s.x.assign(q.n(), 0.0);
      break;
    }
    case InitialMessages::Kind::general_custom:
      throw Error("general_custom initial messages are not usable on the quadratic path");
  }
  return s;
}

std::vector<double> message_denominators(const QuadraticProblem& q,
                                         const QuadraticMessageState& s) {
  std::vector<double> sum_alpha, sum_beta;
  incoming_sums(q, s, sum_alpha, sum_beta);
  std::vector<double> den(2 * q.graph.edge_count());
  for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
    const auto [lo, hi] = q.graph.edges[e];
    // a_{i->j} excludes the message j->i from the sum into i
    den[2 * e] = q.diag[lo] + sum_alpha[lo] - s.alpha[2 * e + 1];
    den[2 * e + 1] = q.diag[hi] + sum_alpha[hi] - s.alpha[2 * e];
  }
  return den;
}

QuadraticMessageState update_messages_quadratic(const QuadraticProblem& q,
                                                const QuadraticMessageState& s) {
  const std::size_t m2 = 2 * q.graph.edge_count();
  if (s.alpha.size() != m2 || s.beta.size() != m2)
    throw Error("update_messages_quadratic: malformed state");

  std::vector<double> sum_alpha, sum_beta;
  incoming_sums(q, s, sum_alpha, sum_beta);

  QuadraticMessageState next;
  next.t = s.t + 1;
  next.alpha.resize(m2);
  next.beta.resize(m2);
  next.x.resize(q.n());

  for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
    const auto [lo, hi] = q.graph.edges[e];
    const double c = q.offdiag[e];

    const double den_lo = q.diag[lo] + sum_alpha[lo] - s.alpha[2 * e + 1];
    if (!(den_lo > 0) || !std::isfinite(den_lo))
      throw WellPosednessError(lo, hi, next.t, den_lo);
    const double num_lo = q.b[lo] + sum_beta[lo] - s.beta[2 * e + 1];
    next.alpha[2 * e] = -(c * c) / den_lo;
    next.beta[2 * e] = -c * num_lo / den_lo;

    const double den_hi = q.diag[hi] + sum_alpha[hi] - s.alpha[2 * e];
    if (!(den_hi > 0) || !std::isfinite(den_hi))
      throw WellPosednessError(hi, lo, next.t, den_hi);
    const double num_hi = q.b[hi] + sum_beta[hi] - s.beta[2 * e];
    next.alpha[2 * e + 1] = -(c * c) / den_hi;
    next.beta[2 * e + 1] = -c * num_hi / den_hi;
  }

  // estimates from the state-t messages (local objective minimiser)
  for (int i = 0; i < q.n(); ++i) {
    const double den = q.diag[i] + sum_alpha[i];
    if (!(den > 0) || !std::isfinite(den))
      throw WellPosednessError(i, -1, next.t, den);
    next.x[i] = (q.b[i] + sum_beta[i]) / den;
    if (!std::isfinite(next.x[i]))
      throw WellPosednessError(i, -1, next.t, den);
  }
  return next;
}

MessageInvariantReport check_message_invariants(
    const QuadraticProblem& q, const QuadraticMessageState& s, double lambda,
    const std::vector<double>& w, double tol) {
  MessageInvariantReport rep;
  const auto den = message_denominators(q, s);
  for (std::size_t e = 0; e < q.graph.edge_count(); ++e) {
    const auto [lo, hi] = q.graph.edges[e];
    const double aji = std::fabs(q.offdiag[e]);
    for (int dir = 0; dir < 2; ++dir) {
      const int from = dir == 0 ? lo : hi;
      const int to = dir == 0 ? hi : lo;
      const int d = 2 * static_cast<int>(e) + dir;
      rep.alpha_max = std::max(rep.alpha_max, s.alpha[d]);
      if (!(s.alpha[d] < 0)) {
        rep.ok = false;
        rep.worst_from = from;
        rep.worst_to = to;
      }
      const double lhs = lambda * w[from] * den[d];
      const double rhs = w[to] * aji;
      const double slack = lhs - rhs;
      if (slack < rep.min_slack) {
        rep.min_slack = slack;
        if (slack < -tol * std::max(1.0, rhs)) {
          rep.ok = false;
          rep.worst_from = from;
          rep.worst_to = to;
        }
      }
    }
  }
  return rep;
}

QuadraticRunResult run_quadratic(const QuadraticProblem& q,
                                 const InitialMessages& init,
                                 const QuadraticRunOptions& opts) {
  if (opts.t_max < 1) throw Error("run_quadratic: t_max must be >= 1");
  if (!(opts.tol >= 0)) throw Error("run_quadratic: tol must be >= 0");
  if (opts.cert != nullptr &&
      opts.cert->w.size() != static_cast<std::size_t>(q.n()))
    throw Error("run_quadratic: certificate scaling has wrong length");
  if (opts.x_star != nullptr &&
      opts.x_star->size() != static_cast<std::size_t>(q.n()))
    throw Error("run_quadratic: x_star has wrong length");

  const auto& kern = kernels::active();
  QuadraticRunResult result;
  result.trace.n = q.n();

  std::vector<double> ones;
  const std::vector<double>* w = nullptr;
  if (opts.cert != nullptr) {
    w = &opts.cert->w;
  } else {
    ones.assign(q.n(), 1.0);
    w = &ones;
  }

  QuadraticMessageState state = init_messages_quadratic(q, init);

  const auto record = [&](const QuadraticMessageState& st, double step) {
    TraceRow row;
    row.t = st.t;
    row.x = st.x;
    row.step_inf = step;
    row.residual_inf = q.residual_inf(st.x);
    if (opts.x_star != nullptr)
      row.err_weighted = kern.max_weighted_abs_diff(
          st.x.data(), opts.x_star->data(), w->data(), st.x.size());
    result.trace.rows.push_back(std::move(row));
  };

  record(state, kNaN);
  for (int t = 1; t <= opts.t_max; ++t) {
    QuadraticMessageState next = update_messages_quadratic(q, state);
    const double step =
        kern.max_abs_diff(next.x.data(), state.x.data(), next.x.size());
    state = std::move(next);
    record(state, step);
    if (opts.cert != nullptr) {
      const auto rep = check_message_invariants(q, state, opts.cert->lambda,
                                                *w, opts.invariant_tol);
      result.invariants_ok = result.invariants_ok && rep.ok;
      result.invariant_min_slack = std::min(result.invariant_min_slack, rep.min_slack);
      result.alpha_max = std::max(result.alpha_max, rep.alpha_max);
    }
    if (step <= opts.tol) {
      result.trace.converged = true;
      break;
    }
  }
  result.state = std::move(state);
  return result;
}

}  // namespace minsum
