#include "minsum/bounds.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "minsum/kernels.hpp"
#include "minsum/reference.hpp"

namespace minsum {

const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::general_eq14: return "general_eq14";
    case BoundKind::general_simplified_eq15: return "general_simplified_eq15";
    case BoundKind::quadratic_eq35: return "quadratic_eq35";
    case BoundKind::quadratic_eq36: return "quadratic_eq36";
  }
  return "?";
}

namespace {

double pow_iter(double base, int exp) {
  double v = 1.0;
  for (int k = 0; k < exp; ++k) v *= base;
  return v;
}

void require_x0_init(const InitialMessages& init, BoundKind kind) {
  if (init.kind != InitialMessages::Kind::from_x0)
    throw Error(std::string(bound_kind_name(kind)) +
                " is stated for the x0-style initial messages only");
}

double weighted_e0(const InitialMessages& init, const std::vector<double>& x_star,
                   const std::vector<double>& w) {
  double e0 = 0;
  for (std::size_t i = 0; i < x_star.size(); ++i)
    e0 = std::max(e0, std::fabs(init.x0_at(static_cast<int>(i)) - x_star[i]) / w[i]);
  return e0;
}

void set_noise_floor(BoundContext& ctx) {
  double scale = 0;
  for (std::size_t i = 0; i < ctx.x_star.size(); ++i)
    scale = std::max(scale, (1.0 + std::fabs(ctx.x_star[i])) / ctx.w[i]);
  // 1/(1-lambda) tracks how round-off is amplified into the gap between the
  // message-passing fixed point and the directly solved x*
  ctx.noise_floor = 16.0 * std::numeric_limits<double>::epsilon() * scale /
                    (1.0 - std::min(ctx.lambda, 0.9999));
}

}  // namespace

BoundContext make_bound_context(const QuadraticProblem& q,
                                const DominanceCertificate& cert,
                                const InitialMessages& init, BoundKind kind,
                                std::vector<double> x_star) {
  if (x_star.empty()) x_star = solve_quadratic_direct(q);
  BoundContext ctx;
  ctx.kind = kind;
  ctx.lambda = cert.lambda;
  ctx.w = cert.w;
  ctx.x_star = std::move(x_star);

  switch (kind) {
    case BoundKind::quadratic_eq36:
      require_x0_init(init, kind);
      ctx.m_value = 1.0;
      ctx.e0 = weighted_e0(init, ctx.x_star, ctx.w);
      break;
    case BoundKind::general_simplified_eq15:
      require_x0_init(init, kind);
      ctx.m_value = 1.0;  // quadratic diagonal curvature is constant
      ctx.e0 = weighted_e0(init, ctx.x_star, ctx.w);
      break;
    case BoundKind::quadratic_eq35:
    case BoundKind::general_eq14: {
      double worst = 0;
      for (int i = 0; i < q.n(); ++i) {
        double num = 0;
        for (std::size_t a = 0; a < q.graph.adj[i].size(); ++a) {
          const int u = q.graph.adj[i][a];
          const int e = q.graph.adj_edge[i][a];
          // |a_iu x_u* - dJ0_{u->i}(x_i*)| with dJ0 = alpha0 x - beta0
          const double dj0 = init.alpha_q(q, u, i) * ctx.x_star[i] -
                             init.beta_q(q, u, i);
          num += std::fabs(q.offdiag[e] * ctx.x_star[u] - dj0);
        }
        worst = std::max(worst, num / (ctx.w[i] * q.diag[i]));
      }
      ctx.numerator_max = worst;
      break;
    }
  }
  set_noise_floor(ctx);
  return ctx;
}

BoundContext make_bound_context(const PairwiseObjective& obj,
                                const DominanceCertificate& cert,
                                const InitialMessages& init, BoundKind kind,
                                std::vector<double> x_star) {
  if (x_star.empty()) {
    std::vector<double> start(obj.graph.n, 0.0);
    for (int i = 0; i < obj.graph.n; ++i) start[i] = init.x0_at(i);
    x_star = solve_general_newton(obj, start);
  }
  BoundContext ctx;
  ctx.kind = kind;
  ctx.lambda = cert.lambda;
  ctx.w = cert.w;
  ctx.x_star = std::move(x_star);

  switch (kind) {
    case BoundKind::quadratic_eq36:
      require_x0_init(init, kind);
      ctx.m_value = 1.0;
      ctx.e0 = weighted_e0(init, ctx.x_star, ctx.w);
      break;
    case BoundKind::general_simplified_eq15: {
      require_x0_init(init, kind);
      double m = 1.0;
      for (int i = 0; i < obj.graph.n; ++i) {
        const auto r = obj.node_curvature_range(i);
        if (!(r.lo > 0))
          throw Error(std::string(bound_kind_name(kind)) + ": node " +
                      std::to_string(i) +
                      " has non-positive diagonal curvature infimum");
        if (!std::isfinite(r.hi))
          throw Error(std::string(bound_kind_name(kind)) +
                      " is inapplicable: node " + std::to_string(i) +
                      " has unbounded diagonal curvature (use general_eq14)");
        m = std::max(m, r.hi / r.lo);
      }
      ctx.m_value = m;
      ctx.e0 = weighted_e0(init, ctx.x_star, ctx.w);
      break;
    }
    case BoundKind::quadratic_eq35:
    case BoundKind::general_eq14: {
      double worst = 0;
      for (int i = 0; i < obj.graph.n; ++i) {
        const double curv_lo = obj.node_curvature_range(i).lo;
        if (!(curv_lo > 0))
          throw Error(std::string(bound_kind_name(kind)) + ": node " +
                      std::to_string(i) +
                      " has degenerate curvature denominator");
        double num = 0;
        for (std::size_t a = 0; a < obj.graph.adj[i].size(); ++a) {
          const int u = obj.graph.adj[i][a];
          const int e = obj.graph.adj_edge[i][a];
          const double grad_edge =
              obj.oriented(e, i).d_recv(ctx.x_star[i], ctx.x_star[u]);
          const double dj0 = init.deriv(obj, u, i, ctx.x_star[i]);
          num += std::fabs(grad_edge - dj0);
        }
        worst = std::max(worst, num / (ctx.w[i] * curv_lo));
      }
      ctx.numerator_max = worst;
      break;
    }
  }
  set_noise_floor(ctx);
  return ctx;
}

double bound_value(const BoundContext& ctx, int t) {
  if (t < 1) throw Error("bound_value: bounds are stated for t >= 1");
  // The estimate in trace row t minimises the local objective built from the
  // messages of iteration T = t - 1, i.e. it equals the exact optimum of the
  // T-level unrolled tree whose perturbation sits at distance T from the
  // root. The geometric factor is therefore lambda^T for the gradient-
  // mismatch form and lambda^(T+1) for the x0-initialisation form (one
  // dominance row turns the mismatch into a weighted initial error).
  const int levels = t - 1;
  switch (ctx.kind) {
    case BoundKind::general_eq14:
    case BoundKind::quadratic_eq35:
      return pow_iter(ctx.lambda, levels) / (1.0 - ctx.lambda) *
             ctx.numerator_max;
    case BoundKind::general_simplified_eq15:
    case BoundKind::quadratic_eq36:
      return pow_iter(ctx.lambda, levels + 1) * ctx.m_value /
             (1.0 - ctx.lambda) * ctx.e0;
  }
  return 0;
}

BoundReport check_trace(const SolveTrace& trace, const BoundContext& ctx) {
  const auto& kern = kernels::active();
  BoundReport rep;
  rep.kind = ctx.kind;
  rep.lambda = ctx.lambda;
  rep.w = ctx.w;
  rep.m_value = ctx.m_value;
  for (const auto& row : trace.rows) {
    if (row.t < 1) continue;
    const double measured = kern.max_weighted_abs_diff(
        row.x.data(), ctx.x_star.data(), ctx.w.data(), row.x.size());
    const double bound = bound_value(ctx, row.t);
    const bool ok = measured <= bound * (1.0 + 1e-9) + ctx.noise_floor;
    rep.rows.push_back({row.t, measured, bound, ok});
    rep.all_satisfied = rep.all_satisfied && ok;
  }
  return rep;
}

void annotate_trace(SolveTrace& trace, const BoundContext& ctx) {
  for (auto& row : trace.rows)
    if (row.t >= 1) row.bound_value = bound_value(ctx, row.t);
}

void write_bound_csv(std::ostream& os, const BoundReport& report) {
  const auto flags = os.flags();
  os.precision(17);
  os << "t,measured,bound,satisfied\n";
  for (const auto& r : report.rows)
    os << r.t << "," << r.measured << "," << r.bound << ","
       << (r.satisfied ? 1 : 0) << "\n";
  os.flags(flags);
}

}  // namespace minsum
