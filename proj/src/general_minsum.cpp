#include "minsum/general_minsum.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "minsum/kernels.hpp"
#include "minsum/optimize1d.hpp"
#include "minsum/reference.hpp"

namespace minsum {

namespace {

/// f_i sampled on the node's grid via the family kernels.
void eval_node_factor(const ScalarFactor& f, const GridDomain& d,
                      std::vector<double>& out) {
  out.resize(d.points);
  const auto& kern = kernels::active();
  switch (f.family) {
    case NodeFamily::quadratic:
      kern.eval_quadratic(out.data(), d.xs.data(), d.xs.size(), f.a, f.b);
      break;
    case NodeFamily::quartic:
      kern.eval_quartic(out.data(), d.xs.data(), d.xs.size(), f.c, f.b);
      break;
    case NodeFamily::logcosh:
      kern.eval_logcosh(out.data(), d.xs.data(), d.xs.size(), f.s, f.c, f.b);
      break;
    case NodeFamily::custom:
      for (int k = 0; k < d.points; ++k) out[k] = f.value(d.xs[k]);
      break;
  }
}

/// Newton polish of an interior grid minimum inside [xs[k-1], xs[k+1]];
/// falls back to golden section when curvature misbehaves or the iterate
/// leaves the bracket (then the golden midpoint is the answer).
template <class DPhi, class D2Phi>
double polish(double y0, double ylo, double yhi, DPhi&& dphi, D2Phi&& d2phi,
              double grad_tol, const std::function<double(double)>& phi) {
  double y = y0;
  for (int it = 0; it < 40; ++it) {
    const double g = dphi(y);
    if (std::fabs(g) <= grad_tol) return y;
    const double h = d2phi(y);
    if (!(h > 0)) break;
    const double step = g / h;
    const double ynew = y - step;
    if (!(ynew >= ylo && ynew <= yhi)) break;
    if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(y))) return ynew;
    y = ynew;
  }
  return golden_min(phi, ylo, yhi, 1e-12, 200).x;
}

int directed_slot(const Graph& g, int from, int to) { return g.directed(from, to); }

}  // namespace

std::vector<GridDomain> choose_domains(const PairwiseObjective& obj,
                                       const std::vector<double>& x0,
                                       double margin, int points,
                                       const DominanceCertificate* cert) {
  const int n = obj.graph.n;
  if (!(margin > 1)) throw Error("choose_domains: margin must be > 1");
  if (!x0.empty() && static_cast<int>(x0.size()) != n)
    throw Error("choose_domains: x0 has wrong length");
  const auto x0_at = [&](int i) { return x0.empty() ? 0.0 : x0[i]; };

  std::vector<double> x_star;
  bool have_star = true;
  try {
    std::vector<double> start(n);
    for (int i = 0; i < n; ++i) start[i] = x0_at(i);
    x_star = solve_general_newton(obj, start);
  } catch (const Error&) {
    have_star = false;
  }

  std::vector<double> ones(n, 1.0);
  const std::vector<double>& w = cert != nullptr ? cert->w : ones;
  const double lambda_hat =
      cert != nullptr ? std::min(cert->lambda, 0.95) : 0.5;

  std::vector<GridDomain> domains;
  domains.reserve(n);
  if (have_star) {
    double e0 = 0;
    for (int i = 0; i < n; ++i)
      e0 = std::max(e0, std::fabs(x0_at(i) - x_star[i]) / w[i]);
    for (int i = 0; i < n; ++i) {
      const double blo = std::min({0.0, x0_at(i), x_star[i]});
      const double bhi = std::max({0.0, x0_at(i), x_star[i]});
      const double pad =
          margin * (w[i] * e0 / (1.0 - lambda_hat) + 0.5 * (bhi - blo) + 1.0);
      domains.push_back(GridDomain::build(blo - pad, bhi + pad, points));
    }
    return domains;
  }

  // No reference minimiser: bracket each node through the separable
  // surrogate phi_i = f_i - d_i x^2/2 (the cross terms folded in at their
  // worst), expanding until the derivative changes sign.
  for (int i = 0; i < n; ++i) {
    double di = 0;
    for (int e : obj.graph.adj_edge[i]) di += obj.edge_factors[e].mixed_abs_sup();
    const auto dphi = [&](double x) {
      return obj.node_factors[i].deriv(x) - di * x;
    };
    double s = 1.0;
    int k = 0;
    const double c = x0_at(i);
    for (; k < 60; ++k) {
      if (dphi(c - s) < 0 && dphi(c + s) > 0) break;
      s *= 2.0;
    }
    if (k == 60)
      throw Error("choose_domains: bracket search exceeded 60 doublings at node " +
                  std::to_string(i) + " (non-coercive input?)");
    const double blo = std::min({0.0, c - s});
    const double bhi = std::max({0.0, c + s});
    const double pad = (margin - 1.0) * (bhi - blo) * 0.5 + 1.0;
    domains.push_back(GridDomain::build(blo - pad, bhi + pad, points));
  }
  return domains;
}

GeneralMessageState init_messages_general(const PairwiseObjective& obj,
                                          const InitialMessages& init,
                                          std::vector<GridDomain> domains) {
  const int n = obj.graph.n;
  if (static_cast<int>(domains.size()) != n)
    throw Error("init_messages_general: need one domain per node");
  GeneralMessageState s;
  s.t = 0;
  s.domains = std::move(domains);
  s.messages.resize(2 * obj.graph.edge_count());
  for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
    const auto [lo, hi] = obj.graph.edges[e];
    for (int dir = 0; dir < 2; ++dir) {
      const int from = dir == 0 ? lo : hi;
      const int to = dir == 0 ? hi : lo;
      const GridDomain& d = s.domains[to];
      GridMessage msg;
      msg.values.resize(d.points);
      for (int k = 0; k < d.points; ++k)
        msg.values[k] = init.value(obj, from, to, d.xs[k]);
      const double at_zero = msg.values[d.zero_index];
      for (auto& v : msg.values) v -= at_zero;
      msg.values[d.zero_index] = 0.0;
      msg.minimizer.assign(d.points, init.x0_at(from));
      msg.spline = CubicSpline::fit(d.lo, d.h, msg.values);
      s.messages[2 * e + dir] = std::move(msg);
    }
  }
  s.x.assign(n, 0.0);
  for (int i = 0; i < n; ++i) s.x[i] = init.x0_at(i);
  return s;
}

GridMessage update_message_general(const PairwiseObjective& obj,
                                   const GeneralMessageState& s, int from,
                                   int to, const GridConfig& cfg) {
  const auto& kern = kernels::active();
  const int i = from, j = to;
  const GridDomain& di = s.domains[i];
  const GridDomain& dj = s.domains[j];

  // partially summarised objective h_i(y) = f_i(y) + sum_{u != j} J_{u->i}(y)
  std::vector<double> hvals;
  eval_node_factor(obj.node_factors[i], di, hvals);
  for (std::size_t a = 0; a < obj.graph.adj[i].size(); ++a) {
    const int u = obj.graph.adj[i][a];
    if (u == j) continue;
    const auto& msg = s.messages[directed_slot(obj.graph, u, i)];
    kern.add_inplace(hvals.data(), msg.values.data(), hvals.size());
  }
  const CubicSpline hspline = CubicSpline::fit(di.lo, di.h, hvals);

  const int e = obj.graph.edge_between(i, j);
  const OrientedEdge oe = obj.oriented(e, j);  // f_ji(x_j, y)
  const bool bilinear = obj.edge_factors[e].family == EdgeFamily::bilinear;
  const double a_e = obj.edge_factors[e].a;

  GridMessage out;
  out.values.resize(dj.points);
  out.minimizer.resize(dj.points);

  for (int k = 0; k < dj.points; ++k) {
    const double xj = dj.xs[k];
    kernels::ArgMin scan{};
    if (bilinear) {
      scan = kern.scaled_argmin(hvals.data(), di.xs.data(), a_e * xj,
                                hvals.size());
    } else {
      scan.value = kInf;
      scan.index = -1;
      for (int k2 = 0; k2 < di.points; ++k2) {
        const double v = hvals[k2] + oe.value(xj, di.xs[k2]);
        if (v < scan.value) {
          scan.value = v;
          scan.index = k2;
        }
      }
    }
    if (scan.index <= 0 || scan.index >= di.points - 1)
      throw DomainTooSmallError(
          i, di.xs[scan.index],
          "message " + std::to_string(i) + "->" + std::to_string(j) +
              " at receiver x = " + std::to_string(xj));

    const double ylo = di.xs[scan.index - 1];
    const double yhi = di.xs[scan.index + 1];
    double ystar;
    double value;
    if (bilinear) {
      const double slope = a_e * xj;
      const std::function<double(double)> phi = [&](double y) {
        return hspline.value(y) + slope * y;
      };
      ystar = polish(
          di.xs[scan.index], ylo, yhi,
          [&](double y) { return hspline.deriv(y) + slope; },
          [&](double y) { return hspline.second(y); }, cfg.inner_grad_tol, phi);
      value = hspline.value(ystar) + slope * ystar;
    } else {
      const std::function<double(double)> phi = [&](double y) {
        return hspline.value(y) + oe.value(xj, y);
      };
      ystar = polish(
          di.xs[scan.index], ylo, yhi,
          [&](double y) { return hspline.deriv(y) + oe.d_send(xj, y); },
          [&](double y) { return hspline.second(y) + oe.d2_send(xj, y); },
          cfg.inner_grad_tol, phi);
      value = phi(ystar);
    }
    if (!std::isfinite(value))
      throw Error("non-finite message value on edge " + std::to_string(i) +
                  "->" + std::to_string(j));
    out.values[k] = value;
    out.minimizer[k] = ystar;
  }

  const double at_zero = out.values[dj.zero_index];
  for (auto& v : out.values) v -= at_zero;
  out.values[dj.zero_index] = 0.0;
  out.spline = CubicSpline::fit(dj.lo, dj.h, out.values);
  return out;
}

namespace {

/// gamma_i = f_i + sum of incoming messages on node i's grid.
void gamma_values(const PairwiseObjective& obj, const GeneralMessageState& s,
                  int node, std::vector<double>& gamma,
                  std::vector<double>& sum_j) {
  const auto& kern = kernels::active();
  const GridDomain& d = s.domains[node];
  sum_j.assign(d.points, 0.0);
  for (std::size_t a = 0; a < obj.graph.adj[node].size(); ++a) {
    const int u = obj.graph.adj[node][a];
    const auto& msg = s.messages[directed_slot(obj.graph, u, node)];
    kern.add_inplace(sum_j.data(), msg.values.data(), sum_j.size());
  }
  eval_node_factor(obj.node_factors[node], d, gamma);
  kern.add_inplace(gamma.data(), sum_j.data(), gamma.size());
}

double extract_from_gamma(const PairwiseObjective& obj,
                          const GeneralMessageState& s, int node,
                          const GridConfig& cfg,
                          const std::vector<double>& gamma,
                          const std::vector<double>& sum_j) {
  const auto& kern = kernels::active();
  const GridDomain& d = s.domains[node];
  const auto scan =
      kern.scaled_argmin(gamma.data(), d.xs.data(), 0.0, gamma.size());
  if (scan.index <= 0 || scan.index >= d.points - 1)
    throw DomainTooSmallError(node, d.xs[scan.index],
                              "local objective of node " + std::to_string(node));
  const CubicSpline sj = CubicSpline::fit(d.lo, d.h, sum_j);
  const ScalarFactor& f = obj.node_factors[node];
  const std::function<double(double)> phi = [&](double x) {
    return f.value(x) + sj.value(x);
  };
  return polish(
      d.xs[scan.index], d.xs[scan.index - 1], d.xs[scan.index + 1],
      [&](double x) { return f.deriv(x) + sj.deriv(x); },
      [&](double x) { return f.second(x) + sj.second(x); }, cfg.inner_grad_tol,
      phi);
}

/// Curvature checks for one freshly computed message (see GeneralChecks);
/// needs the pre-update state for the denominators.
void check_message(const PairwiseObjective& obj, const GeneralMessageState& s,
                   int from, int to, const GridMessage& msg, double lambda,
                   const std::vector<double>& w, GeneralChecks& checks) {
  const int i = from, j = to;
  const GridDomain& dj = s.domains[j];
  const int e = obj.graph.edge_between(i, j);
  const OrientedEdge oe = obj.oriented(e, j);
  const double h = dj.h;
  const double envelope_tol = 10.0 * h * h;
  const double slope_tol = 100.0 * h * h;

  // a_{i->j}(x_j) needs the incoming splines of the pre-update state
  std::vector<const CubicSpline*> incoming;
  for (std::size_t a = 0; a < obj.graph.adj[i].size(); ++a) {
    const int u = obj.graph.adj[i][a];
    if (u == j) continue;
    incoming.push_back(&s.messages[directed_slot(obj.graph, u, i)].spline);
  }

  for (int k = 1; k + 1 < dj.points; ++k) {
    const double xj = dj.xs[k];
    const double ystar = msg.minimizer[k];
    const double d2j =
        (msg.values[k - 1] - 2.0 * msg.values[k] + msg.values[k + 1]) / (h * h);
    const double f11 = oe.d2_recv(xj, ystar);
    const double mixed = oe.d12(xj, ystar);
    const double lo_env = -lambda * w[i] / w[j] * std::fabs(mixed);
    const double rel = d2j - f11;
    const double excess = std::max(rel - 0.0, lo_env - rel);
    checks.envelope_excess_ratio =
        std::max(checks.envelope_excess_ratio, excess / envelope_tol);

    double a_den = obj.node_factors[i].second(ystar) + oe.d2_send(xj, ystar);
    for (const auto* sp : incoming) a_den += sp->second(ystar);
    const double predicted = -mixed / a_den;
    const double measured =
        (msg.minimizer[k + 1] - msg.minimizer[k - 1]) / (2.0 * h);
    const double rel_err =
        std::fabs(measured - predicted) / std::max(std::fabs(predicted), 1e-6);
    checks.slope_err_ratio = std::max(checks.slope_err_ratio, rel_err / slope_tol);
  }
}

}  // namespace

double extract_estimate_general(const PairwiseObjective& obj,
                                const GeneralMessageState& s, int node,
                                const GridConfig& cfg) {
  std::vector<double> gamma, sum_j;
  gamma_values(obj, s, node, gamma, sum_j);
  return extract_from_gamma(obj, s, node, cfg, gamma, sum_j);
}

GeneralMessageState step_general(const PairwiseObjective& obj,
                                 const GeneralMessageState& s,
                                 const GridConfig& cfg,
                                 const DominanceCertificate* cert,
                                 GeneralChecks* checks) {
  GeneralMessageState next;
  next.t = s.t + 1;
  next.domains = s.domains;
  next.x.resize(obj.graph.n);

  std::vector<double> gamma, sum_j;
  for (int i = 0; i < obj.graph.n; ++i) {
    gamma_values(obj, s, i, gamma, sum_j);
    if (checks != nullptr) {
      const double h2 = s.domains[i].h * s.domains[i].h;
      for (int k = 1; k + 1 < s.domains[i].points; ++k) {
        const double c = (gamma[k - 1] - 2.0 * gamma[k] + gamma[k + 1]) / h2;
        checks->gamma_curvature_min = std::min(checks->gamma_curvature_min, c);
      }
    }
    next.x[i] = extract_from_gamma(obj, s, i, cfg, gamma, sum_j);
  }

  next.messages.resize(s.messages.size());
  for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
    const auto [lo, hi] = obj.graph.edges[e];
    for (int dir = 0; dir < 2; ++dir) {
      const int from = dir == 0 ? lo : hi;
      const int to = dir == 0 ? hi : lo;
      GridMessage msg = update_message_general(obj, s, from, to, cfg);
      if (checks != nullptr && cert != nullptr)
        check_message(obj, s, from, to, msg, cert->lambda, cert->w, *checks);
      next.messages[2 * e + dir] = std::move(msg);
    }
  }
  return next;
}

namespace {

void dump_messages(const PairwiseObjective& obj, const GeneralMessageState& s,
                   const GeneralRunOptions& opts) {
  if (opts.dump_dir.empty()) return;
  if (!opts.dump_iterations.empty() &&
      std::find(opts.dump_iterations.begin(), opts.dump_iterations.end(), s.t) ==
          opts.dump_iterations.end())
    return;
  std::filesystem::create_directories(opts.dump_dir);
  for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
    const auto [lo, hi] = obj.graph.edges[e];
    for (int dir = 0; dir < 2; ++dir) {
      const int from = dir == 0 ? lo : hi;
      const int to = dir == 0 ? hi : lo;
      const auto& msg = s.messages[2 * e + dir];
      const auto& d = s.domains[to];
      std::ofstream out(opts.dump_dir + "/msg_t" + std::to_string(s.t) + "_" +
                        std::to_string(from + 1) + "to" + std::to_string(to + 1) +
                        ".csv");
      if (!out) throw Error("cannot write message dump under " + opts.dump_dir);
      out.precision(17);
      out << "x,value,minimizer\n";
      for (int k = 0; k < d.points; ++k)
        out << d.xs[k] << "," << msg.values[k] << "," << msg.minimizer[k] << "\n";
    }
  }
}

GeneralMessageState resample_refined(const PairwiseObjective& obj,
                                     const GeneralMessageState& s) {
  GeneralMessageState r;
  r.t = s.t;
  r.x = s.x;
  r.domains.reserve(s.domains.size());
  for (const auto& d : s.domains) r.domains.push_back(d.refined());
  r.messages.resize(s.messages.size());
  for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
    const auto [lo, hi] = obj.graph.edges[e];
    for (int dir = 0; dir < 2; ++dir) {
      const int to = dir == 0 ? hi : lo;
      const GridDomain& d = r.domains[to];
      const auto& old = s.messages[2 * e + dir];
      GridMessage msg;
      msg.values.resize(d.points);
      msg.minimizer.resize(d.points);
      for (int k = 0; k < d.points; ++k) {
        msg.values[k] = old.spline.value(d.xs[k]);
        msg.minimizer[k] =
            old.minimizer[std::min(k / 2, static_cast<int>(old.minimizer.size()) - 1)];
      }
      const double at_zero = msg.values[d.zero_index];
      for (auto& v : msg.values) v -= at_zero;
      msg.values[d.zero_index] = 0.0;
      msg.spline = CubicSpline::fit(d.lo, d.h, msg.values);
      r.messages[2 * e + dir] = std::move(msg);
    }
  }
  return r;
}

}  // namespace

GeneralRunResult run_general(const PairwiseObjective& obj,
                             const InitialMessages& init,
                             const GeneralRunOptions& opts) {
  if (opts.t_max < 1) throw Error("run_general: t_max must be >= 1");
  if (opts.cert != nullptr &&
      opts.cert->w.size() != static_cast<std::size_t>(obj.graph.n))
    throw Error("run_general: certificate scaling has wrong length");
  if (opts.x_star != nullptr &&
      opts.x_star->size() != static_cast<std::size_t>(obj.graph.n))
    throw Error("run_general: x_star has wrong length");
  const auto& kern = kernels::active();

  GeneralRunResult result;
  result.trace.n = obj.graph.n;

  std::vector<double> x0(obj.graph.n, 0.0);
  for (int i = 0; i < obj.graph.n; ++i) x0[i] = init.x0_at(i);
  auto domains =
      choose_domains(obj, x0, opts.grid.margin, opts.grid.points, opts.cert);
  GeneralMessageState state =
      init_messages_general(obj, init, std::move(domains));

  std::vector<double> ones;
  const std::vector<double>* w = nullptr;
  if (opts.cert != nullptr) {
    w = &opts.cert->w;
  } else {
    ones.assign(obj.graph.n, 1.0);
    w = &ones;
  }

  const auto record = [&](const GeneralMessageState& st, double step) {
    TraceRow row;
    row.t = st.t;
    row.x = st.x;
    row.step_inf = step;
    row.residual_inf = obj.gradient_inf(st.x);
    row.grid_points = st.domains.front().points;
    if (opts.x_star != nullptr)
      row.err_weighted = kern.max_weighted_abs_diff(
          st.x.data(), opts.x_star->data(), w->data(), st.x.size());
    result.trace.rows.push_back(std::move(row));
  };

  record(state, kNaN);
  dump_messages(obj, state, opts);
  for (int t = 1; t <= opts.t_max; ++t) {
    GeneralMessageState next =
        step_general(obj, state, opts.grid, opts.cert,
                     opts.cert != nullptr ? &result.checks : nullptr);
    const double step =
        kern.max_abs_diff(next.x.data(), state.x.data(), next.x.size());
    state = std::move(next);
    record(state, step);
    dump_messages(obj, state, opts);
    if (step <= opts.tol) {
      result.trace.converged = true;
      break;
    }
    // stalling above tol: the step norm stopped improving; refine once
    const auto& rows = result.trace.rows;
    const std::size_t window = static_cast<std::size_t>(opts.grid.stall_window);
    if (state.domains.front().points < opts.grid.max_points &&
        rows.size() >= window + 2) {
      const double prev = rows[rows.size() - 1 - window].step_inf;
      if (std::isfinite(prev) && step > opts.grid.stall_ratio * prev) {
        state = resample_refined(obj, state);
        ++result.refinements;
      }
    }
  }
  result.state = std::move(state);
  return result;
}

}  // namespace minsum
