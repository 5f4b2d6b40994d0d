#include "minsum/dominance.hpp"

#include <algorithm>
#include <cmath>

namespace minsum {

namespace {

constexpr int kPowerIterationCap = 10000;
constexpr double kSpreadTol = 1e-12;

/// Connected components using only edges with a nonzero coefficient (zero
/// couplings do not link nodes for Perron purposes).
std::vector<int> coupling_components(const QuadraticProblem& q) {
  std::vector<int> label(q.n(), -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < q.n(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (std::size_t k = 0; k < q.graph.adj[v].size(); ++k) {
        const int u = q.graph.adj[v][k];
        const int e = q.graph.adj_edge[v][k];
        if (q.offdiag[e] != 0.0 && label[u] < 0) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

struct ComponentPerron {
  double lambda = 0;
  int iterations = 0;
};

/// Power iteration for the Perron pair of B = D^-1 |A_off| restricted to one
/// component. B is similar to the symmetric C = D^-1/2 |A_off| D^-1/2 via
/// D^1/2, so the iteration runs on C (same spectrum, componentwise-identical
/// Collatz-Wielandt ratios) and maps the vector back at the end. A positive
/// shift keeps bipartite components aperiodic. Convergence is declared when
/// the ratio spread max_i (By)_i/y_i - min_i (By)_i/y_i is below tolerance;
/// the reported lambda is the max ratio, so the certificate's row
/// inequalities hold for the returned w by construction.
ComponentPerron perron_component(const QuadraticProblem& q,
                                 const std::vector<int>& members,
                                 std::vector<double>& w_out) {
  const std::size_t m = members.size();
  std::vector<int> pos(q.n(), -1);
  for (std::size_t k = 0; k < m; ++k) pos[members[k]] = static_cast<int>(k);

  std::vector<double> sqrt_d(m);
  for (std::size_t k = 0; k < m; ++k) sqrt_d[k] = std::sqrt(q.diag[members[k]]);

  // start vector all-ones in B coordinates, i.e. y = D^1/2 * 1
  std::vector<double> y = sqrt_d;
  double ymax = *std::max_element(y.begin(), y.end());
  for (auto& v : y) v /= ymax;

  std::vector<double> z(m);
  const auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
    double row_sum_max = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const int i = members[k];
      double acc = 0;
      for (std::size_t a = 0; a < q.graph.adj[i].size(); ++a) {
        const int u = q.graph.adj[i][a];
        const int e = q.graph.adj_edge[i][a];
        if (q.offdiag[e] == 0.0) continue;
        acc += std::fabs(q.offdiag[e]) / (sqrt_d[k] * sqrt_d[pos[u]]) * in[pos[u]];
      }
      out[k] = acc;
      row_sum_max = std::max(row_sum_max, acc);
    }
    return row_sum_max;
  };

  // cheap upper bound on rho for the shift scale
  std::vector<double> ones(m, 1.0);
  std::vector<double> rows(m);
  const double rho_ub = matvec(ones, rows);
  const double shift = 0.25 * rho_ub + 1e-3;

  double lambda = 0;
  int iter = 0;
  bool converged = false;
  for (iter = 1; iter <= kPowerIterationCap; ++iter) {
    matvec(y, z);
    double rmax = -kInf, rmin = kInf;
    for (std::size_t k = 0; k < m; ++k) {
      const double r = z[k] / y[k];
      rmax = std::max(rmax, r);
      rmin = std::min(rmin, r);
    }
    lambda = rmax;
    if (rmax - rmin <= kSpreadTol * std::max(1.0, rmax)) {
      converged = true;
      break;
    }
    double norm = 0;
    for (std::size_t k = 0; k < m; ++k) {
      y[k] = z[k] + shift * y[k];
      norm = std::max(norm, y[k]);
    }
    for (auto& v : y) v /= norm;
  }
  if (!converged)
    throw PowerIterationError(
        "power iteration did not converge within " +
        std::to_string(kPowerIterationCap) +
        " iterations; dominance is indeterminate for this problem");

  for (std::size_t k = 0; k < m; ++k) w_out[members[k]] = y[k] / sqrt_d[k];
  return {lambda, iter};
}

}  // namespace

QuadraticCertifyResult certify_quadratic(const QuadraticProblem& q) {
  const auto label = coupling_components(q);
  const int n_comp = label.empty() ? 0 : 1 + *std::max_element(label.begin(), label.end());
  std::vector<std::vector<int>> members(n_comp);
  for (int i = 0; i < q.n(); ++i) members[label[i]].push_back(i);

  std::vector<double> w(q.n(), 1.0);
  for (const auto& comp : members) {
    if (comp.size() == 1) {
      w[comp[0]] = 1.0;  // isolated node, zero row of B
      continue;
    }
    perron_component(q, comp, w);
    double cmax = 0;
    for (int i : comp) cmax = std::max(cmax, w[i]);
    for (int i : comp) w[i] /= cmax;
  }

  // lambda as the achieved row maximum for the final w: the certificate's
  // row inequalities then hold exactly as computed.
  double lambda = 0;
  for (int i = 0; i < q.n(); ++i) {
    double row = 0;
    for (std::size_t a = 0; a < q.graph.adj[i].size(); ++a) {
      const int u = q.graph.adj[i][a];
      const int e = q.graph.adj_edge[i][a];
      row += w[u] * std::fabs(q.offdiag[e]);
    }
    lambda = std::max(lambda, row / (w[i] * q.diag[i]));
  }

  if (lambda < 1.0) {
    DominanceCertificate cert;
    cert.lambda = lambda;
    cert.w = std::move(w);
    cert.kind = DominanceCertificate::Kind::exact_quadratic;
    cert.sample_count = 0;
    return cert;
  }
  DominanceRefutation ref;
  ref.lambda_star = lambda;
  ref.w = std::move(w);
  return ref;
}

std::vector<double> dominance_margin(const QuadraticProblem& q, double lambda,
                                     const std::vector<double>& w) {
  if (w.size() != static_cast<std::size_t>(q.n()))
    throw Error("dominance_margin: w has wrong length");
  for (double v : w)
    if (!(v > 0)) throw Error("dominance_margin: w must be positive");
  std::vector<double> slack(q.n());
  for (int i = 0; i < q.n(); ++i) {
    double row = 0;
    for (std::size_t a = 0; a < q.graph.adj[i].size(); ++a) {
      const int u = q.graph.adj[i][a];
      const int e = q.graph.adj_edge[i][a];
      row += w[u] * std::fabs(q.offdiag[e]);
    }
    slack[i] = lambda * w[i] * q.diag[i] - row;
  }
  return slack;
}

namespace {

/// Generalised golden-ratio (Roberts) low-discrepancy sequence in [0,1)^d.
class QuasiRandom {
 public:
  explicit QuasiRandom(int dim) : alpha_(dim), state_(dim, 0.5) {
    // unique positive root of x^{d+1} = x + 1
    double phi = 1.5;
    for (int it = 0; it < 64; ++it)
      phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    double p = 1.0;
    for (int k = 0; k < dim; ++k) {
      p /= phi;
      alpha_[k] = p;
    }
  }
  const std::vector<double>& next() {
    for (std::size_t k = 0; k < state_.size(); ++k) {
      state_[k] += alpha_[k];
      state_[k] -= std::floor(state_[k]);
    }
    return state_;
  }

 private:
  std::vector<double> alpha_;
  std::vector<double> state_;
};

/// First violated row at x, if any.
std::optional<DominanceWitness> violated_row(const PairwiseObjective& obj,
                                             const std::vector<double>& x,
                                             double lambda,
                                             const std::vector<double>& w) {
  for (int i = 0; i < obj.graph.n; ++i) {
    double lhs = 0;
    for (std::size_t a = 0; a < obj.graph.adj[i].size(); ++a) {
      const int u = obj.graph.adj[i][a];
      const int e = obj.graph.adj_edge[i][a];
      lhs += w[u] * std::fabs(obj.oriented(e, i).d12(x[i], x[u]));
    }
    const double curv = obj.partial_hessian(x, i, i);
    if (!std::isfinite(curv) || !std::isfinite(lhs))
      throw Error("non-finite second derivative at a sample point (node " +
                  std::to_string(i) + ")");
    const double rhs = lambda * w[i] * curv;
    if (lhs > rhs * (1.0 + 1e-12) + 1e-15)
      return DominanceWitness{i, x, lhs, rhs};
  }
  return std::nullopt;
}

}  // namespace

GeneralCertifyResult certify_general(const PairwiseObjective& obj,
                                     const std::vector<double>& box_lo,
                                     const std::vector<double>& box_hi,
                                     long samples, double lambda,
                                     const std::vector<double>& w) {
  const int n = obj.graph.n;
  if (static_cast<int>(box_lo.size()) != n || static_cast<int>(box_hi.size()) != n)
    throw Error("certify_general: box has wrong dimension");
  if (samples < 1) throw Error("certify_general: samples must be >= 1");
  if (static_cast<int>(w.size()) != n) throw Error("certify_general: w has wrong length");
  for (int i = 0; i < n; ++i) {
    if (!(w[i] > 0)) throw Error("certify_general: w must be positive");
    if (!std::isfinite(box_lo[i]) || !std::isfinite(box_hi[i]) || box_lo[i] > box_hi[i])
      throw Error("certify_general: box must be finite with lo <= hi");
  }

  GeneralCertifyResult res;

  // Closed-form global check when every factor carries exact curvature
  // bounds: sup of each |d12| against the infimum of the diagonal curvature.
  if (obj.all_builtin()) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      double lhs = 0;
      for (std::size_t a = 0; a < obj.graph.adj[i].size(); ++a) {
        const int u = obj.graph.adj[i][a];
        const int e = obj.graph.adj_edge[i][a];
        lhs += w[u] * obj.edge_factors[e].mixed_abs_sup();
      }
      const double rhs = lambda * w[i] * obj.node_curvature_range(i).lo;
      if (lhs > rhs * (1.0 + 1e-12) + 1e-15) ok = false;
    }
    if (ok) {
      res.pass = true;
      res.global = true;
      return res;
    }
  }

  std::vector<double> mid(n);
  for (int i = 0; i < n; ++i) mid[i] = 0.5 * (box_lo[i] + box_hi[i]);

  // deterministic candidates first: centre, adversarial curvature point,
  // per-edge slice corners; then the quasi-random stream
  const auto check = [&](const std::vector<double>& x) {
    ++res.samples_checked;
    if (!res.witness) res.witness = violated_row(obj, x, lambda, w);
    return res.witness.has_value();
  };

  if (check(mid)) {
    res.pass = false;
    return res;
  }
  std::vector<double> adv(n);
  for (int i = 0; i < n; ++i)
    adv[i] = obj.node_factors[i].curvature_argmin(box_lo[i], box_hi[i]);
  if (check(adv)) {
    res.pass = false;
    return res;
  }
  for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
    const auto [lo, hi] = obj.graph.edges[e];
    for (int ci = 0; ci < 2; ++ci) {
      for (int cj = 0; cj < 2; ++cj) {
        std::vector<double> x = mid;
        x[lo] = ci ? box_hi[lo] : box_lo[lo];
        x[hi] = cj ? box_hi[hi] : box_lo[hi];
        if (check(x)) {
          res.pass = false;
          return res;
        }
      }
    }
  }
  QuasiRandom seq(n);
  std::vector<double> x(n);
  for (long k = 0; k < samples; ++k) {
    const auto& u = seq.next();
    for (int i = 0; i < n; ++i) x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * u[i];
    if (check(x)) {
      res.pass = false;
      return res;
    }
  }
  res.pass = true;
  res.global = false;
  return res;
}

double estimate_lambda_general(const PairwiseObjective& obj,
                               const std::vector<double>& w) {
  double lambda = 0;
  for (int i = 0; i < obj.graph.n; ++i) {
    double lhs = 0;
    for (std::size_t a = 0; a < obj.graph.adj[i].size(); ++a) {
      const int u = obj.graph.adj[i][a];
      const int e = obj.graph.adj_edge[i][a];
      lhs += w[u] * obj.edge_factors[e].mixed_abs_sup();
    }
    const double curv = obj.node_curvature_range(i).lo;
    if (lhs == 0.0) continue;
    if (!(curv > 0)) return kInf;
    lambda = std::max(lambda, lhs / (w[i] * curv));
  }
  return lambda;
}

}  // namespace minsum
