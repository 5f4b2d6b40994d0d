// Command-line front end: solve / certify / exact / tree / bound / gen /
// check over the text problem format. Exit codes: 0 success, 1 violated
// bound or invariant (including dominance refutations and well-posedness
// aborts), 2 input error.

#include <CLI11.hpp>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "minsum/bounds.hpp"
#include "minsum/computation_tree.hpp"
#include "minsum/dominance.hpp"
#include "minsum/general_minsum.hpp"
#include "minsum/kernels.hpp"
#include "minsum/problem_io.hpp"
#include "minsum/quadratic_minsum.hpp"
#include "minsum/reference.hpp"
#include "minsum/trace.hpp"

namespace {

using namespace minsum;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

std::vector<double> parse_x0(const std::string& text, int n) {
  if (text.empty()) return std::vector<double>(n, 0.0);
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (static_cast<int>(out.size()) == 1) out.assign(n, out[0]);
  if (static_cast<int>(out.size()) != n)
    throw Error("--x0 needs 1 or n comma-separated values");
  return out;
}

void print_vector(const std::string& label, const std::vector<double>& v) {
  std::cout << label;
  const std::size_t shown = std::min<std::size_t>(v.size(), 16);
  for (std::size_t i = 0; i < shown; ++i) std::cout << " " << v[i];
  if (shown < v.size()) std::cout << " ... (" << v.size() << " entries)";
  std::cout << "\n";
}

void dump_trace(const SolveTrace& trace, const std::string& path, bool full_x) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace file '" + path + "'");
  write_trace_csv(out, trace, full_x);
}

struct SolveSettings {
  std::string file, trace_out, x0_text, cert_file, dump_dir, dump_at;
  int t_max = 60;
  double tol = 1e-10;
  int grid_points = 1025;
  double margin = 2.0;
  bool force_general = false;
  bool full_x = false;
};

int run_solve(const SolveSettings& cfg) {
  const auto parsed = parse_problem_file(cfg.file);
  const bool quadratic_path =
      std::holds_alternative<QuadraticProblem>(parsed) && !cfg.force_general;

  if (quadratic_path) {
    const auto& q = std::get<QuadraticProblem>(parsed);
    const auto init = InitialMessages::from_x0(parse_x0(cfg.x0_text, q.n()));

    DominanceCertificate cert;
    bool have_cert = false;
    if (!cfg.cert_file.empty()) {
      cert = parse_certificate_file(cfg.cert_file);
      have_cert = true;
    } else {
      const auto res = certify_quadratic(q);
      if (const auto* c = std::get_if<DominanceCertificate>(&res)) {
        cert = *c;
        have_cert = true;
      } else {
        std::cout << "note: no dominance certificate (lambda* = "
                  << std::get<DominanceRefutation>(res).lambda_star
                  << "); solving without convergence guarantees\n";
      }
    }

    std::vector<double> x_star;
    try {
      x_star = solve_quadratic_direct(q);
    } catch (const Error&) {
      // not positive definite; run without the error column
    }

    QuadraticRunOptions opts;
    opts.t_max = cfg.t_max;
    opts.tol = cfg.tol;
    opts.cert = have_cert ? &cert : nullptr;
    opts.x_star = x_star.empty() ? nullptr : &x_star;
    try {
      auto result = run_quadratic(q, init, opts);
      if (have_cert && !x_star.empty()) {
        const auto ctx = make_bound_context(q, cert, init,
                                            BoundKind::quadratic_eq36, x_star);
        annotate_trace(result.trace, ctx);
      }
      const auto& last = result.trace.last();
      std::cout << "path quadratic\n";
      std::cout << "iterations " << last.t
                << (result.trace.converged ? " (converged)" : " (t_max reached)")
                << "\n";
      print_vector("x", last.x);
      std::cout << "residual_inf " << last.residual_inf << "\n";
      dump_trace(result.trace, cfg.trace_out, cfg.full_x);
      if (have_cert && !result.invariants_ok) {
        std::cout << "message invariants violated (min slack "
                  << result.invariant_min_slack << ")\n";
        return kExitViolation;
      }
      return kExitOk;
    } catch (const WellPosednessError& err) {
      std::cout << "aborted: " << err.what() << "\n";
      return kExitViolation;
    }
  }

  PairwiseObjective obj = std::holds_alternative<QuadraticProblem>(parsed)
                              ? std::get<QuadraticProblem>(parsed).to_pairwise()
                              : std::get<PairwiseObjective>(parsed);
  const auto init = InitialMessages::from_x0(parse_x0(cfg.x0_text, obj.graph.n));

  DominanceCertificate cert;
  bool have_cert = false;
  if (!cfg.cert_file.empty()) {
    cert = parse_certificate_file(cfg.cert_file);
    have_cert = true;
  } else {
    std::vector<double> ones(obj.graph.n, 1.0);
    const double lam = estimate_lambda_general(obj, ones);
    if (lam < 1.0) {
      cert.lambda = lam;
      cert.w = ones;
      cert.kind = DominanceCertificate::Kind::sampled;
      have_cert = true;
    }
  }

  std::vector<double> x_star;
  try {
    std::vector<double> start(obj.graph.n, 0.0);
    for (int i = 0; i < obj.graph.n; ++i) start[i] = init.x0_at(i);
    x_star = solve_general_newton(obj, start);
  } catch (const Error&) {
  }

  GeneralRunOptions opts;
  opts.t_max = cfg.t_max;
  opts.tol = cfg.tol;
  opts.grid.points = cfg.grid_points;
  opts.grid.margin = cfg.margin;
  opts.cert = have_cert ? &cert : nullptr;
  opts.x_star = x_star.empty() ? nullptr : &x_star;
  opts.dump_dir = cfg.dump_dir;
  if (!cfg.dump_at.empty()) {
    std::stringstream ss(cfg.dump_at);
    std::string tok;
    while (std::getline(ss, tok, ',')) opts.dump_iterations.push_back(std::stoi(tok));
  }
  auto result = run_general(obj, init, opts);
  if (have_cert && !x_star.empty()) {
    const auto ctx =
        make_bound_context(obj, cert, init, BoundKind::general_eq14, x_star);
    annotate_trace(result.trace, ctx);
  }
  const auto& last = result.trace.last();
  std::cout << "path general (grid)\n";
  std::cout << "iterations " << last.t
            << (result.trace.converged ? " (converged)" : " (t_max reached)")
            << "\n";
  print_vector("x", last.x);
  std::cout << "gradient_inf " << last.residual_inf << "\n";
  std::cout << "grid_points " << last.grid_points << "\n";
  dump_trace(result.trace, cfg.trace_out, cfg.full_x);
  if (have_cert) {
    if (!(result.checks.gamma_curvature_min > 0) ||
        result.checks.envelope_excess_ratio > 1.0) {
      std::cout << "curvature invariants violated (gamma_min "
                << result.checks.gamma_curvature_min << ", envelope ratio "
                << result.checks.envelope_excess_ratio << ")\n";
      return kExitViolation;
    }
  }
  return kExitOk;
}

int run_certify(const std::string& file, const std::string& out,
                double box_halfwidth, long samples, double lambda_opt,
                bool have_lambda) {
  const auto parsed = parse_problem_file(file);
  if (std::holds_alternative<QuadraticProblem>(parsed)) {
    const auto& q = std::get<QuadraticProblem>(parsed);
    const auto res = certify_quadratic(q);
    if (const auto* cert = std::get_if<DominanceCertificate>(&res)) {
      std::cout << "certificate exact_quadratic\n";
      std::cout << "lambda " << cert->lambda << "\n";
      if (cert->lambda == 0.0)
        std::cout << "note: lambda = 0 (no couplings); the dominance "
                     "definition asks for lambda > 0, and the rate bound "
                     "degenerates to exact convergence at t = 1\n";
      print_vector("w", cert->w);
      print_vector("margins", dominance_margin(q, cert->lambda, cert->w));
      if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw Error("cannot write certificate file '" + out + "'");
        write_certificate(os, *cert);
      }
      return kExitOk;
    }
    const auto& ref = std::get<DominanceRefutation>(res);
    std::cout << "refutation\n";
    std::cout << "lambda_star " << ref.lambda_star << "\n";
    print_vector("w", ref.w);
    return kExitViolation;
  }

  const auto& obj = std::get<PairwiseObjective>(parsed);
  std::vector<double> w(obj.graph.n, 1.0);
  double lambda = lambda_opt;
  if (!have_lambda) {
    lambda = estimate_lambda_general(obj, w);
    if (!(lambda < 1.0)) {
      std::cout << "refutation (closed-form)\n";
      std::cout << "lambda_star " << lambda << "\n";
      return kExitViolation;
    }
    std::cout << "lambda (closed-form row bound) " << lambda << "\n";
  }
  std::vector<double> lo(obj.graph.n, -box_halfwidth),
      hi(obj.graph.n, box_halfwidth);
  const auto res = certify_general(obj, lo, hi, samples, lambda, w);
  if (res.pass) {
    std::cout << (res.global ? "pass (global, closed-form curvature bounds)\n"
                             : "pass (sampled check, not a proof)\n");
    std::cout << "lambda " << lambda << "\n";
    std::cout << "samples_checked " << res.samples_checked << "\n";
    if (!out.empty()) {
      DominanceCertificate cert;
      cert.lambda = lambda;
      cert.w = w;
      cert.kind = DominanceCertificate::Kind::sampled;
      cert.sample_count = res.samples_checked;
      std::ofstream os(out);
      if (!os) throw Error("cannot write certificate file '" + out + "'");
      write_certificate(os, cert);
    }
    return kExitOk;
  }
  std::cout << "witness: row " << res.witness->row + 1 << " lhs "
            << res.witness->lhs << " > rhs " << res.witness->rhs << "\n";
  print_vector("x", res.witness->x);
  return kExitViolation;
}

int run_exact(const std::string& file) {
  const auto parsed = parse_problem_file(file);
  if (std::holds_alternative<QuadraticProblem>(parsed)) {
    const auto& q = std::get<QuadraticProblem>(parsed);
    const auto x = solve_quadratic_direct(q);
    print_vector("x_star", x);
    std::cout << "residual_inf " << q.residual_inf(x) << "\n";
    return kExitOk;
  }
  const auto& obj = std::get<PairwiseObjective>(parsed);
  const auto x = solve_general_newton(obj, {});
  print_vector("x_star", x);
  std::cout << "gradient_inf " << obj.gradient_inf(x) << "\n";
  return kExitOk;
}

int run_tree(const std::string& file, int root1, int depth, bool do_check) {
  const auto parsed = parse_problem_file(file);
  const Graph& g = std::holds_alternative<QuadraticProblem>(parsed)
                       ? std::get<QuadraticProblem>(parsed).graph
                       : std::get<PairwiseObjective>(parsed).graph;
  const int root = root1 - 1;
  if (root < 0 || root >= g.n) throw Error("--root out of range");
  const auto projected = projected_tree_nodes(g, root, depth);
  std::cout << "projected_nodes " << projected << "\n";
  if (projected > 200000) {
    std::cout
        << "refusing to build: projected size exceeds the 200000-node guardrail\n";
    return kExitInput;
  }
  const auto tree = build_tree(g, root, depth);
  std::cout << "nodes " << tree.nodes.size() << "\n";
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const auto& nd = tree.nodes[k];
    std::cout << "node " << k + 1 << " sigma " << nd.sigma + 1 << " depth "
              << nd.depth << " parent " << nd.parent + 1 << "\n";
  }
  if (!do_check) return kExitOk;
  if (std::holds_alternative<QuadraticProblem>(parsed)) {
    const auto& q = std::get<QuadraticProblem>(parsed);
    const auto res =
        key_property_quadratic(q, InitialMessages::zero(q.n()), root, depth);
    std::cout << "x_tree " << res.x_root_tree << "\n";
    std::cout << "x_loopy " << res.x_root_loopy << "\n";
    std::cout << "diff " << res.diff << "\n";
    return res.diff <= 1e-9 ? kExitOk : kExitViolation;
  }
  const auto& obj = std::get<PairwiseObjective>(parsed);
  const auto res =
      key_property_general(obj, InitialMessages::zero(obj.graph.n), root, depth);
  std::cout << "x_tree " << res.x_root_tree << "\n";
  std::cout << "x_loopy " << res.x_root_loopy << "\n";
  std::cout << "diff " << res.diff << "\n";
  return res.diff <= 1e-5 ? kExitOk : kExitViolation;
}

int run_bound(const std::string& file, const std::string& kind_name,
              const std::string& x0_text, int t_max, const std::string& out) {
  const auto parsed = parse_problem_file(file);
  if (!std::holds_alternative<QuadraticProblem>(parsed))
    throw Error("bound works on quadratic files; use 'check' for general runs");
  const auto& q = std::get<QuadraticProblem>(parsed);
  const auto init = InitialMessages::from_x0(parse_x0(x0_text, q.n()));

  const auto res = certify_quadratic(q);
  const auto* cert = std::get_if<DominanceCertificate>(&res);
  if (cert == nullptr) {
    std::cout << "refutation: lambda_star "
              << std::get<DominanceRefutation>(res).lambda_star
              << "; no bound applies\n";
    return kExitViolation;
  }

  BoundKind kind = BoundKind::quadratic_eq36;
  if (kind_name == "eq14") kind = BoundKind::general_eq14;
  else if (kind_name == "eq15") kind = BoundKind::general_simplified_eq15;
  else if (kind_name == "eq35") kind = BoundKind::quadratic_eq35;
  else if (kind_name == "eq36") kind = BoundKind::quadratic_eq36;
  else throw Error("unknown --kind '" + kind_name + "'");

  const auto x_star = solve_quadratic_direct(q);
  QuadraticRunOptions opts;
  opts.t_max = t_max;
  opts.tol = 0.0;
  opts.cert = cert;
  opts.x_star = &x_star;
  const auto result = run_quadratic(q, init, opts);
  const auto ctx = make_bound_context(q, *cert, init, kind, x_star);
  const auto report = check_trace(result.trace, ctx);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw Error("cannot write bound report '" + out + "'");
    write_bound_csv(os, report);
  }
  std::cout << "kind " << bound_kind_name(kind) << "\n";
  std::cout << "lambda " << ctx.lambda << " M " << ctx.m_value << "\n";
  std::cout << "rows " << report.rows.size() << "\n";
  std::cout << (report.all_satisfied ? "bound satisfied at every iteration\n"
                                     : "BOUND VIOLATED\n");
  return report.all_satisfied ? kExitOk : kExitViolation;
}

int run_gen(const std::string& out, const std::string& graph_kind, int n,
            int degree, int extra_edges, double lambda, std::uint64_t seed) {
  QuadraticProblem q = [&] {
    if (graph_kind == "ring") return generate_random_sdd(n, degree, lambda, seed);
    if (graph_kind == "tree") return generate_tree_sdd(n, lambda, seed);
    if (graph_kind == "loopy")
      return generate_loopy_sdd(n, extra_edges, lambda, seed);
    throw Error("unknown --graph '" + graph_kind + "'");
  }();
  if (out.empty()) {
    write_problem(std::cout, q);
  } else {
    std::ofstream os(out);
    if (!os) throw Error("cannot write problem file '" + out + "'");
    write_problem(os, q);
  }
  return kExitOk;
}

/// Full pipeline on one quadratic problem; returns (exit code, report text).
std::pair<int, std::string> check_one_quadratic(const QuadraticProblem& q,
                                                int t_max, double tol) {
  std::ostringstream os;
  const auto res = certify_quadratic(q);
  if (std::holds_alternative<DominanceRefutation>(res)) {
    os << "certify: REFUTED lambda_star "
       << std::get<DominanceRefutation>(res).lambda_star << "\n";
    try {
      QuadraticRunOptions opts;
      opts.t_max = t_max;
      opts.tol = tol;
      const auto run = run_quadratic(q, InitialMessages::zero(q.n()), opts);
      os << "solve: finished without certificate (t " << run.trace.last().t
         << ", step " << run.trace.last().step_inf << ")\n";
    } catch (const WellPosednessError& err) {
      os << "solve: aborted as expected: " << err.what() << "\n";
    }
    return {kExitViolation, os.str()};
  }
  const auto& cert = std::get<DominanceCertificate>(res);
  os << "certify: lambda " << cert.lambda << "\n";

  const auto x_star = solve_quadratic_direct(q);
  os << "exact: residual_inf " << q.residual_inf(x_star) << "\n";

  const auto init = InitialMessages::zero(q.n());
  QuadraticRunOptions opts;
  opts.t_max = t_max;
  opts.tol = tol;
  opts.cert = &cert;
  opts.x_star = &x_star;
  const auto run = run_quadratic(q, init, opts);
  os << "solve: t " << run.trace.last().t << " step "
     << run.trace.last().step_inf << " err " << run.trace.last().err_weighted
     << "\n";
  bool ok = run.invariants_ok;
  os << "message invariants: " << (run.invariants_ok ? "ok" : "VIOLATED")
     << " (min slack " << run.invariant_min_slack << ")\n";

  int roots_checked = 0;
  double worst_diff = 0;
  for (int root = 0; root < q.n() && roots_checked < 3;
       root += std::max(1, q.n() / 3)) {
    for (int t = 1; t <= 4; ++t) {
      if (projected_tree_nodes(q.graph, root, t) > 200000) break;
      const auto kp = key_property_quadratic(q, init, root, t);
      worst_diff = std::max(worst_diff, kp.diff);
    }
    ++roots_checked;
  }
  os << "tree key property: worst |diff| " << worst_diff << " over "
     << roots_checked << " roots, t <= 4\n";
  ok = ok && worst_diff <= 1e-9;

  const auto ctx =
      make_bound_context(q, cert, init, BoundKind::quadratic_eq36, x_star);
  const auto report = check_trace(run.trace, ctx);
  os << "bound eq36: " << (report.all_satisfied ? "satisfied" : "VIOLATED")
     << " over " << report.rows.size() << " rows\n";
  ok = ok && report.all_satisfied;

  return {ok ? kExitOk : kExitViolation, os.str()};
}

int run_check(const std::string& file, int t_max, double tol, int seed_count,
              int n, int degree, double lambda, std::uint64_t seed0, int jobs) {
  if (seed_count > 0) {
    std::vector<std::string> reports(seed_count);
    std::vector<int> codes(seed_count, 0);
    std::atomic<int> next{0};
    const int workers = std::max(1, std::min(jobs, seed_count));
    std::vector<std::thread> pool;
    for (int wkr = 0; wkr < workers; ++wkr) {
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < seed_count; k = next.fetch_add(1)) {
          const auto q = generate_random_sdd(n, degree, lambda, seed0 + k);
          const auto [code, text] = check_one_quadratic(q, t_max, tol);
          codes[k] = code;
          reports[k] = text;
        }
      });
    }
    for (auto& th : pool) th.join();
    int bad = 0;
    for (int k = 0; k < seed_count; ++k) {
      std::cout << "--- seed " << seed0 + k << " ---\n" << reports[k];
      if (codes[k] != 0) ++bad;
    }
    std::cout << (bad == 0 ? "all seeds passed\n"
                           : std::to_string(bad) + " seed(s) failed\n");
    return bad == 0 ? kExitOk : kExitViolation;
  }

  const auto parsed = parse_problem_file(file);
  if (std::holds_alternative<QuadraticProblem>(parsed)) {
    const auto [code, text] =
        check_one_quadratic(std::get<QuadraticProblem>(parsed), t_max, tol);
    std::cout << text;
    return code;
  }

  // general path: closed-form certificate, grid solve vs Newton, curvature
  const auto& obj = std::get<PairwiseObjective>(parsed);
  std::vector<double> ones(obj.graph.n, 1.0);
  const double lam = estimate_lambda_general(obj, ones);
  if (!(lam < 1.0)) {
    std::cout << "certify: no closed-form certificate (row bound " << lam
              << ")\n";
    return kExitViolation;
  }
  std::cout << "certify: lambda " << lam << " (closed form, w = 1)\n";
  DominanceCertificate cert;
  cert.lambda = lam;
  cert.w = ones;
  cert.kind = DominanceCertificate::Kind::sampled;

  const auto x_star = solve_general_newton(obj, {});
  std::cout << "exact: gradient_inf " << obj.gradient_inf(x_star) << "\n";

  GeneralRunOptions opts;
  opts.t_max = t_max;
  opts.tol = std::max(tol, 1e-8);
  opts.cert = &cert;
  opts.x_star = &x_star;
  const auto run = run_general(obj, InitialMessages::zero(obj.graph.n), opts);
  const double final_err = run.trace.last().err_weighted;
  std::cout << "solve: t " << run.trace.last().t << " err " << final_err << "\n";
  std::cout << "p1 curvature min " << run.checks.gamma_curvature_min << "\n";
  std::cout << "envelope ratio " << run.checks.envelope_excess_ratio
            << " slope ratio " << run.checks.slope_err_ratio << "\n";
  const bool ok = run.checks.gamma_curvature_min > 0 &&
                  run.checks.envelope_excess_ratio <= 1.0 &&
                  run.checks.slope_err_ratio <= 1.0 && final_err <= 1e-5;
  std::cout << (ok ? "check passed\n" : "CHECK FAILED\n");
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-sum message passing for pairwise-separable convex programs"};
  app.require_subcommand(1);

  SolveSettings solve_cfg;
  auto* solve = app.add_subcommand("solve", "run min-sum on a problem file");
  solve->add_option("file", solve_cfg.file, "problem file")->required();
  solve->add_option("--t-max", solve_cfg.t_max, "iteration cap");
  solve->add_option("--tol", solve_cfg.tol, "successive-iterate stop tolerance");
  solve->add_option("--x0", solve_cfg.x0_text,
                    "initial estimate (scalar or comma list)");
  solve->add_option("--trace-out", solve_cfg.trace_out, "trace CSV path");
  solve->add_option("--grid-points", solve_cfg.grid_points,
                    "grid points per node (general path)");
  solve->add_option("--margin", solve_cfg.margin, "grid domain widening factor");
  solve->add_option("--certificate", solve_cfg.cert_file,
                    "certificate file to load");
  solve->add_flag("--force-general", solve_cfg.force_general,
                  "run the grid path on quadratic input");
  solve->add_flag("--full-x", solve_cfg.full_x,
                  "include x columns in the trace CSV");
  solve->add_option("--dump-messages", solve_cfg.dump_dir,
                    "directory for per-edge message dumps (general path)");
  solve->add_option("--dump-at", solve_cfg.dump_at,
                    "iterations to dump, comma-separated (default all)");

  std::string certify_file, certify_out;
  double box_halfwidth = 10.0, certify_lambda = 0.0;
  long certify_samples = 4096;
  auto* certify =
      app.add_subcommand("certify", "produce or refute a dominance certificate");
  certify->add_option("file", certify_file, "problem file")->required();
  certify->add_option("--out", certify_out, "write certificate file");
  certify->add_option("--box", box_halfwidth,
                      "half-width of the sampling box (general)");
  certify->add_option("--samples", certify_samples,
                      "quasi-random sample count (general)");
  auto* lam_opt = certify->add_option(
      "--lambda", certify_lambda, "lambda to verify (general; default closed-form)");

  std::string exact_file;
  auto* exact = app.add_subcommand("exact", "reference solve (Cholesky / Newton)");
  exact->add_option("file", exact_file, "problem file")->required();

  std::string tree_file;
  int tree_root = 1, tree_depth = 3;
  bool tree_check = false;
  auto* tree = app.add_subcommand("tree", "unroll the computation tree for a root");
  tree->add_option("file", tree_file, "problem file")->required();
  tree->add_option("--root", tree_root, "root node (1-based)");
  tree->add_option("--depth", tree_depth, "iteration count t the tree mirrors");
  tree->add_flag("--check", tree_check,
                 "compare the tree solve with t loopy iterations");

  std::string bound_file, bound_kind = "eq36", bound_x0, bound_out;
  int bound_tmax = 60;
  auto* bound = app.add_subcommand("bound", "evaluate a rate bound along a run");
  bound->add_option("file", bound_file, "problem file")->required();
  bound->add_option("--kind", bound_kind, "eq14|eq15|eq35|eq36");
  bound->add_option("--x0", bound_x0, "initial estimate");
  bound->add_option("--t-max", bound_tmax, "iterations");
  bound->add_option("--out", bound_out, "bound report CSV path");

  std::string gen_out, gen_graph = "ring";
  int gen_n = 10, gen_degree = 3, gen_extra = 3;
  double gen_lambda = 0.7;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "generate a random SDD quadratic problem");
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->add_option("--graph", gen_graph, "ring|tree|loopy");
  gen->add_option("--n", gen_n, "node count");
  gen->add_option("--degree", gen_degree, "target degree (ring)");
  gen->add_option("--extra-edges", gen_extra, "chords beyond the tree (loopy)");
  gen->add_option("--lambda", gen_lambda, "dominance target in (0,1)");
  gen->add_option("--seed", gen_seed, "random seed");

  std::string check_file;
  int check_tmax = 60, check_seeds = 0, check_n = 12, check_degree = 3,
      check_jobs = 4;
  double check_tol = 1e-12, check_lambda = 0.7;
  std::uint64_t check_seed0 = 1;
  auto* check = app.add_subcommand(
      "check", "full invariant suite: certify, solve, exact, tree, bound");
  check->add_option("file", check_file, "problem file");
  check->add_option("--t-max", check_tmax, "iteration cap");
  check->add_option("--tol", check_tol, "stop tolerance");
  check->add_option("--seed-count", check_seeds,
                    "run on generated problems instead of a file");
  check->add_option("--n", check_n, "generated problem size");
  check->add_option("--degree", check_degree, "generated problem degree");
  check->add_option("--lambda", check_lambda, "generated dominance target");
  check->add_option("--seed", check_seed0, "first seed");
  check->add_option("--jobs", check_jobs, "parallel workers for seed batches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) return run_solve(solve_cfg);
    if (*certify)
      return run_certify(certify_file, certify_out, box_halfwidth,
                         certify_samples, certify_lambda, lam_opt->count() > 0);
    if (*exact) return run_exact(exact_file);
    if (*tree) return run_tree(tree_file, tree_root, tree_depth, tree_check);
    if (*bound)
      return run_bound(bound_file, bound_kind, bound_x0, bound_tmax, bound_out);
    if (*gen)
      return run_gen(gen_out, gen_graph, gen_n, gen_degree, gen_extra,
                     gen_lambda, gen_seed);
    if (*check) {
      if (check_seeds == 0 && check_file.empty())
        throw Error("check needs a file or --seed-count");
      return run_check(check_file, check_tmax, check_tol, check_seeds, check_n,
                       check_degree, check_lambda, check_seed0, check_jobs);
    }
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const WellPosednessError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitViolation;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
