// Command-line front end: solve, bench, scan, check, riccati, export.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "lqrpg/benchmark.hpp"
#include "lqrpg/bounds.hpp"
#include "lqrpg/cost.hpp"
#include "lqrpg/descent.hpp"
#include "lqrpg/errors.hpp"
#include "lqrpg/fixtures.hpp"
#include "lqrpg/flow.hpp"
#include "lqrpg/io.hpp"
#include "lqrpg/random_problem.hpp"
#include "lqrpg/riccati.hpp"
#include "lqrpg/scan.hpp"

namespace {

using namespace lqrpg;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

struct ProblemSource {
  std::string path;
  std::string fixture_name;
  std::optional<double> alpha;
  std::uint64_t seed = 1;
  int n = 0;
  int m = 0;

  void add_to(CLI::App* app) {
    app->add_option("--problem", path, "problem JSON file");
    app->add_option("--fixture", fixture_name, "ex31|ex32|ex33|ex34|ex35|toy_scalar");
    app->add_option("--alpha", alpha, "parameter for ex34 / ex35");
    app->add_option("--seed", seed, "seed for a random instance");
    app->add_option("--n", n, "state dimension of a random instance");
    app->add_option("--m", m, "input dimension of a random instance");
  }

  ProblemFile load() const {
    const int given = !path.empty() + !fixture_name.empty() + (n > 0);
    if (given != 1) throw ValidationError("give exactly one of --problem, --fixture, or --n/--m");
    if (!path.empty()) return load_problem(path);
    if (!fixture_name.empty()) {
      Fixture fx = fixture(fixture_name, alpha);
      return {fx.problem, fx.K0};
    }
    GeneratedProblem gen = generate_random_problem(n, m > 0 ? m : 1, seed);
    return {gen.problem, gen.K0};
  }
};

Gain starting_gain(const ProblemFile& pf) {
  return pf.K0 ? *pf.K0 : Gain::Zero(pf.problem.m(), pf.problem.r());
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

std::string gain_text(const Matrix& K) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    os << (i ? "; " : "");
    for (Eigen::Index j = 0; j < K.cols(); ++j) os << (j ? " " : "") << format_number(K(i, j));
  }
  return os.str();
}

// ---- solve ----

struct SolveOptions {
  ProblemSource src;
  std::string method = "gdn";
  double grad_tol = 1e-6;
  int max_iter = 500;
  double t1 = 0.0;
  double armijo = 0.01;
  double shrink = 0.5;
  double step = 0.0;
  double t_end = 20.0;
  std::string out;
};

int run_solve(const SolveOptions& o) {
  const ProblemFile pf = o.src.load();
  const Gain K0 = starting_gain(pf);
  if (o.method == "flow") {
    const FlowTrace tr = gradient_flow(pf.problem, K0, o.t_end, o.grad_tol);
    emit(o.out, flow_to_csv(tr));
    const auto& last = tr.samples.back();
    std::cerr << "termination " << to_string(tr.termination) << " t " << last.t << " f "
              << format_number(last.f) << " grad_norm " << last.grad_norm << " K [" << gain_text(last.K)
              << "]\n";
    if (tr.termination == Termination::kFailure) {
      std::cerr << "failure: " << tr.failure_reason << "\n";
      return kExitConvergence;
    }
    return kExitOk;
  }
  RunTrace tr;
  if (o.method == "gd") {
    const double gamma = o.step > 0 ? o.step : tune_constant_step(pf.problem, K0);
    std::cerr << "constant step " << gamma << "\n";
    tr = gradient_descent(pf.problem, K0, ConstantStep{gamma}, o.grad_tol, o.max_iter);
  } else if (o.method == "gdn") {
    tr = algorithm1(pf.problem, K0, o.grad_tol, o.armijo, o.shrink, o.t1, o.max_iter);
  } else if (o.method == "cgn") {
    tr = conjugate_gradient(pf.problem, K0, o.grad_tol, o.t1, o.max_iter, o.armijo, o.shrink);
  } else {
    throw ValidationError("unknown method \"" + o.method + "\"");
  }
  emit(o.out, trace_to_csv(tr));
  std::cerr << "termination " << to_string(tr.termination) << " iterations " << tr.iteration_count()
            << " f " << format_number(tr.final_f()) << " grad_norm " << tr.final_grad_norm() << " K ["
            << gain_text(tr.terminal_gain) << "]\n";
  if (tr.termination == Termination::kFailure) {
    std::cerr << "failure: " << tr.failure_reason << "\n";
    return kExitConvergence;
  }
  return tr.termination == Termination::kGradTol ? kExitOk : kExitConvergence;
}

// ---- bench ----

struct BenchOptions {
  BenchmarkConfig config;
  std::vector<std::string> methods;
  bool full_size = false;
  std::string out;
};

int run_bench(BenchOptions o) {
  if (o.full_size) {
    o.config.n = 100;
    o.config.m = 10;
  }
  if (!o.methods.empty()) {
    o.config.methods.clear();
    for (const auto& name : o.methods) {
      auto m = parse_bench_method(name);
      if (!m) throw ValidationError("unknown benchmark method \"" + name + "\"");
      o.config.methods.push_back(*m);
    }
  }
  const BenchmarkReport rep = run_benchmark(o.config);
  const std::string json = report_to_json(rep);
  if (o.out.empty()) {
    std::cout << json;
  } else {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec) throw IoError("cannot create directory " + o.out + ": " + ec.message());
    write_text_file(o.out + "/report.json", json);
    for (const auto& m : rep.methods) save_trace(o.out + "/" + to_string(m.method) + ".csv", m.trace);
  }
  for (const auto& m : rep.methods) {
    std::cerr << to_string(m.method) << ": " << to_string(m.trace.termination) << " after "
              << m.trace.iteration_count() << " iterations, f - f* = " << m.final_f - rep.fstar
              << ", |K-K*|/|K*| = " << m.relative_gain_error << (m.failed ? " (" + m.failure_reason + ")" : "")
              << "\n";
  }
  return kExitOk;
}

// ---- scan ----

struct ScanOptions {
  ProblemSource src;
  std::vector<std::string> axes;
  std::string out;
};

int run_scan(const ScanOptions& o) {
  const ProblemFile pf = o.src.load();
  ScanSpec spec{Gain::Zero(pf.problem.m(), pf.problem.r()), {}};
  for (const auto& a : o.axes) spec.axes.push_back(parse_scan_axis(a));
  const LandscapeScan scan = landscape_scan(pf.problem, spec);
  emit(o.out, scan_to_csv(scan));
  if (spec.axes.size() == 1) {
    for (const auto& [lo, hi] : stabilizing_intervals(scan)) {
      std::cerr << "stabilizing on [" << lo << ", " << hi << "]\n";
    }
    for (double x : grid_local_minima(scan)) std::cerr << "grid local minimum near " << x << "\n";
  }
  return kExitOk;
}

// ---- riccati ----

int run_riccati(const ProblemSource& src, const std::string& out) {
  const ProblemFile pf = src.load();
  const RiccatiSolution sol = riccati_optimum(pf.problem, pf.K0);
  const CostEval at = evaluate(pf.problem, sol.K);
  std::ostringstream os;
  os << "# iterations " << sol.iterations << ", relative residual " << sol.relative_residual << ", f* "
     << format_number(at.f) << ", |grad f(K*)| " << at.grad_norm() << "\n";
  std::cerr << os.str();
  std::ostringstream body;
  body << "{\"fstar\": " << format_number(at.f) << ", \"iterations\": " << sol.iterations
       << ",\n \"K\": " << matrix_to_json(sol.K) << ",\n \"X\": " << matrix_to_json(sol.X) << "}\n";
  emit(out, body.str());
  return kExitOk;
}

// ---- check ----

struct CheckTally {
  int passed = 0;
  int failed = 0;
  void record(const std::string& what, bool ok) {
    (ok ? passed : failed) += 1;
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
  }
};

double central_second(const LqrProblem& p, const Gain& K, const Matrix& E, double h) {
  const double fp = *try_cost(p, K + h * E), f0 = *try_cost(p, K), fm = *try_cost(p, K - h * E);
  return (fp - 2 * f0 + fm) / (h * h);
}

void check_fixture(const std::string& name, const Fixture& fx, CheckTally& tally) {
  const LqrProblem& p = fx.problem;
  const Gain K = *fx.K0;
  const CostEval at = evaluate(p, K);

  Matrix fd = Matrix::Zero(K.rows(), K.cols());
  for (Eigen::Index i = 0; i < K.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(K(i)));
    Gain Kp = K, Km = K;
    Kp(i) += h;
    Km(i) -= h;
    fd(i) = (*try_cost(p, Kp) - *try_cost(p, Km)) / (2 * h);
  }
  tally.record(name + " gradient vs finite differences",
               (fd - at.grad).norm() <= 1e-5 * std::max(1.0, at.grad.norm()));

  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal;
  bool hess_ok = true, bound_ok = true, safe_ok = true;
  const double L = smoothness_constant(p, at.f).L;
  for (int s = 0; s < 10; ++s) {
    Matrix E(K.rows(), K.cols());
    for (Eigen::Index i = 0; i < E.size(); ++i) E(i) = normal(gen);
    E /= E.norm();
    const double form = hessian_form(p, at, E);
    const double h = 1e-4 * std::max(1.0, K.norm());
    hess_ok &= std::abs(form - central_second(p, K, E, h)) <= 1e-4 * std::max(1.0, std::abs(form));
    bound_ok &= std::abs(form) <= L;
    const double b = safe_step_bound(p, at, E);
    if (std::isfinite(b)) safe_ok &= is_stabilizing(p.closed_loop(K - 0.99 * b * E));
  }
  tally.record(name + " Hessian form vs second differences", hess_ok);
  tally.record(name + " Hessian form within smoothness constant", bound_ok);
  tally.record(name + " safe step keeps the gain stabilizing", safe_ok);

  const auto cb = coercivity_bounds(p, at);
  tally.record(name + " coercivity bounds below f", cb.sigma_bound <= at.f && cb.norm_bound <= at.f);
  tally.record(name + " largest eigenvalue of Y within its bound", lambda_max(at.Y) <= y_trace_bound(p, at) * (1 + 1e-12));
  tally.record(name + " gain norm within its bound", K.norm() <= k_norm_bound(p, at.f));
}

int run_check() {
  CheckTally tally;
  const std::vector<std::pair<std::string, Fixture>> fixtures{
      {"ex31", fixture(FixtureName::kEx31)},
      {"ex32", fixture(FixtureName::kEx32)},
      {"ex33", fixture(FixtureName::kEx33)},
      {"ex34(-1)", fixture(FixtureName::kEx34, -1.0)},
      {"ex35(1.2)", fixture(FixtureName::kEx35, 1.2)},
      {"toy_scalar", fixture(FixtureName::kToyScalar)},
  };
  for (const auto& [name, fx] : fixtures) check_fixture(name, fx, tally);
  for (const auto& [name, fx] : fixtures) {
    if (!fx.problem.is_state_feedback()) continue;
    const auto sol = riccati_optimum(fx.problem, fx.K0);
    const double g0 = evaluate(fx.problem, *fx.K0).grad_norm();
    tally.record(name + " gradient vanishes at the Riccati gain",
                 evaluate(fx.problem, sol.K).grad_norm() <= 1e-7 * (1 + g0));
  }
  std::cout << tally.passed << " passed, " << tally.failed << " failed\n";
  return tally.failed == 0 ? kExitOk : kExitCheckFailed;
}

// ---- export ----

int run_export(const ProblemSource& src, const std::string& out) {
  emit(out, problem_to_json(src.load()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-gradient optimization of LQR feedback gains"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "optimize a gain and write the iteration trace as CSV");
  solve.src.add_to(solve_cmd);
  solve_cmd->add_option("--method", solve.method, "gd|gdn|cgn|flow")
      ->check(CLI::IsMember({"gd", "gdn", "cgn", "flow"}));
  solve_cmd->add_option("--grad-tol", solve.grad_tol, "stop when |grad f|_F falls below this");
  solve_cmd->add_option("--max-iter", solve.max_iter);
  solve_cmd->add_option("--t1", solve.t1, "step cap (default 1e6)");
  solve_cmd->add_option("--armijo", solve.armijo, "sufficient-decrease constant");
  solve_cmd->add_option("--shrink", solve.shrink, "step reduction factor");
  solve_cmd->add_option("--step", solve.step, "constant step for gd (default: tuned)");
  solve_cmd->add_option("--t-end", solve.t_end, "horizon for flow");
  solve_cmd->add_option("--out", solve.out, "trace CSV path (default stdout)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "random-instance comparison of GD_r, GDN and CGN");
  bench_cmd->add_option("--n", bench.config.n);
  bench_cmd->add_option("--m", bench.config.m);
  bench_cmd->add_option("--seed", bench.config.seed);
  bench_cmd->add_option("--methods", bench.methods, "subset of GD_r GDN CGN")->delimiter(',');
  bench_cmd->add_option("--max-iter", bench.config.max_iter);
  bench_cmd->add_option("--grad-tol", bench.config.grad_tol);
  bench_cmd->add_flag("--full-size", bench.full_size, "n = 100, m = 10");
  bench_cmd->add_option("--out", bench.out, "output directory (report.json + one CSV per method)");

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "cost landscape over one or two gain coordinates");
  scan.src.add_to(scan_cmd);
  scan_cmd->add_option("--axis", scan.axes, "entries:lo:hi:count, e.g. k11+k12:-2:10:121")
      ->required()
      ->expected(1, 2);
  scan_cmd->add_option("--out", scan.out, "CSV path (default stdout)");

  auto* check_cmd = app.add_subcommand("check", "property checks on the built-in fixtures");

  ProblemSource ric_src;
  std::string ric_out;
  auto* ric_cmd = app.add_subcommand("riccati", "optimal state-feedback gain K* and X*");
  ric_src.add_to(ric_cmd);
  ric_cmd->add_option("--out", ric_out);

  ProblemSource exp_src;
  std::string exp_out;
  auto* exp_cmd = app.add_subcommand("export", "write a fixture or random instance as a problem file");
  exp_src.add_to(exp_cmd);
  exp_cmd->add_option("--out", exp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*bench_cmd) return run_bench(bench);
    if (*scan_cmd) return run_scan(scan);
    if (*check_cmd) return run_check();
    if (*ric_cmd) return run_riccati(ric_src, ric_out);
    if (*exp_cmd) return run_export(exp_src, exp_out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const IllConditionedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
