#include "lqrpg/benchmark.hpp"

#include <json.hpp>

#include "lqrpg/cost.hpp"
#include "lqrpg/descent.hpp"
#include "lqrpg/errors.hpp"
#include "lqrpg/random_problem.hpp"
#include "lqrpg/riccati.hpp"

namespace lqrpg {

const char* to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::kGdTuned: return "GD_r";
    case BenchMethod::kGdn: return "GDN";
    case BenchMethod::kCgn: return "CGN";
  }
  return "?";
}

std::optional<BenchMethod> parse_bench_method(const std::string& name) {
  for (auto m : {BenchMethod::kGdTuned, BenchMethod::kGdn, BenchMethod::kCgn}) {
    if (name == to_string(m)) return m;
  }
  if (name == "gd") return BenchMethod::kGdTuned;
  if (name == "gdn") return BenchMethod::kGdn;
  if (name == "cgn") return BenchMethod::kCgn;
  return std::nullopt;
}

void validate(const BenchmarkConfig& config) {
  if (config.m < 1 || config.n < config.m) throw ValidationError("benchmark needs n >= m >= 1");
  if (config.methods.empty()) throw ValidationError("benchmark needs at least one method");
  if (config.max_iter < 1) throw ValidationError("max_iter must be positive");
  if (!(config.grad_tol > 0)) throw ValidationError("grad_tol must be positive");
}

namespace {

MethodReport run_method(const LqrProblem& problem, const Gain& K0, const RiccatiSolution& opt, double fstar,
                        BenchMethod method, const BenchmarkConfig& config) {
  MethodReport rep;
  rep.method = method;
  try {
    switch (method) {
      case BenchMethod::kGdTuned:
        rep.step = tune_constant_step(problem, K0);
        rep.trace = gradient_descent(problem, K0, ConstantStep{rep.step}, config.grad_tol, config.max_iter);
        break;
      case BenchMethod::kGdn:
        rep.trace = algorithm1(problem, K0, config.grad_tol, 0.01, 0.5, 0.0, config.max_iter);
        break;
      case BenchMethod::kCgn:
        rep.trace = conjugate_gradient(problem, K0, config.grad_tol, 0.0, config.max_iter);
        break;
    }
  } catch (const Error& e) {
    rep.failed = true;
    rep.failure_reason = e.what();
    rep.trace.terminal_gain = K0;
    rep.trace.termination = Termination::kFailure;
    rep.trace.failure_reason = e.what();
  }
  if (rep.trace.termination == Termination::kFailure) {
    rep.failed = true;
    rep.failure_reason = rep.trace.failure_reason;
  }
  rep.final_f = rep.trace.iterations.empty() ? rep.trace.initial_f : rep.trace.final_f();
  rep.gain_error = (rep.trace.terminal_gain - opt.K).norm();
  rep.relative_gain_error = rep.gain_error / opt.K.norm();
  for (const auto& rec : rep.trace.iterations) {
    if (rec.f - fstar <= 1e-3 * fstar) {
      rep.iterations_to_gap = rec.index;
      break;
    }
  }
  if (!rep.iterations_to_gap && rep.trace.initial_f - fstar <= 1e-3 * fstar) rep.iterations_to_gap = 0;
  return rep;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  validate(config);
  const GeneratedProblem gen = generate_random_problem(config.n, config.m, config.seed);
  const RiccatiSolution opt = riccati_optimum(gen.problem, gen.K0);

  BenchmarkReport report;
  report.config = config;
  report.Kstar = opt.K;
  report.fstar = evaluate(gen.problem, opt.K).f;
  report.riccati_iterations = opt.iterations;
  report.initial_f = evaluate(gen.problem, gen.K0).f;
  report.q_regularized = gen.q_regularized;
  report.r_regularized = gen.r_regularized;
  report.methods.resize(config.methods.size());

  const long count = static_cast<long>(config.methods.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<size_t>(i);
    report.methods[idx] = run_method(gen.problem, gen.K0, opt, report.fstar, config.methods[idx], config);
  }
  return report;
}

std::string report_to_json(const BenchmarkReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["n"] = report.config.n;
  doc["m"] = report.config.m;
  doc["seed"] = report.config.seed;
  doc["max_iter"] = report.config.max_iter;
  doc["grad_tol"] = report.config.grad_tol;
  doc["fstar"] = report.fstar;
  doc["kstar_norm"] = report.Kstar.norm();
  doc["riccati_iterations"] = report.riccati_iterations;
  doc["initial_f"] = report.initial_f;
  doc["q_regularized"] = report.q_regularized;
  doc["r_regularized"] = report.r_regularized;
  ordered_json methods = ordered_json::array();
  for (const auto& rep : report.methods) {
    ordered_json j;
    j["method"] = to_string(rep.method);
    j["termination"] = to_string(rep.trace.termination);
    j["iterations"] = rep.trace.iteration_count();
    j["final_f"] = rep.final_f;
    j["final_grad_norm"] = rep.trace.final_grad_norm();
    j["gain_error"] = rep.gain_error;
    j["relative_gain_error"] = rep.relative_gain_error;
    j["iterations_to_gap"] = rep.iterations_to_gap ? ordered_json(*rep.iterations_to_gap) : ordered_json(nullptr);
    j["total_shrinks"] = rep.trace.total_shrinks();
    j["shrink_events"] = rep.trace.shrink_events();
    if (rep.method == BenchMethod::kGdTuned) j["step"] = rep.step;
    if (rep.failed) j["failure"] = rep.failure_reason;
    methods.push_back(std::move(j));
  }
  doc["methods"] = std::move(methods);
  return doc.dump(2) + "\n";
}

}  // namespace lqrpg
