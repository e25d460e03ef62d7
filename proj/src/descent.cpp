#include "lqrpg/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lqrpg/detail/descent_core.hpp"
#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {


class LqrOracle {
 public:
  using Point = CostEval;
  explicit LqrOracle(const LqrProblem& problem) : problem_(problem) {}

  std::optional<CostEval> sample(const Matrix& K) const { return try_evaluate(problem_, K); }
  double curvature(const CostEval& at, const Matrix& d) const { return hessian_form(problem_, at, d); }

 private:
  const LqrProblem& problem_;
};

// Caps every trial step at margin / lambda_max(G) so iterates stay stabilizing.
class SafeBoundOracle : public LqrOracle {
 public:
  SafeBoundOracle(const LqrProblem& problem, double margin) : LqrOracle(problem), problem_(problem), margin_(margin) {}
  double step_cap(const CostEval& at, const Matrix& d) const {
    return margin_ * safe_step_bound(problem_, at, -d);
  }

 private:
  const LqrProblem& problem_;
  double margin_;
};

CostEval evaluate_start(const LqrProblem& problem, const Gain& K0) {
  problem.validate();
  return evaluate(problem, K0);
}

void check_unit_interval(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1)");
}

RunTrace constant_descent(const LqrProblem& problem, const Gain& K0, double gamma, double grad_tol,
                          int max_iter) {
  CostEval pt = evaluate_start(problem, K0);
  RunTrace trace;
  trace.initial_f = pt.f;
  trace.initial_grad_norm = pt.grad_norm();
  Gain K = K0;
  for (int it = 0;; ++it) {
    if (pt.grad_norm() < grad_tol) {
      trace.termination = Termination::kGradTol;
      break;
    }
    if (it >= max_iter) {
      trace.termination = Termination::kMaxIter;
      break;
    }
    const Gain K_next = K - gamma * pt.grad;
    auto next = try_evaluate(problem, K_next);
    if (!next) {
      trace.termination = Termination::kFailure;
      trace.failure_reason = "constant step left the stabilizing set";
      break;
    }
    if (next->f > pt.f) {
      trace.termination = Termination::kFailure;
      trace.failure_reason = "constant step increased the cost";
      break;
    }
    K = K_next;
    pt = std::move(*next);
    trace.iterations.push_back({it + 1, pt.f, pt.grad_norm(), gamma, 0, true});
  }
  trace.terminal_gain = K;
  return trace;
}

double resolve_T1(double T1) { return T1 > 0.0 ? T1 : kDefaultStepCap; }

void validate_stopping(double eps, int max_iter) {
  if (!(eps > 0.0)) throw ValidationError("gradient tolerance must be positive");
  if (max_iter < 0) throw ValidationError("max_iter must be non-negative");
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kGradTol:
      return "grad_tol";
    case Termination::kMaxIter:
      return "max_iter";
    case Termination::kFailure:
      return "failure";
  }
  return "unknown";
}

int RunTrace::total_shrinks() const {
  int total = 0;
  for (const auto& rec : iterations) total += rec.shrinks;
  return total;
}

int RunTrace::shrink_events() const {
  return static_cast<int>(
      std::count_if(iterations.begin(), iterations.end(), [](const auto& r) { return r.shrinks > 0; }));
}

void validate(const StepRule& rule) {
  std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ConstantStep>) {
          if (!(r.gamma > 0.0)) throw ValidationError("constant step must be positive");
        } else if constexpr (std::is_same_v<R, NewtonArmijoStep>) {
          check_unit_interval(r.armijo_c, "armijo constant");
          check_unit_interval(r.shrink, "shrink factor");
          if (!(r.T1 >= 0.0)) throw ValidationError("T1 must be positive (or 0 for the default)");
        } else {
          check_unit_interval(r.margin, "safe-step margin");
        }
      },
      rule);
}

double newton_quotient_step(const LqrProblem& problem, const CostEval& at) {
  const double grad_sq = at.grad.squaredNorm();
  if (grad_sq == 0.0) throw DegenerateDirection("Newton quotient undefined at a zero gradient");
  const double form = hessian_form(problem, at, at.grad);
  if (!(form > 0.0)) return std::numeric_limits<double>::infinity();
  return grad_sq / form;
}

double newton_quotient_step(const LqrProblem& problem, const Gain& K) {
  return newton_quotient_step(problem, evaluate(problem, K));
}

double safe_step_bound(const LqrProblem& problem, const CostEval& at, const Matrix& D) {
  validate_gain(problem, D);
  const Eigen::Index n = problem.n();
  const Matrix Y = at.closed_loop->solve(Matrix::Identity(n, n), LyapunovForm::kDirect).X;
  const Matrix BDCY = problem.B * D * problem.C * Y;
  const double top = lambda_max(BDCY + BDCY.transpose());
  if (!(top > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / top;
}

double safe_step_bound(const LqrProblem& problem, const Gain& K, const Matrix& D) {
  return safe_step_bound(problem, evaluate(problem, K), D);
}

RunTrace gradient_descent(const LqrProblem& problem, const Gain& K0, const StepRule& rule,
                          double grad_tol, int max_iter) {
  validate(rule);
  if (const auto* c = std::get_if<ConstantStep>(&rule)) {
    return constant_descent(problem, K0, c->gamma, grad_tol, max_iter);
  }
  if (const auto* na = std::get_if<NewtonArmijoStep>(&rule)) {
    return algorithm1(problem, K0, grad_tol, na->armijo_c, na->shrink, na->T1, max_iter);
  }
  const auto& sb = std::get<SafeBoundStep>(rule);
  CostEval start = evaluate_start(problem, K0);
  detail::NewtonArmijoParams prm;
  prm.eps = grad_tol;
  prm.T1 = resolve_T1(0.0);
  prm.max_iter = max_iter;
  return detail::newton_armijo_descent(SafeBoundOracle(problem, sb.margin), std::move(start), K0, prm);
}

RunTrace algorithm1(const LqrProblem& problem, const Gain& K0, double eps, double armijo_c,
                    double shrink, double T1, int max_iter) {
  validate_stopping(eps, max_iter);
  validate(StepRule{NewtonArmijoStep{T1, armijo_c, shrink}});
  CostEval start = evaluate_start(problem, K0);
  detail::NewtonArmijoParams prm;
  prm.eps = eps;
  prm.armijo_c = armijo_c;
  prm.shrink = shrink;
  prm.T1 = resolve_T1(T1);
  prm.max_iter = max_iter;
  return detail::newton_armijo_descent(LqrOracle(problem), std::move(start), K0, prm);
}

RunTrace conjugate_gradient(const LqrProblem& problem, const Gain& K0, double eps, double T1,
                            int max_iter, double armijo_c, double shrink) {
  validate_stopping(eps, max_iter);
  validate(StepRule{NewtonArmijoStep{T1, armijo_c, shrink}});
  CostEval start = evaluate_start(problem, K0);
  detail::NewtonArmijoParams prm;
  prm.eps = eps;
  prm.armijo_c = armijo_c;
  prm.shrink = shrink;
  prm.T1 = resolve_T1(T1);
  prm.max_iter = max_iter;
  prm.conjugate = true;
  return detail::newton_armijo_descent(LqrOracle(problem), std::move(start), K0, prm);
}

double tune_constant_step(const LqrProblem& problem, const Gain& K0, int probe_iters) {
  const CostEval at = evaluate_start(problem, K0);
  if (at.grad.squaredNorm() == 0.0) return 1.0;
  double gamma = newton_quotient_step(problem, at);
  if (!std::isfinite(gamma)) gamma = 1.0 / at.grad_norm();

  auto monotone = [&](double g) {
    return constant_descent(problem, K0, g, 0.0, probe_iters).termination != Termination::kFailure;
  };
  if (monotone(gamma)) {
    for (int i = 0; i < 60 && monotone(2.0 * gamma); ++i) gamma *= 2.0;
    return gamma;
  }
  for (int i = 0; i < 200; ++i) {
    gamma *= 0.5;
    if (monotone(gamma)) return gamma;
  }
  throw ConvergenceError("could not find a monotone constant step", {});
}

}  // namespace lqrpg
