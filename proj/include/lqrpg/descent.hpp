#pragma once

#include <optional>
#include <variant>

#include "lqrpg/cost.hpp"
#include "lqrpg/trace.hpp"

namespace lqrpg {

/// K <- K - gamma grad f(K) with a fixed gamma.
struct ConstantStep {
  double gamma = 1e-3;
};

/// Newton-quotient trial step capped at T1, reduced by `shrink` until the
/// Armijo condition holds and the iterate is stabilizing.
struct NewtonArmijoStep {
  double T1 = 0.0;  // <= 0 selects kDefaultStepCap
  double armijo_c = 0.01;
  double shrink = 0.5;
};

/// Newton-quotient step additionally capped at margin / lambda_max(G), which
/// keeps the next iterate stabilizing by a Lyapunov argument.
struct SafeBoundStep {
  double margin = 0.9;
};

using StepRule = std::variant<ConstantStep, NewtonArmijoStep, SafeBoundStep>;

/// Throws ValidationError if the rule parameters are out of range.
void validate(const StepRule& rule);

/// t1 = |grad|_F^2 / hess[grad, grad]. Returns +inf when the quadratic form is
/// not positive. Throws DegenerateDirection at a zero gradient.
double newton_quotient_step(const LqrProblem& problem, const Gain& K);
double newton_quotient_step(const LqrProblem& problem, const CostEval& at);

/// Default upper step cap T1. Deliberately loose: on ill-conditioned
/// instances the Newton quotient at K0 is orders of magnitude below the
/// steps taken later in the run.
inline constexpr double kDefaultStepCap = 1e6;

/// Largest t such that K - t D is guaranteed stabilizing by the Lyapunov
/// function x^T Y^-1 x, Y solving A_K Y + Y A_K^T + I = 0:
/// 1 / lambda_max(B D C Y + Y (B D C)^T), or +inf if lambda_max <= 0.
double safe_step_bound(const LqrProblem& problem, const Gain& K, const Matrix& D);
double safe_step_bound(const LqrProblem& problem, const CostEval& at, const Matrix& D);

/// Plain gradient method with the given step rule.
RunTrace gradient_descent(const LqrProblem& problem, const Gain& K0, const StepRule& rule,
                          double grad_tol, int max_iter);

/// Gradient method with Newton-quotient step and Armijo step reduction.
RunTrace algorithm1(const LqrProblem& problem, const Gain& K0, double eps, double armijo_c = 0.01,
                    double shrink = 0.5, double T1 = 0.0, int max_iter = 500);

/// Fletcher-Reeves conjugate gradient with Newton step length along the
/// search direction, restarting from the steepest-descent step whenever the
/// conjugate step fails the Armijo test or leaves the stabilizing set.
RunTrace conjugate_gradient(const LqrProblem& problem, const Gain& K0, double eps, double T1 = 0.0,
                            int max_iter = 500, double armijo_c = 0.01, double shrink = 0.5);

/// Constant step tuned by doubling/halving until the first `probe_iters`
/// iterations are monotone and stabilizing; returns the largest such gamma found.
double tune_constant_step(const LqrProblem& problem, const Gain& K0, int probe_iters = 10);

}  // namespace lqrpg
