#include "lqrpg/cost.hpp"

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

CostEval evaluate_with(const LqrProblem& problem, const Gain& K,
                       std::shared_ptr<const LyapunovSolver> solver) {
  CostEval out;
  out.K = K;
  out.spectral_abscissa = solver->spectral_abscissa();
  const Matrix KC = K * problem.C;
  out.X = solver->solve(problem.Q + KC.transpose() * problem.R * KC, LyapunovForm::kAdjoint).X;
  out.Y = solver->solve(problem.Sigma, LyapunovForm::kDirect).X;
  out.M = problem.R * KC - problem.B.transpose() * out.X;
  out.grad = 2.0 * out.M * out.Y * problem.C.transpose();
  out.f = (out.X * problem.Sigma).trace();
  out.closed_loop = std::move(solver);
  return out;
}

}  // namespace

std::optional<CostEval> try_evaluate(const LqrProblem& problem, const Gain& K) {
  validate_gain(problem, K);
  if (!K.allFinite()) return std::nullopt;
  auto solver = LyapunovSolver::if_stable(problem.closed_loop(K));
  if (!solver) return std::nullopt;
  return evaluate_with(problem, K, std::make_shared<const LyapunovSolver>(std::move(*solver)));
}

std::optional<double> try_cost(const LqrProblem& problem, const Gain& K) {
  validate_gain(problem, K);
  if (!K.allFinite()) return std::nullopt;
  const auto solver = LyapunovSolver::if_stable(problem.closed_loop(K));
  if (!solver) return std::nullopt;
  const Matrix KC = K * problem.C;
  const Matrix X = solver->solve(problem.Q + KC.transpose() * problem.R * KC, LyapunovForm::kAdjoint).X;
  return (X * problem.Sigma).trace();
}

CostEval evaluate(const LqrProblem& problem, const Gain& K) {
  validate_gain(problem, K);
  const Matrix AK = problem.closed_loop(K);
  auto solver = LyapunovSolver::if_stable(AK);
  if (!solver) throw StabilityError("gain is not stabilizing", spectrum(AK).spectral_abscissa);
  return evaluate_with(problem, K, std::make_shared<const LyapunovSolver>(std::move(*solver)));
}

Matrix hessian_x_prime(const LqrProblem& problem, const CostEval& at, const Matrix& E) {
  validate_gain(problem, E);
  const Matrix MtEC = at.M.transpose() * E * problem.C;
  return at.closed_loop->solve(MtEC + MtEC.transpose(), LyapunovForm::kAdjoint).X;
}

double hessian_form(const LqrProblem& problem, const CostEval& at, const Matrix& E) {
  const Matrix Xp = hessian_x_prime(problem, at, E);
  const Matrix YCt = at.Y * problem.C.transpose();
  const double first = frobenius_inner(problem.R * E * problem.C * YCt, E);
  const double second = frobenius_inner(problem.B.transpose() * Xp * YCt, E);
  return 2.0 * first - 4.0 * second;
}

double hessian_form(const LqrProblem& problem, const Gain& K, const Matrix& E) {
  return hessian_form(problem, evaluate(problem, K), E);
}

}  // namespace lqrpg
