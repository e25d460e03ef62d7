#pragma once

#include <memory>
#include <optional>

#include "lqrpg/problem.hpp"

namespace lqrpg {

/// Cost f(K) = Tr(X Sigma) and the quantities that produce its gradient.
struct CostEval {
  Gain K;
  double f = 0.0;
  Matrix X;     // (A_K)^T X + X A_K + C^T K^T R K C + Q = 0
  Matrix Y;     // A_K Y + Y A_K^T + Sigma = 0
  Matrix M;     // R K C - B^T X
  Matrix grad;  // 2 M Y C^T
  double spectral_abscissa = 0.0;
  /// Schur factorization of A_K, reused for Hessian and step-bound solves.
  std::shared_ptr<const LyapunovSolver> closed_loop;

  double grad_norm() const { return grad.norm(); }
};

/// Throws StabilityError if K is not stabilizing.
CostEval evaluate(const LqrProblem& problem, const Gain& K);

/// Same as evaluate, but returns nullopt when K is outside the stabilizing set.
std::optional<CostEval> try_evaluate(const LqrProblem& problem, const Gain& K);

/// f(K) alone (one Lyapunov solve), or nullopt when K is not stabilizing.
std::optional<double> try_cost(const LqrProblem& problem, const Gain& K);

/// Second directional derivative d^2/dt^2 f(K + tE) at t = 0:
///   2 <R E C Y C^T, E> - 4 <B^T X' Y C^T, E>,
/// with A_K^T X' + X' A_K + M^T E C + (M^T E C)^T = 0.
double hessian_form(const LqrProblem& problem, const Gain& K, const Matrix& E);
double hessian_form(const LqrProblem& problem, const CostEval& at, const Matrix& E);

/// X'(K)[E] as used by hessian_form.
Matrix hessian_x_prime(const LqrProblem& problem, const CostEval& at, const Matrix& E);

}  // namespace lqrpg
