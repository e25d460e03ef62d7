#pragma once

#include <optional>
#include <vector>

#include "lqrpg/problem.hpp"

namespace lqrpg {

struct RiccatiSolution {
  Matrix X;  // stabilizing solution of A^T X + X A - X B R^-1 B^T X + Q = 0
  Gain K;    // R^-1 B^T X
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> residual_history;
};

/// Relative residual of the algebraic Riccati equation at X.
double riccati_residual(const LqrProblem& problem, const Matrix& X);

/// Optimal state-feedback gain by Newton-Kleinman iteration, one Lyapunov
/// solve per step, started from a stabilizing gain (K = 0 when A is Hurwitz
/// and no gain is given).
///
/// Throws UnsupportedForOutputFeedback for C != I, StabilityError if the
/// initial gain is not stabilizing, ConvergenceError if the residual does not
/// reach 1e-9 within max_iter steps.
RiccatiSolution riccati_optimum(const LqrProblem& problem, std::optional<Gain> K0 = std::nullopt,
                                int max_iter = 100);

}  // namespace lqrpg
