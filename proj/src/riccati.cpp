#include "lqrpg/riccati.hpp"

#include <cmath>

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

constexpr double kAcceptResidual = 1e-9;
constexpr double kTargetResidual = 1e-14;

}  // namespace

double riccati_residual(const LqrProblem& problem, const Matrix& X) {
  const Eigen::LLT<Matrix> r_llt(problem.R);
  const Matrix BtX = problem.B.transpose() * X;
  const Matrix quad = BtX.transpose() * r_llt.solve(BtX);
  const Matrix lin = problem.A.transpose() * X + X * problem.A;
  const double scale = lin.norm() + quad.norm() + problem.Q.norm();
  return (lin - quad + problem.Q).norm() / scale;
}

RiccatiSolution riccati_optimum(const LqrProblem& problem, std::optional<Gain> K0, int max_iter) {
  if (!problem.is_state_feedback()) {
    throw UnsupportedForOutputFeedback("the Riccati optimum is defined for C = I only");
  }
  Gain K;
  if (K0) {
    validate_gain(problem, *K0);
    K = *K0;
  } else {
    const double abscissa = spectrum(problem.A).spectral_abscissa;
    if (!(abscissa < -kStabilityTol)) {
      throw StabilityError("A is not Hurwitz; a stabilizing initial gain is required", abscissa);
    }
    K = Gain::Zero(problem.m(), problem.n());
  }
  const double abscissa0 = spectrum(problem.closed_loop(K)).spectral_abscissa;
  if (!(abscissa0 < -kStabilityTol)) {
    throw StabilityError("initial gain for Newton-Kleinman is not stabilizing", abscissa0);
  }

  const Eigen::LLT<Matrix> r_llt(problem.R);
  RiccatiSolution out;
  for (int it = 1; it <= max_iter; ++it) {
    // Each iterate stays stabilizing; the Lyapunov solver rejects it otherwise.
    const Matrix X = solve_lyapunov(problem.closed_loop(K), problem.Q + K.transpose() * problem.R * K,
                                    LyapunovForm::kAdjoint)
                         .X;
    const Gain K_next = r_llt.solve(problem.B.transpose() * X);
    const double res = riccati_residual(problem, X);
    out.residual_history.push_back(res);

    const bool stalled = out.residual_history.size() > 1 && res <= kAcceptResidual &&
                         res >= 0.5 * out.residual_history[out.residual_history.size() - 2];
    out.X = X;
    out.K = K_next;
    out.iterations = it;
    out.relative_residual = res;
    K = K_next;
    if (res <= kTargetResidual || stalled) break;
  }
  if (!(out.relative_residual <= kAcceptResidual)) {
    throw ConvergenceError("Newton-Kleinman iteration did not converge", out.residual_history);
  }
  // The returned gain is one Newton step past X; refresh X to match it.
  out.X = solve_lyapunov(problem.closed_loop(out.K), problem.Q + out.K.transpose() * problem.R * out.K,
                         LyapunovForm::kAdjoint)
              .X;
  out.relative_residual = riccati_residual(problem, out.X);
  return out;
}

}  // namespace lqrpg
