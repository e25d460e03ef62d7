#include "lqrpg/bounds.hpp"

#include <cmath>

#include "lqrpg/errors.hpp"

namespace lqrpg {

CoercivityBounds coercivity_bounds(const LqrProblem& problem, const CostEval& at) {
  const double l1_sigma = lambda_min(problem.Sigma);
  CoercivityBounds out;
  out.sigma_bound = l1_sigma * lambda_min(problem.Q) / (-2.0 * at.spectral_abscissa);

  const double k_fro = at.K.norm();
  const double numer = l1_sigma * lambda_min(problem.R) * k_fro * k_fro *
                       lambda_min(problem.C * problem.C.transpose());
  const double denom = 2.0 * spectral_norm(problem.A) +
                       2.0 * k_fro * spectral_norm(problem.B) * spectral_norm(problem.C);
  // 0/0 only when K = 0 and A = 0, in which case the bound is trivially 0.
  out.norm_bound = numer == 0.0 ? 0.0 : numer / denom;
  return out;
}

CoercivityBounds coercivity_bounds(const LqrProblem& problem, const Gain& K) {
  return coercivity_bounds(problem, evaluate(problem, K));
}

SmoothnessConstant smoothness_constant(const LqrProblem& problem, double f0) {
  if (!(f0 > 0.0)) throw ValidationError("smoothness_constant requires f0 > 0");
  const double l1_sigma = lambda_min(problem.Sigma);
  const double l1_q = lambda_min(problem.Q);
  const double ln_r = lambda_max(problem.R);
  const double norm_b = spectral_norm(problem.B);
  const double norm_c = spectral_norm(problem.C);
  const double fro_c = problem.C.norm();
  const double n = static_cast<double>(problem.n());

  const double a = f0 * norm_b / (l1_sigma * l1_q);
  SmoothnessConstant out;
  out.xi = std::sqrt(n) * f0 / l1_sigma * (a + std::sqrt(a * a + ln_r));
  out.L = 2.0 * f0 / l1_q * (ln_r * norm_c * norm_c + norm_b * fro_c * out.xi);
  return out;
}

double lpl_constant(const LqrProblem& problem, double f0, double fstar) {
  if (!problem.is_state_feedback()) {
    throw UnsupportedForOutputFeedback("the gradient-domination constant is defined for C = I only");
  }
  if (!(fstar > 0.0) || !(f0 >= fstar)) {
    throw ValidationError("lpl_constant requires f0 >= fstar > 0");
  }
  const double l1_sigma = lambda_min(problem.Sigma);
  const double l1_r = lambda_min(problem.R);
  const double norm_b = spectral_norm(problem.B);
  const double d = spectral_norm(problem.A) + norm_b * norm_b * f0 / (l1_sigma * l1_r);
  return l1_r * l1_sigma * l1_sigma * lambda_min(problem.Q) / (8.0 * fstar * d * d);
}

double y_trace_bound(const LqrProblem& problem, const CostEval& at) {
  const Matrix KC = at.K * problem.C;
  return at.f / lambda_min(problem.Q + KC.transpose() * problem.R * KC);
}

double y_trace_bound(const LqrProblem& problem, const Gain& K) {
  return y_trace_bound(problem, evaluate(problem, K));
}

double k_norm_bound(const LqrProblem& problem, double fval) {
  if (!(fval > 0.0)) throw ValidationError("k_norm_bound requires fval > 0");
  const double norm_b = spectral_norm(problem.B);
  return 2.0 * norm_b * fval / (lambda_min(problem.Sigma) * lambda_min(problem.R)) +
         spectral_norm(problem.A) / norm_b;
}

BoundsReport bounds_report(const LqrProblem& problem, const Gain& K0, std::optional<double> fstar) {
  const CostEval at = evaluate(problem, K0);
  const CoercivityBounds cb = coercivity_bounds(problem, at);
  const SmoothnessConstant sc = smoothness_constant(problem, at.f);
  BoundsReport out;
  out.lower_bound_sigma = cb.sigma_bound;
  out.lower_bound_norm = cb.norm_bound;
  out.L = sc.L;
  out.xi = sc.xi;
  out.f0 = at.f;
  if (problem.is_state_feedback() && fstar) out.mu = lpl_constant(problem, at.f, *fstar);
  return out;
}

}  // namespace lqrpg
