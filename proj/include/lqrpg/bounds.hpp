#pragma once

#include <optional>

#include "lqrpg/cost.hpp"

namespace lqrpg {

/// Lower bounds on f(K) that make the cost coercive on the stabilizing set.
struct CoercivityBounds {
  /// lambda_1(Sigma) lambda_1(Q) / (-2 Re lambda_n(A_K)); blows up at the boundary.
  double sigma_bound = 0.0;
  /// lambda_1(Sigma) lambda_1(R) |K|_F^2 lambda_1(C C^T) / (2|A| + 2|K|_F |B| |C|);
  /// grows without bound in |K|.
  double norm_bound = 0.0;
};

CoercivityBounds coercivity_bounds(const LqrProblem& problem, const Gain& K);
CoercivityBounds coercivity_bounds(const LqrProblem& problem, const CostEval& at);

struct SmoothnessConstant {
  double L = 0.0;
  double xi = 0.0;  // bound on |X'|_F over the sublevel set
};

/// Gradient Lipschitz constant on {K : f(K) <= f0}.
SmoothnessConstant smoothness_constant(const LqrProblem& problem, double f0);

/// Gradient-domination constant mu for state feedback on {K : f(K) <= f0}.
/// Throws UnsupportedForOutputFeedback when C != I.
double lpl_constant(const LqrProblem& problem, double f0, double fstar);

/// f(K) / lambda_1(Q + C^T K^T R K C), an upper bound on lambda_n(Y).
double y_trace_bound(const LqrProblem& problem, const Gain& K);
double y_trace_bound(const LqrProblem& problem, const CostEval& at);

/// 2|B| f / (lambda_1(Sigma) lambda_1(R)) + |A| / |B|, bounds |K|_F whenever f(K) <= fval.
double k_norm_bound(const LqrProblem& problem, double fval);

struct BoundsReport {
  double lower_bound_sigma = 0.0;
  double lower_bound_norm = 0.0;
  double L = 0.0;
  double xi = 0.0;
  std::optional<double> mu;  // state feedback only
  double f0 = 0.0;
};

/// All constants anchored at K0. mu is filled in only for state feedback and
/// only when fstar is given.
BoundsReport bounds_report(const LqrProblem& problem, const Gain& K0,
                           std::optional<double> fstar = std::nullopt);

}  // namespace lqrpg
