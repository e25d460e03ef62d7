#pragma once

#include <functional>
#include <variant>

#include "lqrpg/trace.hpp"

namespace lqrpg {

/// Smooth objective on R^n given by callbacks.
struct GenericObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  /// d^T Hess f(x) d
  std::function<double(const Vector& x, const Vector& d)> hess_quad;
};

/// x <- x - gamma g with gamma = |g|^2 / (g^T H g).
struct PureNewtonQuotient {};
/// x <- x - sigma gamma g, sigma in (0, 1].
struct DampedNewtonQuotient {
  double sigma = 1.0;
};
using GenericMode = std::variant<PureNewtonQuotient, DampedNewtonQuotient>;

/// Gradient method with the Newton-quotient step on a general smooth
/// function. The gradient callback is checked once against central
/// differences at x0 (ValidationError on mismatch). A non-positive quadratic
/// form, or a step that increases f, ends the run with Failure.
RunTrace generic_descent(const GenericObjective& objective, const Vector& x0, const GenericMode& mode,
                         double tol, int max_iter);

/// Fletcher-Reeves conjugate gradient with the Newton step length along each
/// direction; the same method the gain optimizer uses, on R^n.
RunTrace generic_conjugate_gradient(const GenericObjective& objective, const Vector& x0, double tol,
                                    int max_iter);

/// Central-difference gradient, step h_i = rel_step * max(1, |x_i|).
Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                                  double rel_step = 1e-6);

}  // namespace lqrpg
