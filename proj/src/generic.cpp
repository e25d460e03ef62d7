#include "lqrpg/generic.hpp"

#include <cmath>
#include <limits>

#include "lqrpg/detail/descent_core.hpp"
#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

struct VectorPoint {
  Vector x;
  double f;
  Matrix grad;
};

class VectorOracle {
 public:
  using Point = VectorPoint;
  explicit VectorOracle(const GenericObjective& obj) : obj_(obj) {}

  std::optional<VectorPoint> sample(const Matrix& x) const {
    const Vector v = x.col(0);
    const double f = obj_.value(v);
    if (!std::isfinite(f)) return std::nullopt;
    return VectorPoint{v, f, obj_.gradient(v)};
  }
  double curvature(const VectorPoint& at, const Matrix& d) const { return obj_.hess_quad(at.x, d.col(0)); }

 private:
  const GenericObjective& obj_;
};

void check_callbacks(const GenericObjective& obj, const Vector& x0) {
  if (!obj.value || !obj.gradient || !obj.hess_quad) {
    throw ValidationError("generic objective needs value, gradient and hess_quad callbacks");
  }
  const Vector g = obj.gradient(x0);
  if (g.size() != x0.size()) throw ValidationError("gradient callback returned the wrong size");
  const Vector fd = finite_difference_gradient(obj.value, x0);
  const double scale = 1.0 + g.lpNorm<Eigen::Infinity>();
  if ((fd - g).lpNorm<Eigen::Infinity>() > 1e-4 * scale) {
    throw ValidationError("gradient callback disagrees with finite differences at x0");
  }
}

}  // namespace

Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                                  double rel_step) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x(i)));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

RunTrace generic_descent(const GenericObjective& objective, const Vector& x0, const GenericMode& mode,
                         double tol, int max_iter) {
  check_callbacks(objective, x0);
  const bool damped = std::holds_alternative<DampedNewtonQuotient>(mode);
  const double sigma = damped ? std::get<DampedNewtonQuotient>(mode).sigma : 1.0;
  if (!(sigma > 0.0 && sigma <= 1.0)) throw ValidationError("damping sigma must lie in (0, 1]");

  Vector x = x0;
  double f = objective.value(x);
  Vector g = objective.gradient(x);
  RunTrace trace;
  trace.initial_f = f;
  trace.initial_grad_norm = g.norm();

  for (int it = 0;; ++it) {
    if (g.norm() < tol) {
      trace.termination = Termination::kGradTol;
      break;
    }
    if (it >= max_iter) {
      trace.termination = Termination::kMaxIter;
      break;
    }
    const double form = objective.hess_quad(x, g);
    if (!(form > 0.0)) {
      trace.termination = Termination::kFailure;
      trace.failure_reason = "quadratic form along the gradient is not positive";
      break;
    }
    const double step = sigma * g.squaredNorm() / form;
    const Vector x_next = x - step * g;
    const double f_next = objective.value(x_next);
    if (!(f_next <= f)) {
      trace.termination = Termination::kFailure;
      trace.failure_reason = "step increased the objective";
      break;
    }
    x = x_next;
    f = f_next;
    g = objective.gradient(x);
    trace.iterations.push_back({it + 1, f, g.norm(), step, 0, true});
  }
  trace.terminal_gain = x;
  return trace;
}

RunTrace generic_conjugate_gradient(const GenericObjective& objective, const Vector& x0, double tol,
                                    int max_iter) {
  check_callbacks(objective, x0);
  detail::NewtonArmijoParams prm;
  prm.eps = tol;
  prm.T1 = std::numeric_limits<double>::infinity();
  prm.max_iter = max_iter;
  prm.conjugate = true;

  VectorOracle oracle(objective);
  auto start = oracle.sample(Matrix(x0));
  if (!start) throw ValidationError("objective is not finite at x0");
  return detail::newton_armijo_descent(oracle, std::move(*start), Matrix(x0), prm);
}

}  // namespace lqrpg
