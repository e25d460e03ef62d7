#pragma once

// Shared line-search loops for the matrix-gain methods and the generic
// vector-space methods. An oracle provides:
//   std::optional<Point> sample(const Matrix& x) const   // nullopt outside the domain
//   double curvature(const Point& at, const Matrix& d) const  // d^T H d
// where Point exposes `double f` and `Matrix grad`. An oracle may also provide
//   double step_cap(const Point& at, const Matrix& d) const
// bounding every trial step along d.

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "lqrpg/trace.hpp"

namespace lqrpg::detail {

template <class O>
concept DescentOracle = requires(const O& o, const Matrix& x, const typename O::Point& p) {
  { o.sample(x) } -> std::same_as<std::optional<typename O::Point>>;
  { o.curvature(p, x) } -> std::convertible_to<double>;
  { p.f } -> std::convertible_to<double>;
  { p.grad } -> std::convertible_to<const Matrix&>;
};

inline constexpr int kMaxShrinks = 60;
inline constexpr double kInfiniteStep = std::numeric_limits<double>::infinity();

struct NewtonArmijoParams {
  double eps = 1e-6;
  double armijo_c = 0.01;
  double shrink = 0.5;
  double T1 = 1.0;
  int max_iter = 500;
  /// Fletcher-Reeves conjugate directions with a steepest-descent restart
  /// whenever the full conjugate step is rejected.
  bool conjugate = false;
};

/// Newton quotient along d: -<g, d> / (d^T H d), or +inf when the curvature
/// is not positive.
template <DescentOracle O>
double newton_step_along(const O& oracle, const typename O::Point& at, const Matrix& d) {
  const double slope = -frobenius_inner(at.grad, d);
  const double curv = oracle.curvature(at, d);
  if (!(curv > 0.0)) return kInfiniteStep;
  return slope / curv;
}

template <DescentOracle O>
double step_cap(const O& oracle, const typename O::Point& at, const Matrix& d) {
  if constexpr (requires { oracle.step_cap(at, d); }) {
    return oracle.step_cap(at, d);
  } else {
    return kInfiniteStep;
  }
}

template <DescentOracle O>
RunTrace newton_armijo_descent(const O& oracle, typename O::Point start, Matrix x,
                               const NewtonArmijoParams& prm) {
  using Point = typename O::Point;
  RunTrace trace;
  trace.initial_f = start.f;
  trace.initial_grad_norm = start.grad.norm();
  Point pt = std::move(start);

  Matrix p_prev;
  double prev_grad_sq = 0.0;
  bool restart = true;

  for (int it = 0;; ++it) {
    const double grad_sq = pt.grad.squaredNorm();
    if (std::sqrt(grad_sq) < prm.eps) {
      trace.termination = Termination::kGradTol;
      break;
    }
    if (it >= prm.max_iter) {
      trace.termination = Termination::kMaxIter;
      break;
    }

    int shrinks = 0;
    Matrix direction = -pt.grad;
    bool conjugate_step = false;
    if (prm.conjugate && !restart) {
      const Matrix p = -pt.grad + (grad_sq / prev_grad_sq) * p_prev;
      if (frobenius_inner(pt.grad, p) < 0.0) {
        direction = p;
        conjugate_step = true;
      }
    }

    std::optional<Point> accepted;
    double t = 0.0;
    if (conjugate_step) {
      t = std::min(prm.T1, newton_step_along(oracle, pt, direction));
      t = std::min(t, step_cap(oracle, pt, direction));
      const double slope = -frobenius_inner(pt.grad, direction);
      auto cand = oracle.sample(x + t * direction);
      if (cand && cand->f <= pt.f - prm.armijo_c * t * slope) {
        accepted = std::move(cand);
      } else {
        direction = -pt.grad;
        ++shrinks;
      }
    }
    if (!accepted) {
      t = std::min(prm.T1, newton_step_along(oracle, pt, direction));
      t = std::min(t, step_cap(oracle, pt, direction));
      while (true) {
        auto cand = oracle.sample(x + t * direction);
        if (cand && cand->f <= pt.f - prm.armijo_c * t * grad_sq) {
          accepted = std::move(cand);
          break;
        }
        if (++shrinks > kMaxShrinks) break;
        t *= prm.shrink;
      }
    }
    if (!accepted) {
      trace.termination = Termination::kFailure;
      trace.failure_reason = "step reductions exceeded " + std::to_string(kMaxShrinks);
      break;
    }

    x += t * direction;
    p_prev = direction;
    prev_grad_sq = grad_sq;
    restart = false;
    pt = std::move(*accepted);
    trace.iterations.push_back(
        {it + 1, pt.f, pt.grad.norm(), t, shrinks, /*stabilizing=*/true});
  }
  trace.terminal_gain = std::move(x);
  return trace;
}

}  // namespace lqrpg::detail
