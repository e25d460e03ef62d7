#include "lqrpg/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kB5 = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                       -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kB4 = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

FlowTrace gradient_flow(const LqrProblem& problem, const Gain& K0, double t_end, double grad_tol,
                        double rtol) {
  if (!(t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (!(rtol > 0.0)) throw ValidationError("rtol must be positive");
  problem.validate();
  CostEval pt = evaluate(problem, K0);

  FlowTrace trace;
  double t = 0.0;
  Gain K = K0;
  trace.samples.push_back({t, K, pt.f, pt.grad_norm()});
  double h = std::min(t_end, 1e-2 / std::max(1.0, pt.grad_norm()));
  const double atol = rtol;

  while (true) {
    if (pt.grad_norm() <= grad_tol) {
      trace.termination = Termination::kGradTol;
      break;
    }
    if (t >= t_end) {
      trace.termination = Termination::kMaxIter;
      break;
    }
    h = std::min(h, t_end - t);
    if (h < 1e-14 * std::max(1.0, t)) {
      trace.termination = Termination::kFailure;
      trace.failure_reason = "step size underflow near the boundary of the stabilizing set";
      break;
    }

    std::array<Matrix, 7> k;
    k[0] = -pt.grad;
    bool left_domain = false;
    std::optional<CostEval> end;
    for (int s = 1; s < 7 && !left_domain; ++s) {
      Matrix stage = K;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) stage += h * kA[s][j] * k[j];
      }
      auto ev = try_evaluate(problem, stage);
      if (!ev) {
        left_domain = true;
        break;
      }
      k[s] = -ev->grad;
      if (s == 6) end = std::move(ev);
    }
    if (left_domain) {
      ++trace.rejected_steps;
      h *= 0.25;
      continue;
    }

    // Stage 6 is evaluated at the 5th-order solution (FSAL).
    Matrix err = Matrix::Zero(K.rows(), K.cols());
    for (int s = 0; s < 7; ++s) err += h * (kB5[s] - kB4[s]) * k[s];
    const Gain& K_new = end->K;
    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < K.size(); ++i) {
      const double scale = atol + rtol * std::max(std::abs(K(i)), std::abs(K_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }
    const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);

    // The exact flow strictly decreases f, so a computed increase marks a bad
    // step even at rounding level.
    if (err_norm > 1.0 || end->f > pt.f) {
      ++trace.rejected_steps;
      h *= err_norm > 1.0 ? factor : 0.5;
      continue;
    }
    t += h;
    K = K_new;
    pt = std::move(*end);
    ++trace.steps;
    trace.samples.push_back({t, K, pt.f, pt.grad_norm()});
    h *= factor;
  }
  return trace;
}

}  // namespace lqrpg
