#pragma once

#include <string>
#include <vector>

#include "lqrpg/cost.hpp"
#include "lqrpg/trace.hpp"

namespace lqrpg {

struct FlowSample {
  double t = 0.0;
  Gain K;
  double f = 0.0;
  double grad_norm = 0.0;
};

struct FlowTrace {
  std::vector<FlowSample> samples;  // samples[0] is the initial state
  int steps = 0;
  int rejected_steps = 0;
  Termination termination = Termination::kMaxIter;  // kMaxIter here means t_end reached
  std::string failure_reason;
};

/// Integrates K'(t) = -grad f(K) from K0 with an adaptive Dormand-Prince 5(4)
/// pair. Steps whose stages leave the stabilizing set, or whose endpoint
/// increases f, are rejected and retried with a smaller step. Stops at t_end
/// or once |grad f|_F <= grad_tol.
FlowTrace gradient_flow(const LqrProblem& problem, const Gain& K0, double t_end, double grad_tol,
                        double rtol = 1e-8);

}  // namespace lqrpg
