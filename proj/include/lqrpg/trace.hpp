#pragma once

#include <string>
#include <vector>

#include "lqrpg/linalg.hpp"

namespace lqrpg {

/// One accepted iteration: the state reached by the step, and the step that
/// reached it.
struct IterationRecord {
  int index = 0;  // 1-based
  double f = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  int shrinks = 0;
  bool stabilizing = true;
};

enum class Termination { kGradTol, kMaxIter, kFailure };

const char* to_string(Termination t);

struct RunTrace {
  double initial_f = 0.0;
  double initial_grad_norm = 0.0;
  std::vector<IterationRecord> iterations;
  Matrix terminal_gain;
  Termination termination = Termination::kMaxIter;
  std::string failure_reason;

  int iteration_count() const { return static_cast<int>(iterations.size()); }
  double final_f() const { return iterations.empty() ? initial_f : iterations.back().f; }
  double final_grad_norm() const {
    return iterations.empty() ? initial_grad_norm : iterations.back().grad_norm;
  }
  int total_shrinks() const;
  /// Number of iterations with at least one step reduction.
  int shrink_events() const;
};

}  // namespace lqrpg
