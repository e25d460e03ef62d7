#pragma once

#include <string>

#include "lqrpg/linalg.hpp"

namespace lqrpg {

/// Feedback gain K (m x r) in u = -K y.
using Gain = Matrix;

/// Plant x' = A x + B u, y = C x, with cost weights Q, R and initial-state
/// covariance Sigma.
struct LqrProblem {
  Matrix A;      // n x n
  Matrix B;      // n x m
  Matrix C;      // r x n
  Matrix Q;      // n x n, SPD
  Matrix R;      // m x m, SPD
  Matrix Sigma;  // n x n, SPD
  std::string label;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index r() const { return C.rows(); }

  /// C is exactly the identity (state feedback).
  bool is_state_feedback() const;

  /// Checks shapes, SPD weights, full row rank of C and B != 0.
  /// Throws ValidationError naming the offending field.
  void validate() const;

  /// A - B K C.
  Matrix closed_loop(const Gain& K) const;
};

/// Gain shape check; throws ValidationError.
void validate_gain(const LqrProblem& problem, const Gain& K);

}  // namespace lqrpg
