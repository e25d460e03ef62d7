#include "lqrpg/problem.hpp"

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

void require_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (M.rows() != rows || M.cols() != cols) {
    throw ValidationError(std::string(name) + " has shape " + std::to_string(M.rows()) + "x" +
                          std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  if (!M.allFinite()) throw ValidationError(std::string(name) + " has non-finite entries");
}

}  // namespace

bool LqrProblem::is_state_feedback() const {
  return C.rows() == C.cols() && C == Matrix::Identity(C.rows(), C.cols());
}

void LqrProblem::validate() const {
  const Eigen::Index n = A.rows();
  if (n == 0) throw ValidationError("A must be nonempty");
  require_shape(A, n, n, "A");
  if (B.cols() == 0) throw ValidationError("B must have at least one column");
  require_shape(B, n, B.cols(), "B");
  if (C.rows() == 0) throw ValidationError("C must have at least one row");
  require_shape(C, C.rows(), n, "C");
  require_shape(Q, n, n, "Q");
  require_shape(R, m(), m(), "R");
  require_shape(Sigma, n, n, "Sigma");

  if (!is_spd(Q)) throw ValidationError("Q must be symmetric positive definite");
  if (!is_spd(R)) throw ValidationError("R must be symmetric positive definite");
  if (!is_spd(Sigma)) throw ValidationError("Sigma must be symmetric positive definite");
  if (B.isZero(0.0)) throw ValidationError("B must be nonzero");
  if (C.rows() > n) throw ValidationError("C must have full row rank");
  Eigen::JacobiSVD<Matrix> svd(C);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) throw ValidationError("C must have full row rank");
}

Matrix LqrProblem::closed_loop(const Gain& K) const { return A - B * K * C; }

void validate_gain(const LqrProblem& problem, const Gain& K) {
  require_shape(K, problem.m(), problem.r(), "K");
}

}  // namespace lqrpg
