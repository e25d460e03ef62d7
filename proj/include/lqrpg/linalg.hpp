#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lqrpg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default margin on the spectral abscissa separating "stable" from "marginal".
inline constexpr double kStabilityTol = 1e-9;

struct SpectrumSummary {
  /// Sorted by real part ascending, ties by imaginary part ascending.
  std::vector<std::complex<double>> eigenvalues;
  double spectral_abscissa = 0.0;
  /// Always exactly -spectral_abscissa.
  double stability_degree = 0.0;
};

/// Eigenvalues of a square matrix via the real Schur form.
/// Throws ConvergenceError if the QR iteration does not converge.
SpectrumSummary spectrum(const Matrix& A);

/// True iff the spectral abscissa of A is below -tol.
bool is_stabilizing(const Matrix& A, double tol = kStabilityTol);

enum class LyapunovForm {
  kAdjoint,  // A^T X + X A + W = 0
  kDirect,   // A X + X A^T + W = 0
};

struct LyapunovSolution {
  Matrix X;
  /// Frobenius norm of the equation residual.
  double residual_norm = 0.0;
};

/// Bartels-Stewart solver. The real Schur factorization of A is computed once
/// at construction and shared by every subsequent solve, in either form.
class LyapunovSolver {
 public:
  /// Throws StabilityError if A is not Hurwitz.
  explicit LyapunovSolver(const Matrix& A);

  /// Factorizes A only if its spectral abscissa is below -tol; a single Schur
  /// decomposition serves both the stability test and the solves.
  static std::optional<LyapunovSolver> if_stable(const Matrix& A, double tol = kStabilityTol);

  LyapunovSolution solve(const Matrix& W, LyapunovForm form) const;

  const Matrix& matrix() const { return A_; }
  double spectral_abscissa() const { return abscissa_; }
  Eigen::Index order() const { return A_.rows(); }

 private:
  LyapunovSolver() = default;
  void factorize(const Matrix& A);

  Matrix A_;
  Matrix U_;        // A = U T U^T
  Matrix T_;        // quasi-upper-triangular
  Matrix T_flip_;   // J T^T J, quasi-upper-triangular, used for the direct form
  double abscissa_ = 0.0;
};

LyapunovSolution solve_lyapunov(const Matrix& A, const Matrix& W, LyapunovForm form);

/// Dense Kronecker-product solver; O(n^6), order limited to 32. Kept as an
/// independent reference for the Schur-based solver.
LyapunovSolution solve_lyapunov_kron(const Matrix& A, const Matrix& W, LyapunovForm form);

/// Residual of the Lyapunov equation in the given form.
double lyapunov_residual(const Matrix& A, const Matrix& X, const Matrix& W, LyapunovForm form);

// Small helpers on symmetric / general matrices.

/// Smallest eigenvalue of a symmetric matrix.
double lambda_min(const Matrix& S);
/// Largest eigenvalue of a symmetric matrix.
double lambda_max(const Matrix& S);
/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& M);
Matrix symmetrize(const Matrix& M);

/// Symmetric positive definite test: symmetric to 1e-12 relative and every
/// LDL^T pivot exceeds rel_pivot_tol times the largest diagonal entry.
bool is_spd(const Matrix& S, double rel_pivot_tol = 1e-12);

/// Frobenius inner product <P, Q> = Tr(P^T Q).
inline double frobenius_inner(const Matrix& P, const Matrix& Q) { return P.cwiseProduct(Q).sum(); }

}  // namespace lqrpg
