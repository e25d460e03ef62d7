#include "lqrpg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

constexpr double kResidualRtol = 1e-9;
constexpr double kBlockRcondFloor = 1e-14;

struct Block {
  Eigen::Index start;
  Eigen::Index size;
};

std::vector<Block> diagonal_blocks(const Matrix& T) {
  std::vector<Block> blocks;
  const Eigen::Index n = T.rows();
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      i += 1;
    }
  }
  return blocks;
}

std::vector<std::complex<double>> schur_eigenvalues(const Matrix& T) {
  std::vector<std::complex<double>> ev;
  ev.reserve(static_cast<size_t>(T.rows()));
  for (const Block& b : diagonal_blocks(T)) {
    if (b.size == 1) {
      ev.emplace_back(T(b.start, b.start), 0.0);
      continue;
    }
    const double a = T(b.start, b.start), bb = T(b.start, b.start + 1);
    const double c = T(b.start + 1, b.start), d = T(b.start + 1, b.start + 1);
    const double half_tr = 0.5 * (a + d);
    const double disc = 0.25 * (a - d) * (a - d) + bb * c;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      ev.emplace_back(half_tr - s, 0.0);
      ev.emplace_back(half_tr + s, 0.0);
    } else {
      const double s = std::sqrt(-disc);
      ev.emplace_back(half_tr, -s);
      ev.emplace_back(half_tr, s);
    }
  }
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return ev;
}

Eigen::RealSchur<Matrix> real_schur(const Matrix& A, bool compute_u) {
  Eigen::RealSchur<Matrix> schur(A.rows());
  schur.compute(A, compute_u);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("real Schur iteration did not converge after " +
                               std::to_string(schur.getMaxIterations()) + " iterations",
                           {});
  }
  return schur;
}

Matrix kron(const Matrix& P, const Matrix& Q) {
  Matrix out(P.rows() * Q.rows(), P.cols() * Q.cols());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      out.block(i * Q.rows(), j * Q.cols(), Q.rows(), Q.cols()) = P(i, j) * Q;
    }
  }
  return out;
}

void require_square(const Matrix& A, const char* name) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw ValidationError(std::string(name) + " must be a nonempty square matrix");
  }
  if (!A.allFinite()) throw ValidationError(std::string(name) + " has non-finite entries");
}

// Solves S^T Z + Z S = C for symmetric C, with S quasi-upper-triangular.
// Blocks are visited column by column, upper triangle only; the lower
// triangle is filled by symmetry as soon as a block is known.
Matrix solve_quasi_triangular(const Matrix& S, const Matrix& C) {
  const Eigen::Index n = S.rows();
  const std::vector<Block> blocks = diagonal_blocks(S);
  Matrix Z = Matrix::Zero(n, n);

  for (size_t jb = 0; jb < blocks.size(); ++jb) {
    const auto [j0, q] = blocks[jb];
    for (size_t ib = 0; ib <= jb; ++ib) {
      const auto [i0, p] = blocks[ib];
      Matrix rhs = C.block(i0, j0, p, q);
      if (i0 > 0) {
        rhs.noalias() -= S.block(0, i0, i0, p).transpose() * Z.block(0, j0, i0, q);
      }
      if (j0 > 0) {
        rhs.noalias() -= Z.block(i0, 0, p, j0) * S.block(0, j0, j0, q);
      }

      const Matrix Sii = S.block(i0, i0, p, p);
      const Matrix Sjj = S.block(j0, j0, q, q);
      Matrix Zij(p, q);
      if (p == 1 && q == 1) {
        const double denom = Sii(0, 0) + Sjj(0, 0);
        if (std::abs(denom) < kBlockRcondFloor * (std::abs(Sii(0, 0)) + std::abs(Sjj(0, 0)) + 1.0)) {
          throw IllConditionedError("Lyapunov back-substitution: singular 1x1 block",
                                    1.0 / std::max(std::abs(denom), 1e-300));
        }
        Zij(0, 0) = rhs(0, 0) / denom;
      } else {
        // (I_q kron Sii^T + Sjj^T kron I_p) vec(Zij) = vec(rhs)
        const Eigen::Index k = p * q;
        Matrix K = Matrix::Zero(k, k);
        K += kron(Matrix::Identity(q, q), Sii.transpose());
        K += kron(Sjj.transpose(), Matrix::Identity(p, p));
        Eigen::FullPivLU<Matrix> lu(K);
        const double rcond = lu.rcond();
        if (!(rcond > kBlockRcondFloor)) {
          throw IllConditionedError("Lyapunov back-substitution: ill-conditioned block",
                                    rcond > 0.0 ? 1.0 / rcond : INFINITY);
        }
        const Vector z = lu.solve(Eigen::Map<const Vector>(rhs.data(), k));
        Zij = Eigen::Map<const Matrix>(z.data(), p, q);
      }
      Z.block(i0, j0, p, q) = Zij;
      Z.block(j0, i0, q, p) = Zij.transpose();
    }
  }
  return Z;
}

void check_residual(const Matrix& A, const LyapunovSolution& sol, const Matrix& W) {
  const double scale = A.norm() * sol.X.norm() + W.norm();
  if (!(sol.residual_norm <= kResidualRtol * scale) || !sol.X.allFinite()) {
    throw IllConditionedError("Lyapunov solution residual " + std::to_string(sol.residual_norm) +
                                  " exceeds tolerance",
                              scale > 0.0 ? sol.residual_norm / (kResidualRtol * scale) : INFINITY);
  }
}

}  // namespace

SpectrumSummary spectrum(const Matrix& A) {
  require_square(A, "A");
  const auto schur = real_schur(A, /*compute_u=*/false);
  SpectrumSummary out;
  out.eigenvalues = schur_eigenvalues(schur.matrixT());
  out.spectral_abscissa = out.eigenvalues.back().real();
  out.stability_degree = -out.spectral_abscissa;
  return out;
}

bool is_stabilizing(const Matrix& A, double tol) {
  return spectrum(A).spectral_abscissa < -tol;
}

double lyapunov_residual(const Matrix& A, const Matrix& X, const Matrix& W, LyapunovForm form) {
  if (form == LyapunovForm::kAdjoint) return (A.transpose() * X + X * A + W).norm();
  return (A * X + X * A.transpose() + W).norm();
}

void LyapunovSolver::factorize(const Matrix& A) {
  require_square(A, "A");
  A_ = A;
  const auto schur = real_schur(A, /*compute_u=*/true);
  U_ = schur.matrixU();
  T_ = schur.matrixT();
  abscissa_ = schur_eigenvalues(T_).back().real();
  T_flip_ = T_.transpose().reverse();
}

LyapunovSolver::LyapunovSolver(const Matrix& A) {
  factorize(A);
  if (!(abscissa_ < 0.0)) {
    throw StabilityError("Lyapunov solve requires a Hurwitz matrix", abscissa_);
  }
}

std::optional<LyapunovSolver> LyapunovSolver::if_stable(const Matrix& A, double tol) {
  LyapunovSolver s;
  s.factorize(A);
  if (!(s.abscissa_ < -tol)) return std::nullopt;
  return s;
}

LyapunovSolution LyapunovSolver::solve(const Matrix& W, LyapunovForm form) const {
  if (W.rows() != A_.rows() || W.cols() != A_.cols()) {
    throw ValidationError("Lyapunov right-hand side has the wrong shape");
  }
  const Matrix Ws = symmetrize(W);
  const Matrix C = -(U_.transpose() * Ws * U_);
  Matrix Z;
  if (form == LyapunovForm::kAdjoint) {
    Z = solve_quasi_triangular(T_, C);
  } else {
    Z = solve_quasi_triangular(T_flip_, C.reverse()).reverse();
  }
  LyapunovSolution sol;
  sol.X = symmetrize(U_ * Z * U_.transpose());
  sol.residual_norm = lyapunov_residual(A_, sol.X, Ws, form);
  check_residual(A_, sol, Ws);
  return sol;
}

LyapunovSolution solve_lyapunov(const Matrix& A, const Matrix& W, LyapunovForm form) {
  return LyapunovSolver(A).solve(W, form);
}

LyapunovSolution solve_lyapunov_kron(const Matrix& A, const Matrix& W, LyapunovForm form) {
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  if (n > 32) throw ValidationError("Kronecker Lyapunov solver is limited to order 32");
  if (W.rows() != n || W.cols() != n) {
    throw ValidationError("Lyapunov right-hand side has the wrong shape");
  }
  const double abscissa = spectrum(A).spectral_abscissa;
  if (!(abscissa < 0.0)) throw StabilityError("Lyapunov solve requires a Hurwitz matrix", abscissa);

  const Matrix I = Matrix::Identity(n, n);
  // Column-major vec: vec(P X Q) = (Q^T kron P) vec(X).
  const Matrix op = form == LyapunovForm::kAdjoint ? Matrix(kron(I, A.transpose()) + kron(A.transpose(), I))
                                                   : Matrix(kron(I, A) + kron(A, I));
  const Vector rhs = -Eigen::Map<const Vector>(W.data(), n * n);
  const Vector x = op.fullPivLu().solve(rhs);

  LyapunovSolution sol;
  sol.X = symmetrize(Eigen::Map<const Matrix>(x.data(), n, n));
  sol.residual_norm = lyapunov_residual(A, sol.X, W, form);
  check_residual(A, sol, W);
  return sol;
}

double lambda_min(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lambda_max(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

bool is_spd(const Matrix& S, double rel_pivot_tol) {
  if (S.rows() != S.cols() || S.rows() == 0 || !S.allFinite()) return false;
  const double scale = S.cwiseAbs().maxCoeff();
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300)) return false;
  Eigen::LDLT<Matrix> ldlt(S);
  if (ldlt.info() != Eigen::Success) return false;
  const double max_diag = S.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) return false;
  return ldlt.vectorD().minCoeff() > rel_pivot_tol * max_diag;
}

}  // namespace lqrpg
