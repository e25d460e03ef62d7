#include <gtest/gtest.h>

#include <cmath>

#include "lqrpg/errors.hpp"
#include "lqrpg/fixtures.hpp"
#include "lqrpg/linalg.hpp"
#include "support.hpp"

using namespace lqrpg;
using testing_support::Rng;

namespace {

double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST(Spectrum, NegativeIdentity) {
  const SpectrumSummary s = spectrum(-Matrix::Identity(3, 3));
  ASSERT_EQ(s.eigenvalues.size(), 3u);
  EXPECT_DOUBLE_EQ(s.spectral_abscissa, -1.0);
  EXPECT_DOUBLE_EQ(s.stability_degree, 1.0);
}

TEST(Spectrum, RotationHasZeroAbscissa) {
  Matrix A(2, 2);
  A << 0, 1, -1, 0;
  const SpectrumSummary s = spectrum(A);
  EXPECT_NEAR(s.spectral_abscissa, 0.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues[0].imag(), -1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues[1].imag(), 1.0, 1e-14);
}

TEST(Spectrum, TripleIntegratorClosedLoopRoots) {
  // s^3 + 2 s^2 + 2 s + 1 = (s + 1)(s^2 + s + 1)
  const Fixture fx = fixture(FixtureName::kEx33);
  Gain K(1, 3);
  K << 1, 2, 2;
  const SpectrumSummary s = spectrum(fx.problem.closed_loop(K));
  ASSERT_EQ(s.eigenvalues.size(), 3u);
  EXPECT_NEAR(s.eigenvalues[0].real(), -1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1].real(), -0.5, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1].imag(), -std::sqrt(3.0) / 2, 1e-12);
  EXPECT_NEAR(s.eigenvalues[2].imag(), std::sqrt(3.0) / 2, 1e-12);
  EXPECT_LT(s.spectral_abscissa, 0.0);
}

TEST(Spectrum, SortedByRealThenImaginary) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const SpectrumSummary s = spectrum(rng.gaussian(6, 6));
    for (size_t i = 1; i < s.eigenvalues.size(); ++i) {
      const auto a = s.eigenvalues[i - 1], b = s.eigenvalues[i];
      EXPECT_TRUE(a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag()));
    }
    EXPECT_EQ(s.stability_degree, -s.spectral_abscissa);
    EXPECT_EQ(s.spectral_abscissa, s.eigenvalues.back().real());
  }
}

TEST(Stability, Examples) {
  EXPECT_TRUE(is_stabilizing(-Matrix::Identity(2, 2), 1e-9));
  const Fixture ex33 = fixture(FixtureName::kEx33);
  Gain marginal(1, 3);
  marginal << 1, 1, 1;
  EXPECT_FALSE(is_stabilizing(ex33.problem.closed_loop(marginal)));
  const Fixture ex34 = fixture(FixtureName::kEx34, -1.0);
  EXPECT_TRUE(is_stabilizing(ex34.problem.closed_loop(Gain::Constant(1, 1, 5.0))));
}

TEST(Lyapunov, NegativeIdentity) {
  for (auto form : {LyapunovForm::kAdjoint, LyapunovForm::kDirect}) {
    const auto sol = solve_lyapunov(-Matrix::Identity(4, 4), Matrix::Identity(4, 4), form);
    EXPECT_LT((sol.X - 0.5 * Matrix::Identity(4, 4)).norm(), 1e-15);
  }
}

TEST(Lyapunov, ScalarClosedLoopCost) {
  const double k = 2.0;
  const auto sol = solve_lyapunov(Matrix::Constant(1, 1, -k / 2), Matrix::Constant(1, 1, 1 + k * k),
                                  LyapunovForm::kAdjoint);
  EXPECT_NEAR(sol.X(0, 0), 2.5, 1e-15);
}

TEST(Lyapunov, MatchesKroneckerOracle) {
  Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    const int n = rng.integer(1, 8);
    const Matrix A = rng.hurwitz(n, 0.1);
    const Matrix W = rng.spd(n);
    for (bool adjoint : {true, false}) {
      const auto form = adjoint ? LyapunovForm::kAdjoint : LyapunovForm::kDirect;
      const auto sol = solve_lyapunov(A, W, form);
      const Matrix ref = testing_support::kron_lyapunov(A, W, adjoint);
      EXPECT_LE(rel_diff(sol.X, ref), 1e-10) << "n=" << n << " adjoint=" << adjoint;
      EXPECT_LE(sol.residual_norm, 1e-9 * (A.norm() * sol.X.norm() + W.norm()));
      EXPECT_EQ(sol.X, sol.X.transpose());
      EXPECT_TRUE(is_spd(sol.X));
    }
  }
}

TEST(Lyapunov, ComplexEigenvaluesAndLargerOrder) {
  Rng rng(12);
  Matrix A = rng.gaussian(30, 30);
  A -= (testing_support::abscissa(A) + 0.05) * Matrix::Identity(30, 30);
  const Matrix W = rng.spd(30);
  const auto sol = solve_lyapunov(A, W, LyapunovForm::kDirect);
  EXPECT_LE(lyapunov_residual(A, sol.X, W, LyapunovForm::kDirect), 1e-9 * (A.norm() * sol.X.norm() + W.norm()));
}

TEST(Lyapunov, RefusesNonHurwitz) {
  Matrix A(2, 2);
  A << 0.1, 0, 0, -1;
  try {
    solve_lyapunov(A, Matrix::Identity(2, 2), LyapunovForm::kAdjoint);
    FAIL() << "expected StabilityError";
  } catch (const StabilityError& e) {
    EXPECT_NEAR(e.spectral_abscissa(), 0.1, 1e-14);
  }
}

TEST(LyapunovKron, Examples) {
  EXPECT_NEAR(solve_lyapunov_kron(Matrix::Constant(1, 1, -2), Matrix::Constant(1, 1, 4), LyapunovForm::kAdjoint).X(0, 0),
              1.0, 1e-15);
  Matrix W = Matrix::Zero(2, 2);
  W.diagonal() << 2, 4;
  Matrix expected = Matrix::Zero(2, 2);
  expected.diagonal() << 1, 2;
  EXPECT_LT((solve_lyapunov_kron(-Matrix::Identity(2, 2), W, LyapunovForm::kAdjoint).X - expected).norm(), 1e-15);
}

TEST(LyapunovKron, AgreesWithSchurSolverOrder3) {
  Rng rng(5);
  const Matrix A = rng.hurwitz(3), W = rng.spd(3);
  for (auto form : {LyapunovForm::kAdjoint, LyapunovForm::kDirect}) {
    EXPECT_LE(rel_diff(solve_lyapunov(A, W, form).X, solve_lyapunov_kron(A, W, form).X), 1e-10);
  }
}

TEST(LyapunovKron, RefusesLargeOrder) {
  EXPECT_THROW(solve_lyapunov_kron(-Matrix::Identity(33, 33), Matrix::Identity(33, 33), LyapunovForm::kAdjoint),
               ValidationError);
}

TEST(LyapunovSolver, ReusesFactorization) {
  Rng rng(8);
  const Matrix A = rng.hurwitz(5);
  const LyapunovSolver solver(A);
  for (int t = 0; t < 3; ++t) {
    const Matrix W = rng.spd(5);
    EXPECT_LE(rel_diff(solver.solve(W, LyapunovForm::kAdjoint).X, testing_support::kron_lyapunov(A, W, true)), 1e-10);
  }
  EXPECT_FALSE(LyapunovSolver::if_stable(Matrix::Identity(2, 2)).has_value());
}

// Basic facts about Lyapunov equations, 100 randomized instances each.

TEST(LyapunovFacts, TraceDuality) {
  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 8);
    const Matrix A = rng.hurwitz(n, rng.uniform(0.05, 1.0));
    const Matrix W = rng.spd(n), V = rng.spd(n);
    const Matrix X = solve_lyapunov(A, W, LyapunovForm::kAdjoint).X;
    const Matrix Y = solve_lyapunov(A, V, LyapunovForm::kDirect).X;
    const double lhs = (X * V).trace(), rhs = (Y * W).trace();
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * (std::abs(lhs) + 1));
  }
}

TEST(LyapunovFacts, Monotonicity) {
  Rng rng(102);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 8);
    const Matrix A = rng.hurwitz(n, rng.uniform(0.05, 1.0));
    const Matrix W2 = rng.spd(n);
    const Matrix W1 = W2 + rng.spd(n, 0.05);
    const Matrix D = solve_lyapunov(A, W1, LyapunovForm::kAdjoint).X - solve_lyapunov(A, W2, LyapunovForm::kAdjoint).X;
    EXPECT_GT(lambda_min(D), 0.0);
  }
}

TEST(LyapunovFacts, CrossTermBound) {
  Rng rng(103);
  for (int t = 0; t < 100; ++t) {
    const int m = rng.integer(1, 6), n = rng.integer(1, 6);
    const Matrix N = rng.gaussian(m, n), L = rng.gaussian(m, n);
    for (double alpha : {0.1, 1.0, 10.0}) {
      const Matrix diff = alpha * N.transpose() * N + L.transpose() * L / alpha - N.transpose() * L - L.transpose() * N;
      EXPECT_GE(lambda_min(symmetrize(diff)), -1e-10);
    }
  }
}

TEST(LyapunovFacts, TraceSandwich) {
  Rng rng(104);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 8);
    const Matrix G1 = rng.gaussian(n, rng.integer(1, n)), G2 = rng.gaussian(n, rng.integer(1, n));
    const Matrix P = G1 * G1.transpose(), S = G2 * G2.transpose();
    const double tr = (P * S).trace(), slack = 1e-10 * (1 + P.norm() * S.norm());
    EXPECT_LE(lambda_min(P) * S.trace(), tr + slack);
    EXPECT_LE(tr, lambda_max(P) * S.trace() + slack);
  }
}

TEST(LyapunovFacts, LowerEigenvalueBounds) {
  Rng rng(105);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 8);
    const Matrix A = rng.hurwitz(n, rng.uniform(0.05, 2.0));
    const Matrix Q = rng.spd(n);
    const Matrix X = solve_lyapunov(A, Q, LyapunovForm::kAdjoint).X;
    const double sigma = spectrum(A).stability_degree;
    EXPECT_GE(lambda_max(X), lambda_min(Q) / (2 * sigma) * (1 - 1e-10));
    EXPECT_GE(lambda_min(X), lambda_min(Q) / (2 * spectral_norm(A)) * (1 - 1e-10));
  }
}

TEST(LyapunovFacts, BellmanQuadrature) {
  // x0^T X x0 equals the integral of x(t)^T W x(t) along x' = A x.
  Rng rng(106);
  for (int t = 0; t < 3; ++t) {
    const Matrix A = rng.hurwitz(3, 0.5);
    const Matrix W = rng.spd(3);
    const Vector x0 = rng.gaussian(3, 1);
    const Matrix X = solve_lyapunov(A, W, LyapunovForm::kAdjoint).X;
    double horizon = 1.0;
    while ((Matrix(A * horizon).exp() * x0).norm() >= 1e-10) horizon *= 1.5;
    auto integrand = [&](double s) {
      const Vector x = Matrix(A * s).exp() * x0;
      return x.dot(W * x);
    };
    double total = 0.0;
    const int pieces = 64;
    for (int i = 0; i < pieces; ++i) {
      total += testing_support::simpson(integrand, horizon * i / pieces, horizon * (i + 1) / pieces, 1e-13);
    }
    const double expected = x0.dot(X * x0);
    EXPECT_LE(std::abs(total - expected), 1e-6 * expected);
  }
}

TEST(Helpers, SpdCheck) {
  EXPECT_TRUE(is_spd(Matrix::Identity(3, 3)));
  Matrix S = Matrix::Identity(2, 2);
  S(1, 1) = 0.0;
  EXPECT_FALSE(is_spd(S));
  Matrix N(2, 2);
  N << 1, 2, 0, 1;
  EXPECT_FALSE(is_spd(N));
}
