#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the library's solvers: oracles are Kronecker solves, finite differences,
// matrix exponentials and plain RK4.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <functional>
#include <random>

#include "lqrpg/problem.hpp"

namespace testing_support {

using lqrpg::Gain;
using lqrpg::LqrProblem;
using lqrpg::Matrix;
using lqrpg::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>()(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Matrix gaussian(Eigen::Index r, Eigen::Index c) {
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < M.size(); ++i) M(i) = normal();
    return M;
  }
  Matrix unit_direction(Eigen::Index r, Eigen::Index c) {
    Matrix E = gaussian(r, c);
    return E / E.norm();
  }
  Matrix spd(Eigen::Index n, double shift = 0.1) {
    Matrix G = gaussian(n, n);
    return G * G.transpose() / static_cast<double>(n) + shift * Matrix::Identity(n, n);
  }
  /// Random matrix shifted so its spectral abscissa is -margin.
  Matrix hurwitz(Eigen::Index n, double margin = 0.3) {
    Matrix G = gaussian(n, n);
    const double abscissa = G.eigenvalues().real().maxCoeff();
    return G - (abscissa + margin) * Matrix::Identity(n, n);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline double abscissa(const Matrix& A) { return A.eigenvalues().real().maxCoeff(); }

/// Solves A^T X + X A + W = 0 (adjoint) or A X + X A^T + W = 0 through the
/// vectorized Kronecker system.
inline Matrix kron_lyapunov(const Matrix& A, const Matrix& W, bool adjoint) {
  const Eigen::Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix At = adjoint ? Matrix(A.transpose()) : A;
  const Matrix op = Eigen::kroneckerProduct(I, At) + Eigen::kroneckerProduct(At, I);
  const Vector w = Eigen::Map<const Vector>(W.data(), W.size());
  const Vector x = op.fullPivLu().solve(-w);
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

/// f(K) = Tr(X Sigma) through the Kronecker oracle, NaN when K is not stabilizing.
inline double oracle_cost(const LqrProblem& p, const Gain& K) {
  const Matrix AK = p.A - p.B * K * p.C;
  if (abscissa(AK) >= 0) return std::nan("");
  const Matrix W = p.C.transpose() * K.transpose() * p.R * K * p.C + p.Q;
  return (kron_lyapunov(AK, W, true) * p.Sigma).trace();
}

inline Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& K, double rel = 1e-6) {
  Matrix g(K.rows(), K.cols());
  for (Eigen::Index i = 0; i < K.size(); ++i) {
    const double h = rel * std::max(1.0, std::abs(K(i)));
    Matrix Kp = K, Km = K;
    Kp(i) += h;
    Km(i) -= h;
    g(i) = (f(Kp) - f(Km)) / (2 * h);
  }
  return g;
}

/// Second derivative of t -> f(K + tE) at 0 by a five-point central stencil.
inline double fd_second(const std::function<double(const Matrix&)>& f, const Matrix& K, const Matrix& E, double h) {
  const double a = f(K + 2 * h * E), b = f(K + h * E), c = f(K), d = f(K - h * E), e = f(K - 2 * h * E);
  return (-a + 16 * b - 30 * c + 16 * d - e) / (12 * h * h);
}

/// Random state- or output-feedback problem together with a stabilizing gain.
struct Instance {
  LqrProblem problem;
  Gain K;
};

/// A Hurwitz-shifted A, random B, C of full row rank (C = I when r == n),
/// random SPD weights, and a small random gain kept only if stabilizing.
inline Instance random_instance(Rng& rng, int n, int m, int r) {
  for (;;) {
    LqrProblem p;
    p.A = rng.hurwitz(n, rng.uniform(0.2, 1.0));
    p.B = rng.gaussian(n, m);
    p.C = r == n ? Matrix(Matrix::Identity(n, n)) : rng.gaussian(r, n);
    p.Q = rng.spd(n, 0.2);
    p.R = rng.spd(m, 0.2);
    p.Sigma = rng.spd(n, 0.2);
    const double scale = rng.uniform(0.0, 0.3);
    const Gain K = scale * rng.gaussian(m, r);
    if (abscissa(p.A - p.B * K * p.C) < -0.05) return {p, K};
  }
}

/// Classic RK4 on a scalar ODE with a fixed step.
inline double rk4_scalar(const std::function<double(double)>& rhs, double y0, double t_end, int steps) {
  const double h = t_end / steps;
  double y = y0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = rhs(y), k2 = rhs(y + 0.5 * h * k1), k3 = rhs(y + 0.5 * h * k2), k4 = rhs(y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& g, double a, double b, double tol, int depth = 40) {
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi), lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = g(lm), frm = g(rm);
        const double left = (hi - lo) / 12 * (flo + 4 * flm + fmid);
        const double right = (hi - lo) / 12 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
      };
  const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

}  // namespace testing_support
