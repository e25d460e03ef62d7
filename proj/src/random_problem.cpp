#include "lqrpg/random_problem.hpp"

#include <random>

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

constexpr int kMaxRegenerations = 16;

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  // 53 random mantissa bits; independent of the standard library's
  // distribution implementation.
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = next();
    }
    return M;
  }

 private:
  std::mt19937_64 engine_;
};

bool regularize(Matrix& S) {
  if (is_spd(S)) return false;
  S += 1e-9 * Matrix::Identity(S.rows(), S.cols());
  return true;
}

}  // namespace

GeneratedProblem generate_random_problem(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw ValidationError("random problem needs n, m >= 1");
  for (int attempt = 0; attempt <= kMaxRegenerations; ++attempt) {
    UniformSource rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    GeneratedProblem out;
    LqrProblem& p = out.problem;
    p.A = rng.matrix(n, n) / static_cast<double>(n) - Matrix::Identity(n, n);
    p.B = Matrix::Ones(n, m) + 0.5 * rng.matrix(n, m);
    const Matrix Q1 = rng.matrix(n, n);
    const Matrix R1 = rng.matrix(m, m);
    p.Q = Q1 * Q1.transpose();
    p.R = R1 * R1.transpose();
    p.C = Matrix::Identity(n, n);
    p.Sigma = Matrix::Identity(n, n);
    p.label = "random(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",seed=" + std::to_string(seed) + ")";
    out.K0 = Gain::Zero(m, n);
    out.regenerations = attempt;
    if (!is_stabilizing(p.A)) continue;
    // Exact symmetry; the products above are symmetric only up to rounding.
    p.Q = symmetrize(p.Q);
    p.R = symmetrize(p.R);
    out.q_regularized = regularize(p.Q);
    out.r_regularized = regularize(p.R);
    p.validate();
    return out;
  }
  throw ValidationError("could not generate a Hurwitz A after " + std::to_string(kMaxRegenerations) +
                        " attempts");
}

}  // namespace lqrpg
