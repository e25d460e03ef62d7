#pragma once

#include <cstdint>

#include "lqrpg/problem.hpp"

namespace lqrpg {

struct GeneratedProblem {
  LqrProblem problem;
  Gain K0;  // zero gain; stabilizing since A is Hurwitz
  bool q_regularized = false;
  bool r_regularized = false;
  int regenerations = 0;
};

/// Random state-feedback benchmark instance:
///   A = rand(n,n)/n - I,  B = ones(n,m) + rand(n,m)/2,
///   Q = Q1 Q1^T, Q1 = rand(n,n),  R = R1 R1^T, R1 = rand(m,m),  C = Sigma = I,
/// with rand entries uniform on [0, 1) from a seeded std::mt19937_64, drawn
/// in the order A, B, Q1, R1 (row-major). A numerically singular Q or R gets
/// 1e-9 I added. Bit-identical for identical (n, m, seed).
GeneratedProblem generate_random_problem(int n, int m, std::uint64_t seed);

}  // namespace lqrpg
