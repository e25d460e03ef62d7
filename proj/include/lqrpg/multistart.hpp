#pragma once

#include <cstdint>
#include <vector>

#include "lqrpg/trace.hpp"
#include "lqrpg/problem.hpp"

namespace lqrpg {

/// Up to `count` stabilizing gains drawn uniformly from the box [lo, hi]^(m x r)
/// with a seeded std::mt19937_64; draws outside S are discarded, giving up
/// after 100 * count draws.
std::vector<Gain> sample_stabilizing_gains(const LqrProblem& problem, double lo, double hi, int count,
                                           std::uint64_t seed);

/// Runs algorithm1 from every start, in parallel with OpenMP.
std::vector<RunTrace> multistart(const LqrProblem& problem, const std::vector<Gain>& starts, double eps,
                                 int max_iter);

/// Single-threaded reference for multistart; identical output.
std::vector<RunTrace> multistart_serial(const LqrProblem& problem, const std::vector<Gain>& starts,
                                        double eps, int max_iter);

enum class StationaryKind { kMinimum, kSaddle, kMaximum, kDegenerate };

const char* to_string(StationaryKind kind);

/// Range of the Hessian form over sampled unit directions.
struct HessianSignature {
  double min_form = 0.0;
  double max_form = 0.0;
  StationaryKind kind = StationaryKind::kDegenerate;
};

/// Samples the Hessian form along the coordinate directions, their pairwise
/// sums and differences, and `random_directions` random unit directions.
/// Forms within rel_tol * max|form| of zero count as zero.
HessianSignature hessian_signature(const LqrProblem& problem, const Gain& K, int random_directions = 50,
                                   std::uint64_t seed = 1, double rel_tol = 1e-8);

/// Full Hessian as an (mr x mr) matrix on row-major vec(K), by polarization
/// of the Hessian form.
Matrix assemble_hessian(const LqrProblem& problem, const Gain& K);

struct StationaryPoint {
  Gain K;
  double f = 0.0;
  double grad_norm = 0.0;
  int hits = 0;  // number of runs ending here
  HessianSignature signature;
};

/// Groups terminal gains of runs that reached the gradient tolerance. Gains
/// within cluster_tol (Frobenius) of a cluster representative join it.
/// Sorted by f ascending.
std::vector<StationaryPoint> cluster_stationary(const LqrProblem& problem,
                                                const std::vector<RunTrace>& runs,
                                                double cluster_tol = 1e-3);

/// Newton iteration on grad f = 0 with the assembled Hessian, halving the
/// step until the gradient norm decreases and the gain stays stabilizing.
/// Converges to saddles as well as minima. Throws ConvergenceError when
/// grad_tol is not reached within max_iter steps.
StationaryPoint refine_stationary(const LqrProblem& problem, const Gain& K0, double grad_tol = 1e-10,
                                  int max_iter = 50);

}  // namespace lqrpg
