#include "lqrpg/multistart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "lqrpg/cost.hpp"
#include "lqrpg/descent.hpp"
#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = v(i * cols + j);
  return out;
}

Vector vec(const Matrix& m) {
  Vector out(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
  return out;
}

RunTrace run_one(const LqrProblem& problem, const Gain& K0, double eps, int max_iter) {
  try {
    return algorithm1(problem, K0, eps, 0.01, 0.5, 0.0, max_iter);
  } catch (const Error& e) {
    RunTrace t;
    t.terminal_gain = K0;
    t.termination = Termination::kFailure;
    t.failure_reason = e.what();
    return t;
  }
}

}  // namespace

const char* to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::kMinimum: return "minimum";
    case StationaryKind::kSaddle: return "saddle";
    case StationaryKind::kMaximum: return "maximum";
    case StationaryKind::kDegenerate: return "degenerate";
  }
  return "?";
}

std::vector<Gain> sample_stabilizing_gains(const LqrProblem& problem, double lo, double hi, int count,
                                           std::uint64_t seed) {
  if (!(hi > lo)) throw ValidationError("sampling box needs lo < hi");
  std::mt19937_64 gen(seed);
  std::vector<Gain> out;
  for (long draw = 0; draw < 100L * count && static_cast<int>(out.size()) < count; ++draw) {
    Gain K(problem.m(), problem.r());
    for (Eigen::Index i = 0; i < K.rows(); ++i)
      for (Eigen::Index j = 0; j < K.cols(); ++j) K(i, j) = lo + (hi - lo) * unit_uniform(gen);
    if (is_stabilizing(problem.closed_loop(K))) out.push_back(std::move(K));
  }
  return out;
}

std::vector<RunTrace> multistart(const LqrProblem& problem, const std::vector<Gain>& starts, double eps,
                                 int max_iter) {
  std::vector<RunTrace> out(starts.size());
  const long count = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) out[static_cast<size_t>(i)] = run_one(problem, starts[static_cast<size_t>(i)], eps, max_iter);
  return out;
}

std::vector<RunTrace> multistart_serial(const LqrProblem& problem, const std::vector<Gain>& starts,
                                        double eps, int max_iter) {
  std::vector<RunTrace> out;
  out.reserve(starts.size());
  for (const auto& K0 : starts) out.push_back(run_one(problem, K0, eps, max_iter));
  return out;
}

HessianSignature hessian_signature(const LqrProblem& problem, const Gain& K, int random_directions,
                                   std::uint64_t seed, double rel_tol) {
  const CostEval at = evaluate(problem, K);
  const Eigen::Index m = K.rows(), r = K.cols(), d = m * r;
  std::vector<Matrix> dirs;
  for (Eigen::Index i = 0; i < d; ++i) {
    dirs.push_back(unvec(Vector::Unit(d, i), m, r));
    for (Eigen::Index j = i + 1; j < d; ++j) {
      dirs.push_back(unvec((Vector::Unit(d, i) + Vector::Unit(d, j)) / std::sqrt(2.0), m, r));
      dirs.push_back(unvec((Vector::Unit(d, i) - Vector::Unit(d, j)) / std::sqrt(2.0), m, r));
    }
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < random_directions; ++k) {
    Matrix E(m, r);
    for (Eigen::Index i = 0; i < E.size(); ++i) E(i) = normal(gen);
    if (E.norm() > 0) dirs.push_back(E / E.norm());
  }
  HessianSignature sig;
  sig.min_form = std::numeric_limits<double>::infinity();
  sig.max_form = -std::numeric_limits<double>::infinity();
  for (const auto& E : dirs) {
    const double h = hessian_form(problem, at, E);
    sig.min_form = std::min(sig.min_form, h);
    sig.max_form = std::max(sig.max_form, h);
  }
  const double zero = rel_tol * std::max(std::abs(sig.min_form), std::abs(sig.max_form));
  const bool pos = sig.max_form > zero, neg = sig.min_form < -zero;
  if (pos && neg) sig.kind = StationaryKind::kSaddle;
  else if (pos && sig.min_form > zero) sig.kind = StationaryKind::kMinimum;
  else if (neg && sig.max_form < -zero) sig.kind = StationaryKind::kMaximum;
  else sig.kind = StationaryKind::kDegenerate;
  return sig;
}

Matrix assemble_hessian(const LqrProblem& problem, const Gain& K) {
  const CostEval at = evaluate(problem, K);
  const Eigen::Index m = K.rows(), r = K.cols(), d = m * r;
  Vector diag(d);
  for (Eigen::Index i = 0; i < d; ++i) diag(i) = hessian_form(problem, at, unvec(Vector::Unit(d, i), m, r));
  Matrix H(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    H(i, i) = diag(i);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double s = hessian_form(problem, at, unvec(Vector::Unit(d, i) + Vector::Unit(d, j), m, r));
      H(i, j) = H(j, i) = 0.5 * (s - diag(i) - diag(j));
    }
  }
  return H;
}

std::vector<StationaryPoint> cluster_stationary(const LqrProblem& problem,
                                                const std::vector<RunTrace>& runs, double cluster_tol) {
  std::vector<StationaryPoint> out;
  for (const auto& run : runs) {
    if (run.termination != Termination::kGradTol) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const StationaryPoint& p) {
      return (p.K - run.terminal_gain).norm() <= cluster_tol;
    });
    if (it != out.end()) {
      ++it->hits;
      continue;
    }
    const CostEval at = evaluate(problem, run.terminal_gain);
    out.push_back({run.terminal_gain, at.f, at.grad_norm(), 1, {}});
  }
  for (auto& p : out) p.signature = hessian_signature(problem, p.K);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
  return out;
}

StationaryPoint refine_stationary(const LqrProblem& problem, const Gain& K0, double grad_tol, int max_iter) {
  Gain K = K0;
  CostEval at = evaluate(problem, K);
  std::vector<double> history{at.grad_norm()};
  for (int it = 0; it < max_iter && at.grad_norm() > grad_tol; ++it) {
    const Matrix H = assemble_hessian(problem, K);
    const Vector step = H.fullPivLu().solve(-vec(at.grad));
    if (!step.allFinite()) throw IllConditionedError("singular Hessian during stationary-point refinement", 0.0);
    double t = 1.0;
    bool moved = false;
    for (int s = 0; s < 40; ++s, t *= 0.5) {
      const Gain trial = K + t * unvec(step, K.rows(), K.cols());
      auto next = try_evaluate(problem, trial);
      if (next && next->grad_norm() < at.grad_norm()) {
        K = trial;
        at = std::move(*next);
        moved = true;
        break;
      }
    }
    history.push_back(at.grad_norm());
    if (!moved) break;
  }
  if (!(at.grad_norm() <= grad_tol)) {
    throw ConvergenceError("stationary-point refinement stalled at gradient norm " +
                               std::to_string(at.grad_norm()),
                           history);
  }
  return {K, at.f, at.grad_norm(), 0, hessian_signature(problem, K)};
}

}  // namespace lqrpg
