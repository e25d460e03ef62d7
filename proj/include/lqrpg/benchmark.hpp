#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lqrpg/trace.hpp"

namespace lqrpg {

enum class BenchMethod { kGdTuned, kGdn, kCgn };

const char* to_string(BenchMethod method);  // "GD_r", "GDN", "CGN"
std::optional<BenchMethod> parse_bench_method(const std::string& name);

struct BenchmarkConfig {
  int n = 20;
  int m = 5;
  std::uint64_t seed = 1;
  std::vector<BenchMethod> methods{BenchMethod::kGdTuned, BenchMethod::kGdn, BenchMethod::kCgn};
  int max_iter = 5000;
  double grad_tol = 1e-6;
};

/// Throws ValidationError unless n >= m >= 1, methods is nonempty and
/// max_iter, grad_tol are positive.
void validate(const BenchmarkConfig& config);

struct MethodReport {
  BenchMethod method = BenchMethod::kGdn;
  RunTrace trace;
  double step = 0.0;  // tuned constant step for GD_r, 0 otherwise
  double final_f = 0.0;
  double gain_error = 0.0;           // |K - K*|_F
  double relative_gain_error = 0.0;  // |K - K*|_F / |K*|_F
  /// First iteration with f - f* <= 1e-3 f*, if reached.
  std::optional<int> iterations_to_gap;
  bool failed = false;
  std::string failure_reason;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  double fstar = 0.0;
  Matrix Kstar;
  int riccati_iterations = 0;
  double initial_f = 0.0;
  bool q_regularized = false;
  bool r_regularized = false;
  std::vector<MethodReport> methods;  // in config order
};

/// Random instance, Riccati optimum, then every configured method from K0 = 0.
/// Methods run concurrently (OpenMP); a failing method is recorded in its
/// report rather than aborting the benchmark.
BenchmarkReport run_benchmark(const BenchmarkConfig& config);

std::string report_to_json(const BenchmarkReport& report);

}  // namespace lqrpg
