// Parallel kernels against their serial references, plus the Lyapunov
// solver against the dense Kronecker system.

#include <benchmark/benchmark.h>

#include "lqrpg/cost.hpp"
#include "lqrpg/fixtures.hpp"
#include "lqrpg/linalg.hpp"
#include "lqrpg/multistart.hpp"
#include "lqrpg/random_problem.hpp"
#include "lqrpg/scan.hpp"

using namespace lqrpg;

namespace {

ScanSpec two_output_grid(int side) {
  ScanSpec spec{Gain::Zero(1, 2), {parse_scan_axis("k11:-1:8:" + std::to_string(side)),
                                   parse_scan_axis("k12:-1:4:" + std::to_string(side))}};
  return spec;
}

void BM_ScanParallel(benchmark::State& state) {
  const LqrProblem p = fixture(FixtureName::kEx35, 1.2).problem;
  const ScanSpec spec = two_output_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(landscape_scan(p, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_ScanSerial(benchmark::State& state) {
  const LqrProblem p = fixture(FixtureName::kEx35, 1.2).problem;
  const ScanSpec spec = two_output_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(landscape_scan_serial(p, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_MultistartParallel(benchmark::State& state) {
  const LqrProblem p = fixture(FixtureName::kEx35, 1.2).problem;
  const auto starts = sample_stabilizing_gains(p, -1.0, 8.0, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(multistart(p, starts, 1e-6, 300));
}

void BM_MultistartSerial(benchmark::State& state) {
  const LqrProblem p = fixture(FixtureName::kEx35, 1.2).problem;
  const auto starts = sample_stabilizing_gains(p, -1.0, 8.0, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(multistart_serial(p, starts, 1e-6, 300));
}

struct LyapunovCase {
  Matrix A;
  Matrix W;
};

LyapunovCase lyapunov_case(int n) {
  const GeneratedProblem gen = generate_random_problem(n, 1, 7);
  return {gen.problem.A, gen.problem.Q};
}

void BM_LyapunovSchur(benchmark::State& state) {
  const LyapunovCase c = lyapunov_case(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(c.A, c.W, LyapunovForm::kAdjoint));
}

void BM_LyapunovKronecker(benchmark::State& state) {
  const LyapunovCase c = lyapunov_case(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov_kron(c.A, c.W, LyapunovForm::kAdjoint));
}

void BM_CostAndGradient(benchmark::State& state) {
  const GeneratedProblem gen = generate_random_problem(static_cast<int>(state.range(0)), 5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(gen.problem, gen.K0));
}

}  // namespace

BENCHMARK(BM_ScanParallel)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSerial)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultistartParallel)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultistartSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LyapunovSchur)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_LyapunovKronecker)->Arg(10)->Arg(20);  // dense solver stops at order 32
BENCHMARK(BM_CostAndGradient)->Arg(20)->Arg(100)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
