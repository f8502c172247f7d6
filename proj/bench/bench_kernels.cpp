// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "jury/accuracy.hpp"
#include "jury/experiments.hpp"

using namespace jury;

namespace {

std::pair<CompetenceVector, WeightVector> instance(std::size_t m) {
  std::mt19937_64 gen(m);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> p(m), w(m);
  for (auto& x : p) x = u(gen);
  for (auto& x : w) x = n(gen);
  return {CompetenceVector(p), WeightVector(w)};
}

void BM_exact_parallel(benchmark::State& state) {
  const auto [p, w] = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_accuracy(p, w, Execution::parallel));
}

void BM_exact_serial_kernel(benchmark::State& state) {
  const auto [p, w] = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_accuracy(p, w, Execution::serial));
}

void BM_exact_reference(benchmark::State& state) {
  const auto [p, w] = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_accuracy_reference(p, w));
}

void BM_mc_parallel(benchmark::State& state) {
  const auto [p, w] = instance(9);
  const auto iters = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_accuracy(p, w, iters, 1, Execution::parallel));
}

void BM_mc_reference(benchmark::State& state) {
  const auto [p, w] = instance(9);
  const auto iters = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_accuracy_reference(p, w, iters, 1));
}

void BM_sweep(benchmark::State& state) {
  const SweepConfig cfg{DrawnExperts{5, rng::Uniform{0.001, 0.999}}, make_grid(0.0, 1.0, 0.1), 2000, 1,
                        WeightingMode::signed_log_odds};
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(distribution_sweep(cfg, exec));
}

}  // namespace

BENCHMARK(BM_exact_parallel)->DenseRange(10, 22, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_serial_kernel)->DenseRange(10, 22, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_reference)->DenseRange(10, 22, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_parallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_reference)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
