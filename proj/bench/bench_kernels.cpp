// Serial reference loops against their OpenMP counterparts. Both produce
// identical output (see test_kernels); only wall time differs.

#include <benchmark/benchmark.h>

#include "pencil/kernels.hpp"
#include "pencil/tensor_verify.hpp"

using namespace pencil;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_SValueMatrix(benchmark::State& state) {
  const PencilConfig cfg = integer_config(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const auto samples = sample_batch(cfg, 2000, 1, exec_of(state));
    benchmark::DoNotOptimize(s_value_matrix(cfg, samples, exec_of(state)));
  }
  label(state);
}

void BM_MonomialMatrix(benchmark::State& state) {
  const PencilConfig cfg = integer_config(5);
  const auto samples = sample_batch(cfg, 4000, 2);
  const Eigen::MatrixXcd values = s_value_matrix(cfg, samples).leftCols(5);
  const auto exps = monomial_exponents(5, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(monomial_matrix(values, exps, exec_of(state)));
  label(state);
}

void BM_ThreeWaySweep(benchmark::State& state) {
  const PencilConfig cfg = integer_config(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(three_way_sweep(cfg, 200, 3, exec_of(state)));
  label(state);
}

void BM_PoissonSweep(benchmark::State& state) {
  const PencilConfig cfg = integer_config(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(poisson_sweep(cfg, 100, 4, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_SValueMatrix)->ArgsProduct({{0, 1}, {3, 6}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonomialMatrix)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ThreeWaySweep)->ArgsProduct({{0, 1}, {3, 5}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PoissonSweep)->ArgsProduct({{0, 1}, {2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
