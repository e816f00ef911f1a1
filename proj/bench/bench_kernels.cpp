// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "curvlab/frame_search.hpp"
#include "curvlab/kernels.hpp"
#include "curvlab/models.hpp"

using namespace curvlab;

static void BM_QReference(benchmark::State& state) {
  const CurvTensor r = random_curvature(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::q_raw_reference(r));
}

static void BM_QParallel(benchmark::State& state) {
  const CurvTensor r = random_curvature(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::q_raw_parallel(r));
}

static void multistart(benchmark::State& state, bool parallel) {
  const CurvTensor r = random_einstein(static_cast<int>(state.range(0)), 2);
  SearchOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(min_isotropic(r, opts).value);
}

static void BM_MultistartSerial(benchmark::State& state) { multistart(state, false); }
static void BM_MultistartParallel(benchmark::State& state) { multistart(state, true); }

BENCHMARK(BM_QReference)->DenseRange(4, 8, 2);
BENCHMARK(BM_QParallel)->DenseRange(4, 8, 2);
BENCHMARK(BM_MultistartSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultistartParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
