// Serial reference vs OpenMP kernel timings, plus the surrounding hot paths
// (sampling, full fits). Run: ./bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "ggsel/inference.hpp"
#include "ggsel/loglik_kernel.hpp"
#include "ggsel/model.hpp"
#include "ggsel/rng.hpp"

namespace {

using namespace ggsel;

const ModelParams kS1{0.013, 0.092, 0.0625};

Sample sample_of(std::size_t n) {
  auto rng = math::make_stream(1, n);
  return {sample_lifespans(kS1, n, rng, 30.0), 30.0};
}

void bm_loglik_serial(benchmark::State& state) {
  const Sample s = sample_of(static_cast<std::size_t>(state.range(0)));
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        loglik_accumulate_serial(kS1.a, kS1.b, kS1.sigma2, s.lifespans, s.truncation, order));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_loglik_parallel(benchmark::State& state) {
  const Sample s = sample_of(static_cast<std::size_t>(state.range(0)));
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        loglik_accumulate(kS1.a, kS1.b, kS1.sigma2, s.lifespans, s.truncation, order));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_sampling(benchmark::State& state) {
  auto rng = math::make_stream(2, 0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_lifespans(kS1, n, rng, 30.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_fit_full(benchmark::State& state) {
  const Sample s = sample_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_full(s));
  }
}

}  // namespace

BENCHMARK(bm_loglik_serial)
    ->ArgsProduct({{10000, 100000, 1000000}, {1, 2}})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_loglik_parallel)
    ->ArgsProduct({{10000, 100000, 1000000}, {1, 2}})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_sampling)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_fit_full)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
