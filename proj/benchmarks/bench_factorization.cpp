#include <benchmark/benchmark.h>

#include "mvcovh/factorization.hpp"
#include "mvcovh/synth.hpp"

namespace {

mvcovh::MultiViewDataset dataset(int samples) {
  mvcovh::SynthSpec s;
  s.samples = samples;
  s.seed = 1;
  return mvcovh::synth_multiview(s);
}

void BM_ShdNmf(benchmark::State& state) {
  const auto data = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(mvcovh::shd_nmf(data, 3, 1.0, {1e-6, 200}, 7).H.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShdNmf)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_NmfFactorize(benchmark::State& state) {
  const auto data = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(mvcovh::nmf_factorize(data.view(0).data, 3, {1e-6, 200}, 7).H.data());
}
BENCHMARK(BM_NmfFactorize)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
