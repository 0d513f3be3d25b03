#include <benchmark/benchmark.h>

#include "mvcovh/clustering.hpp"
#include "mvcovh/factorization.hpp"
#include "mvcovh/harness.hpp"
#include "mvcovh/synth.hpp"

namespace {

struct Fixture {
  mvcovh::MultiViewDataset data;
  mvcovh::HiddenSpaceModel hidden;
};

Fixture fixture(int samples) {
  mvcovh::SynthSpec s;
  s.samples = samples;
  s.seed = 2;
  auto data = mvcovh::synth_multiview(s);
  auto hidden = mvcovh::shd_nmf(data, 3, 1.0, {1e-6, 200}, 3);
  return {std::move(data), std::move(hidden)};
}

mvcovh::HyperParams params() {
  mvcovh::HyperParams p;
  p.clusters = 3;
  p.hidden_dim = 3;
  p.seed = 5;
  return p;
}

void BM_MvcovhFit(benchmark::State& state) {
  const auto f = fixture(static_cast<int>(state.range(0)));
  const auto p = params();
  for (auto _ : state) benchmark::DoNotOptimize(mvcovh::mvcovh_fit(f.data, f.hidden, p).w.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MvcovhFit)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_KMeansFit(benchmark::State& state) {
  const auto f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(mvcovh::kmeans_fit(f.data.view(0).data, 3, {1e-6, 100}, 5).centers.data());
}
BENCHMARK(BM_KMeansFit)->RangeMultiplier(4)->Range(64, 4096);

void BM_RepeatRuns(benchmark::State& state) {
  const auto f = fixture(300);
  const auto p = params();
  const mvcovh::ExecutionOptions exec{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(mvcovh::repeat_runs(f.data, p, 10, exec).cells.size());
}
BENCHMARK(BM_RepeatRuns)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
