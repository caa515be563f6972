#include <cstddef>
#include <vector>

#include <benchmark/benchmark.h>

#include <bayescp/bayescp.hpp>

namespace {

using namespace bayescp;

SimResult draw(std::size_t n, std::size_t k) {
  SimSpec spec;
  spec.n = n;
  spec.k = k;
  spec.theta = {0.0, 0.2, 4.0, 1.0};
  spec.seed = 11;
  return simulate(spec);
}

void BM_SegmentEvidenceKernel(benchmark::State& state) {
  const auto sim = draw(static_cast<std::size_t>(state.range(0)), 4);
  const EvidenceKernel kernel(sim.data, default_hyperparams(sim.data.track(0)));
  const std::size_t n = kernel.size();
  for (auto _ : state) {
    double total = 0.0;
    for (std::size_t b = 0; b < n; b += 7) total += kernel.log_evidence(b, n);
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_SegmentEvidenceKernel)->Arg(500)->Arg(2000);

void BM_Forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kmax = static_cast<std::size_t>(state.range(1));
  const auto sim = draw(n, 4);
  const auto th = default_hyperparams(sim.data.track(0));
  for (auto _ : state) {
    auto table = forward(sim.data, th, build_seg_prior(n, kmax));
    benchmark::DoNotOptimize(table.lp_hat(n, kmax));
  }
}
BENCHMARK(BM_Forward)->Args({250, 10})->Args({500, 10})->Args({1000, 10})->Args({2000, 20})
    ->Unit(benchmark::kMillisecond);

void BM_BackwardSampling(benchmark::State& state) {
  const std::size_t n = 1000;
  const auto sim = draw(n, 6);
  const auto table = forward(sim.data, default_hyperparams(sim.data.track(0)), build_seg_prior(n, 10));
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_segmentations(table, count, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BackwardSampling)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Map(benchmark::State& state) {
  const std::size_t n = 1000;
  const auto sim = draw(n, 6);
  const auto table = forward(sim.data, default_hyperparams(sim.data.track(0)), build_seg_prior(n, 10));
  for (auto _ : state) benchmark::DoNotOptimize(map_segmentation(table));
}
BENCHMARK(BM_Map)->Unit(benchmark::kMillisecond);

void BM_ExactMarginals(benchmark::State& state) {
  const std::size_t n = 1000;
  const auto sim = draw(n, 6);
  const auto table = forward(sim.data, default_hyperparams(sim.data.track(0)), build_seg_prior(n, 10));
  for (auto _ : state) benchmark::DoNotOptimize(exact_changepoint_marginals(table));
}
BENCHMARK(BM_ExactMarginals)->Unit(benchmark::kMillisecond);

void BM_McemIteration(benchmark::State& state) {
  std::vector<ObservedSequence> train;
  for (std::size_t s = 0; s < 10; ++s) {
    SimSpec spec;
    spec.n = 200;
    spec.k = 5;
    spec.theta = {0.0, 0.5, 5.0, 0.1};
    spec.seed = 100 + s;
    train.push_back(simulate(spec).data);
  }
  McemConfig cfg;
  cfg.iterations = 1;
  cfg.k_max = 10;
  const auto init = default_hyperparams(concatenate(train).track(0));
  for (auto _ : state) benchmark::DoNotOptimize(mcem_fit(train, init, cfg));
}
BENCHMARK(BM_McemIteration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
