#include <benchmark/benchmark.h>

#include "resperf/device_profile.hpp"
#include "resperf/network.hpp"
#include "resperf/synth_bench.hpp"
#include "resperf/transforms.hpp"

using namespace resperf;

namespace {

Tensor random_batch(std::size_t n, std::size_t p) {
  RandomStream rng(1);
  Tensor x({n, p});
  for (auto& v : x.values()) v = rng.normal();
  return x;
}

void BM_ResPerfNetForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = build_resperfnet(9, 42);
  const auto x = random_batch(n, 9);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x, Mode::Infer));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ResPerfNetForward)->Arg(1)->Arg(128);

void BM_ResPerfNetTrainStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = build_resperfnet(9, 42);
  const auto x = random_batch(n, 9);
  const Tensor g({n, 1}, 1.0);
  for (auto _ : state) {
    RandomStream drop(3);
    ForwardCache cache;
    net.forward(x, Mode::Train, &drop, &cache);
    benchmark::DoNotOptimize(net.backward(cache, g));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ResPerfNetTrainStep)->Arg(128);

void BM_OracleTimes(benchmark::State& state) {
  const auto profile = *find_preset("gtx1080ti");
  const auto cfg = LayerConfig::convolution(8, 56, 3, 64, 128, 1, 1, 1, 1);
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_times(cfg, profile, rng));
}
BENCHMARK(BM_OracleTimes);

void BM_GenerateDataset(benchmark::State& state) {
  const auto profile = *find_preset("gtx1080ti");
  const auto kind = static_cast<LayerKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset(kind, 1000, 42, profile));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_GenerateDataset)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_FitPipeline(benchmark::State& state) {
  const auto ds = generate_dataset(LayerKind::Convolution, 4000, 42, *find_preset("gtx1080ti"));
  for (auto _ : state) benchmark::DoNotOptimize(fit_pipeline(ds));
}
BENCHMARK(BM_FitPipeline)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
