#include <benchmark/benchmark.h>

#include "qcbnorm/cb_quasinorm.hpp"
#include "qcbnorm/channel_information.hpp"

namespace {

using namespace qcbnorm;

CPMap qubit_channel() {
  Rng rng(11);
  return random_channel(2, 2, 2, rng);
}

void BM_CbQuasiNormPrimal(benchmark::State& state) {
  const CPMap m = qubit_channel();
  const RenyiOrder alpha(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(cb_quasinorm_primal(m, alpha, OptimizerConfig{}));
}
BENCHMARK(BM_CbQuasiNormPrimal)->Unit(benchmark::kMillisecond);

void BM_MultiplicativityGap(benchmark::State& state) {
  const CPMap m = qubit_channel();
  const CPMap n = channel_zoo("amplitude_damping", {{"gamma", 0.5}});
  const RenyiOrder alpha(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(multiplicativity_gap(m, n, alpha, OptimizerConfig{}));
}
BENCHMARK(BM_MultiplicativityGap)->Unit(benchmark::kMillisecond);

void BM_ChannelMutualInformation(benchmark::State& state) {
  const CPMap m = qubit_channel();
  for (auto _ : state) benchmark::DoNotOptimize(channel_mutual_information(m, OptimizerConfig{}));
}
BENCHMARK(BM_ChannelMutualInformation)->Unit(benchmark::kMillisecond);

void BM_RenyiInformationPrimal(benchmark::State& state) {
  const CPMap m = qubit_channel();
  const RenyiOrder alpha(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(renyi_channel_information_primal(m, alpha, OptimizerConfig{}));
}
BENCHMARK(BM_RenyiInformationPrimal)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
