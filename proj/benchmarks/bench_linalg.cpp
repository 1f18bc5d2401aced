#include <benchmark/benchmark.h>

#include "objectives.hpp"
#include "qcbnorm/channel.hpp"
#include "qcbnorm/entropy.hpp"
#include "qcbnorm/linalg.hpp"

namespace {

using namespace qcbnorm;

void BM_Eigh(benchmark::State& state) {
  Rng rng(1);
  const auto d = static_cast<std::size_t>(state.range(0));
  const HermitianOperator x = random_hermitian(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(x));
}
BENCHMARK(BM_Eigh)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_SchattenQuasiNorm(benchmark::State& state) {
  Rng rng(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_gaussian(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(schatten_quasi_norm(x, 0.7));
}
BENCHMARK(BM_SchattenQuasiNorm)->Arg(4)->Arg(16);

void BM_SandwichedRenyi(benchmark::State& state) {
  Rng rng(3);
  const auto d = static_cast<std::size_t>(state.range(0));
  const DensityMatrix rho = random_density(d, d, rng);
  const DensityMatrix sigma = random_density(d, d, rng);
  const RenyiOrder alpha(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(sandwiched_renyi(rho, sigma.op(), alpha));
}
BENCHMARK(BM_SandwichedRenyi)->Arg(4)->Arg(16);

void BM_Choi(benchmark::State& state) {
  Rng rng(4);
  const auto d = static_cast<std::size_t>(state.range(0));
  const CPMap m = random_channel(d, d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(choi(m));
}
BENCHMARK(BM_Choi)->Arg(2)->Arg(4);

void BM_SaddleEvaluate(benchmark::State& state) {
  Rng rng(5);
  const auto d = static_cast<std::size_t>(state.range(0));
  const CPMap m = random_channel(d, d, 2, rng);
  const internal::RenyiSaddle f(choi(m).op.matrix(), d, d, 0.7);
  const Matrix rho = random_density(d, d, rng).matrix();
  const Matrix sigma = random_density(d, d, rng).matrix();
  const bool grads = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(f.evaluate(rho, sigma, grads, grads));
}
BENCHMARK(BM_SaddleEvaluate)->Args({2, 0})->Args({2, 1})->Args({4, 0})->Args({4, 1});

}  // namespace
