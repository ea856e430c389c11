// Serial reference kernels against their OpenMP versions.

#include "pqnorm/kernels.hpp"
#include "pqnorm/search.hpp"

#include <benchmark/benchmark.h>

using namespace pqnorm;

namespace {

std::vector<CMatrix> batch(int count, int d) {
  Rng rng = make_rng(1, 0);
  std::vector<CMatrix> out;
  for (int i = 0; i < count; ++i) out.push_back(random_matrix(rng, d, d));
  return out;
}

void BM_KronSerial(benchmark::State& state) {
  const auto m = batch(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::kron_serial(m[0], m[1]));
}

void BM_KronParallel(benchmark::State& state) {
  const auto m = batch(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::kron_parallel(m[0], m[1]));
}

void BM_SchattenBatchSerial(benchmark::State& state) {
  const auto m = batch(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::schatten_batch_serial(m, 1.0));
}

void BM_SchattenBatchParallel(benchmark::State& state) {
  const auto m = batch(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::schatten_batch_parallel(m, 1.0));
}

}  // namespace

BENCHMARK(BM_KronSerial)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_KronParallel)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_SchattenBatchSerial)->Arg(64)->Arg(512);
BENCHMARK(BM_SchattenBatchParallel)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
