#include <benchmark/benchmark.h>

#include "ampsym/indist.hpp"
#include "ampsym/numerics.hpp"
#include "ampsym/rng.hpp"

namespace {

using namespace ampsym;

CMatrix random_square(std::size_t n, std::uint64_t seed) {
  SampleStream rng(seed);
  CMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.next_disc();
  }
  return m;
}

void BM_PermanentRyser(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMatrix m = random_square(n, 0xBE5C * n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(permanent_ryser(m));
  }
}

void BM_PermanentNaive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMatrix m = random_square(n, 0xBE5C * n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(permanent_naive(m));
  }
}

void BM_Determinant(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMatrix m = random_square(n, 0xBE5C * n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(determinant(m));
  }
}

void BM_HFast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto stats = static_cast<Statistics>(state.range(1));
  const StageMatrix stage{random_square(n, 0xBE5C * n)};
  std::vector<int> labels(n);
  for (std::size_t j = 0; j < n; ++j) labels[j] = static_cast<int>(j);
  const Configuration c{labels};
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_fast(stage, c, c, stats));
  }
}

}  // namespace

BENCHMARK(BM_PermanentRyser)->DenseRange(2, 12, 2)->Arg(16)->Arg(20)->Arg(24)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PermanentNaive)->DenseRange(2, 10, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Determinant)->RangeMultiplier(2)->Range(8, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_HFast)
    ->ArgsProduct({{4, 8, 12, 16}, {0, 1}})
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
