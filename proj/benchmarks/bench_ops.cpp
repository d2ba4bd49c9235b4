#include <benchmark/benchmark.h>

#include "cpdsss/circulant.hpp"
#include "cpdsss/fft.hpp"
#include "cpdsss/rng.hpp"
#include "cpdsss/zc_spread.hpp"

using namespace cpdsss;

namespace {

CVec noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CVec v(n);
  for (auto& x : v) x = rng.complex_gaussian(1.0);
  return v;
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CVec x = noise(n, 1), y(n);
  for (auto _ : state) {
    fft::forward(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_Spread(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadingOperator op(generate_zc(n, 1));
  const CVec s = noise(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(op.spread(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spread)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_CirculantApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = CirculantOperator::from_impulse(noise(std::min<std::size_t>(n, 130), 3), n);
  const CVec x = noise(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(c.apply(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CirculantApply)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_FromImpulse(benchmark::State& state) {
  const CVec h = noise(130, 5);
  for (auto _ : state) benchmark::DoNotOptimize(CirculantOperator::from_impulse(h, 2048));
}
BENCHMARK(BM_FromImpulse);

}  // namespace
