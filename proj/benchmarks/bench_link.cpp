#include <benchmark/benchmark.h>

#include "cpdsss/capacity.hpp"
#include "cpdsss/harness.hpp"
#include "cpdsss/linkops.hpp"

using namespace cpdsss;

namespace {

std::vector<SymbolFrame> frames(std::size_t k, const ExpanderSpec& e) {
  Rng rng(1);
  std::vector<SymbolFrame> out;
  for (std::size_t u = 0; u < k; ++u) out.push_back(draw_symbol_frame(u, e, SymbolSource::Qpsk, rng));
  return out;
}

// One UL frame for K = 32 users at M antennas: channel plus matched filters.
void BM_UplinkFrame(benchmark::State& state) {
  const std::size_t k = 32, m = static_cast<std::size_t>(state.range(0)), n = 2048;
  const ExpanderSpec e(n, 1);
  const auto grid = ChannelGrid::from_set(draw_channel_set(k, m, ChannelProfile{}, 1, 0), n);
  const auto fr = frames(k, e);
  Rng rng(2);
  for (auto _ : state) {
    const auto rx = ul_channel_output(grid, fr, e, 100.0, rng);
    benchmark::DoNotOptimize(ul_mf_detect_all(rx, grid, e));
  }
}
BENCHMARK(BM_UplinkFrame)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DownlinkFrame(benchmark::State& state) {
  const std::size_t k = 32, m = static_cast<std::size_t>(state.range(0)), n = 2048;
  const ExpanderSpec e(n, 1);
  const auto grid = ChannelGrid::from_set(draw_channel_set(k, m, ChannelProfile{}, 1, 0), n);
  const auto fr = frames(k, e);
  std::vector<double> gains(k);
  for (std::size_t u = 0; u < k; ++u) gains[u] = dl_receiver_gain(grid, u);
  for (auto _ : state) {
    std::vector<Rng> rngs;
    for (std::size_t u = 0; u < k; ++u) rngs.emplace_back(u);
    const auto tx = dl_precode_transmit(grid, fr, e);
    benchmark::DoNotOptimize(dl_receive_detect_all(grid, tx, 100.0, gains, rngs, e));
  }
}
BENCHMARK(BM_DownlinkFrame)->Arg(1)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_IdealCapacity(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0)), n = 2048;
  const auto grid = ChannelGrid::from_set(draw_channel_set(1, m, ChannelProfile{}, 1, 0), n);
  const auto ops = grid.user(0);
  for (auto _ : state) benchmark::DoNotOptimize(ideal_capacity(ops, tr_precoder(ops), Stacking::Transmit, 1, 0.01));
}
BENCHMARK(BM_IdealCapacity)->Arg(1)->Arg(32)->Arg(128);

void BM_Trial(benchmark::State& state) {
  SweepConfig c;
  c.k = {32};
  c.m = {static_cast<std::size_t>(state.range(0))};
  c.directions = {Direction::Downlink};
  c.csi_modes = {CsiMode::Estimated};
  const SweepCell cell{0, -20.0, 32, c.m[0], Direction::Downlink, CsiMode::Estimated};
  std::size_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(c, cell, trial++));
}
BENCHMARK(BM_Trial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
