// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cpdsss/capacity.hpp"
#include "cpdsss/chanest.hpp"
#include "cpdsss/harness.hpp"
#include "cpdsss/linkops.hpp"
#include "cpdsss/oracle/checks.hpp"
#include "cpdsss/oracle/dense.hpp"
#include "cpdsss/zc_spread.hpp"

using namespace cpdsss;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double db(double x) { return 10.0 * std::log10(x); }

double rel_gap(double measured, double ideal) { return (ideal - measured) / ideal; }

Outcome all_checks(const std::vector<oracle::CheckResult>& results) {
  Outcome o{true, ""};
  double worst = 0.0;
  std::string worst_name;
  for (const auto& r : results) {
    if (!r.passed()) {
      o.pass = false;
      o.detail += fmt::format("{} err {:.2e} > {:.0e}; ", r.name, r.error, r.tolerance);
    }
    if (r.error / r.tolerance >= worst) {
      worst = r.error / r.tolerance;
      worst_name = fmt::format("{} {:.2e}", r.name, r.error);
    }
  }
  o.detail += fmt::format("{} checks, worst {}", results.size(), worst_name);
  return o;
}

void append(std::vector<oracle::CheckResult>& out, std::vector<oracle::CheckResult> more) {
  out.insert(out.end(), more.begin(), more.end());
}

// --- criteria --------------------------------------------------------------

Outcome oracle_equivalence() {
  std::vector<oracle::CheckResult> r;
  for (std::size_t n : {16u, 64u}) append(r, oracle::fft_oracle_checks(n, 1e-9, 1));
  return all_checks(r);
}

Outcome zc_properties() {
  std::vector<oracle::CheckResult> r;
  append(r, oracle::zc_checks(16, 1, 0));
  append(r, oracle::zc_checks(2048, 1, 100));
  return all_checks(r);
}

Outcome ideal_capacity_consistency() {
  std::vector<oracle::CheckResult> r;
  for (std::size_t m : {1u, 4u})
    for (std::size_t l : {1u, 2u, 4u}) append(r, oracle::ideal_capacity_checks(64, m, l, 2.0, 1e-8, 10 * m + l));
  Outcome o = all_checks(r);

  // L = 1 beats L = 4 on 20 random channels (dense path).
  int ordered = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto set = draw_channel_set(1, 1, ChannelProfile{30, 8.0, true}, 77, t);
    const auto h = oracle::circulant(set.at(0, 0), 64);
    const double snr = std::pow(10.0, (-20.0 + 2.0 * static_cast<double>(t)) / 10.0);
    ordered += oracle::log_det_capacity(h, 1, snr) >= oracle::log_det_capacity(h, 4, snr);
  }
  o.pass = o.pass && ordered == 20;
  o.detail += fmt::format("; L=1 >= L=4 on {}/20 channels", ordered);
  return o;
}

Outcome flat_channel_analytics() {
  const std::size_t n = 2048, frames = 5;  // 10240 symbols
  const double snr_db = -10.0, snr = std::pow(10.0, snr_db / 10.0);
  const ExpanderSpec e(n, 1);
  Outcome o{true, ""};
  for (std::size_t m : {1u, 4u, 16u}) {
    ChannelSet set(1, m);
    for (std::size_t a = 0; a < m; ++a) set.at(0, a) = CVec{1.0};
    const auto grid = ChannelGrid::from_set(set, n);
    Rng rng(4, Stream::Test, {m});
    std::vector<DetectionResult> res;
    for (std::size_t f = 0; f < frames; ++f) {
      std::vector<SymbolFrame> fr{draw_symbol_frame(0, e, SymbolSource::Qpsk, rng)};
      const auto rx = ul_channel_output(grid, fr, e, 1.0 / snr, rng);
      res.push_back({0, ul_mf_detect(rx, grid, 0, e), fr[0].symbols});
    }
    const double err_db = db(measure_sinr(res, 1).rho) - db(static_cast<double>(m) * snr);
    const double tol = m == 1 ? 0.2 : 0.3;
    o.pass = o.pass && std::abs(err_db) <= tol;
    o.detail += fmt::format("M={} off by {:+.3f} dB (tol {}); ", m, err_db, tol);
  }
  return o;
}

Outcome channel_profile() {
  const ChannelProfile p;
  Rng rng(5, Stream::Test, {});
  double first = 0.0, last = 0.0;
  for (int d = 0; d < 10000; ++d) {
    const CVec h = draw_impulse(p, rng);
    first += std::norm(h.front());
    last += std::norm(h.back());
  }
  const double ratio = first / last, want = std::exp(129.0 / 25.0);
  return {std::abs(ratio / want - 1.0) <= 0.10, fmt::format("ratio {:.1f}, expected {:.1f} +- 10%", ratio, want)};
}

Outcome pilot_estimation_gain() {
  const std::size_t n = 2048;
  const PilotPlan plan(n, 1, 144);
  const auto z = generate_zc(n, 1);
  const SpreadingOperator op(z);
  const double noise_var = 100.0;  // -20 dB
  double mse = 0.0;
  std::size_t taps = 0;
  for (std::uint64_t f = 0; f < 1000; ++f) {
    const auto truth = draw_channel_set(1, 1, ChannelProfile{}, 6, f);
    Rng rng(6, Stream::PilotNoise, {f});
    auto rx = pilot_channel_output(plan, z, ChannelGrid::from_set(truth, n), noise_var, rng);
    rx[0] = op.despread(rx[0]);
    const auto est = estimate_channels(rx, plan, plan.pilot_amplitude());
    const CVec& h = truth.at(0, 0);
    for (std::size_t t = 0; t < est[0].taps.size(); ++t) {
      mse += std::norm(est[0].taps[t] - (t < h.size() ? h[t] : 0.0));
      ++taps;
    }
  }
  const double gain_db = db(noise_var / (mse / static_cast<double>(taps)));
  return {std::abs(gain_db - 33.1) <= 0.5, fmt::format("estimation gain {:.2f} dB, expected 33.1 +- 0.5", gain_db)};
}

const CellAggregate& find(const SweepResult& r, double snr, std::size_t k, std::size_t m, Direction d, CsiMode c) {
  for (const auto& a : r.aggregates)
    if (a.cell.snr_db == snr && a.cell.k == k && a.cell.m == m && a.cell.direction == d && a.cell.csi_mode == c)
      return a;
  throw std::runtime_error("cell not found");
}

Outcome fig1_trend() {
  SweepConfig c;
  c.snr_db = {-30.0, -25.0, -20.0};
  c.k = {32};
  c.trials = 50;
  const auto r = run_sweep(c);
  Outcome o{true, ""};
  for (auto [snr, tol] : {std::pair{-30.0, 0.05}, {-25.0, 0.05}, {-20.0, 0.12}}) {
    const auto& a = find(r, snr, 32, 1, Direction::Uplink, CsiMode::Perfect);
    const double gap = rel_gap(a.mean_capacity, a.mean_ideal);
    const bool ok = std::abs(gap) <= tol;
    o.pass = o.pass && ok;
    o.detail += fmt::format("{} dB gap {:.1f}% (tol {:.0f}%){}; ", snr, 100 * gap, 100 * tol, ok ? "" : " MISS");
  }
  return o;
}

Outcome fig2_trend() {
  SweepConfig c;
  c.snr_db = {-30.0};
  c.k = {32};
  c.m = {1, 8, 32};
  c.directions = {Direction::Downlink};
  c.trials = 20;
  const auto r = run_sweep(c);
  const auto& m1 = find(r, -30.0, 32, 1, Direction::Downlink, CsiMode::Perfect);
  const auto& m8 = find(r, -30.0, 32, 8, Direction::Downlink, CsiMode::Perfect);
  const auto& m32 = find(r, -30.0, 32, 32, Direction::Downlink, CsiMode::Perfect);
  // low-SNR linear prediction: SINR scales by 8
  const double rho1 = std::exp2(m1.mean_capacity) - 1.0;
  const double predicted = per_user_capacity(8.0 * rho1, 1) / per_user_capacity(rho1, 1);
  const double ratio = m8.mean_capacity / m1.mean_capacity;
  const double gap32 = rel_gap(m32.mean_capacity, m32.mean_ideal);
  const bool ok_ratio = std::abs(ratio / predicted - 1.0) <= 0.15;
  const bool ok_ideal = std::abs(gap32) <= 0.10;
  return {ok_ratio && ok_ideal, fmt::format("M8/M1 ratio {:.2f} vs predicted {:.2f} (tol 15%); M=32 gap to ideal "
                                            "{:.1f}% (tol 10%)",
                                            ratio, predicted, 100 * gap32)};
}

Outcome fig3_trend() {
  SweepConfig c;
  c.snr_db = {-20.0};
  c.k = {32};
  c.m = {1, 8, 128};
  c.directions = {Direction::Downlink};
  c.csi_modes = {CsiMode::Perfect, CsiMode::Estimated};
  c.trials = 10;
  const auto r = run_sweep(c);
  Outcome o{true, ""};
  for (std::size_t m : {1u, 8u, 128u}) {
    const double perfect = find(r, -20.0, 32, m, Direction::Downlink, CsiMode::Perfect).mean_capacity;
    const double estimated = find(r, -20.0, 32, m, Direction::Downlink, CsiMode::Estimated).mean_capacity;
    const double loss = rel_gap(estimated, perfect);
    const bool ok = m == 128 ? std::abs(loss - 0.18) <= 0.08 : loss < 0.03;
    o.pass = o.pass && ok;
    o.detail += fmt::format("M={} loss {:.1f}% ({}); ", m, 100 * loss, m == 128 ? "18 +- 8" : "< 3");
  }
  return o;
}

Outcome reproducibility() {
  SweepConfig c;
  c.snr_db = {-25.0, -15.0};
  c.k = {8};
  c.m = {1, 4};
  c.directions = {Direction::Uplink, Direction::Downlink};
  c.csi_modes = {CsiMode::Perfect, CsiMode::Estimated};
  c.trials = 3;
  auto csv = [&](std::size_t threads) {
    const auto r = run_sweep(c, threads);
    std::ostringstream ss;
    write_records_csv(ss, r.records);
    write_aggregate_csv(ss, c, r.aggregates);
    return ss.str();
  };
  const std::string one = csv(1), again = csv(1), many = csv(4);
  return {one == again && one == many,
          fmt::format("{} bytes; 1-thread rerun {}, 4-thread {}", one.size(), one == again ? "identical" : "differs",
                      one == many ? "identical" : "differs")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;  // 0 = no fixed bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"oracle equivalence", 10, oracle_equivalence},
      {"ZC properties", 5, zc_properties},
      {"ideal capacity consistency", 30, ideal_capacity_consistency},
      {"flat-channel analytics", 30, flat_channel_analytics},
      {"channel profile", 10, channel_profile},
      {"pilot estimation gain", 60, pilot_estimation_gain},
      {"UL multi-user trend (M=1)", 0, fig1_trend},
      {"DL antenna scaling trend", 0, fig2_trend},
      {"DL estimated-CSI loss trend", 0, fig3_trend},
      {"reproducibility", 60, reproducibility},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt::format("; over time budget {} s", c.budget_s);
    }
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    failed += !o.pass;
    fmt::print("{} [{:2}] {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail, secs);
    std::fflush(stdout);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
