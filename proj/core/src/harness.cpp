#include "cpdsss/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "cpdsss/chanest.hpp"
#include "cpdsss/error.hpp"
#include "cpdsss/zc_spread.hpp"

namespace cpdsss {
namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::InvalidConfig, fmt::format("{}: {}", field, msg));
}

LinkScenario scenario_for(const SweepConfig& config, const SweepCell& cell) {
  LinkScenario s;
  s.n = config.n;
  s.n_cp = config.n_cp;
  s.l = config.l;
  s.k = cell.k;
  s.m = cell.m;
  s.l_h = config.profile.l_h;
  s.snr_db = cell.snr_db;
  s.symbol_source = config.symbol_source;
  s.frames_per_trial = config.frames_per_trial;
  s.trials = config.trials;
  s.seed = config.seed;
  return s;
}

std::string describe(const SweepCell& cell) {
  return fmt::format("cell {} (snr_db={}, k={}, m={}, {}, {})", cell.id, cell.snr_db, cell.k, cell.m,
                     to_string(cell.direction), to_string(cell.csi_mode));
}

ChannelGrid estimate_grid(const SweepConfig& config, const SweepCell& cell, const ChannelGrid& truth,
                          double noise_var, std::size_t trial) {
  const PilotPlan plan(config.n, cell.k, config.n_cp);
  const ZcSequence z = generate_zc(config.n, config.zc_root);
  const SpreadingOperator spreader(z);
  Rng rng(config.seed, Stream::PilotNoise, {trial});
  auto received = pilot_channel_output(plan, z, truth, noise_var, rng);
  for (auto& y : received) y = spreader.despread(y);
  auto estimates = estimate_channels(received, plan, plan.pilot_amplitude());
  normalize_estimates(estimates);
  return ChannelGrid::from_set(to_channel_set(estimates, cell.k, cell.m), config.n);
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

void SweepConfig::validate() const {
  if (snr_db.empty()) config_error("snr_db", "list is empty");
  if (k.empty()) config_error("k", "list is empty");
  if (m.empty()) config_error("m", "list is empty");
  if (csi_modes.empty()) config_error("csi_mode", "list is empty");
  if (directions.empty()) config_error("direction", "list is empty");
  if (n < 2) config_error("n", "must be at least 2");
  if (l < 1 || n % l != 0) config_error("l", fmt::format("{} does not divide n = {}", l, n));
  for (auto kk : k)
    if (kk < 1 || n % kk != 0) config_error("k", fmt::format("{} does not divide n = {}", kk, n));
  for (auto mm : m)
    if (mm < 1) config_error("m", "antenna counts must be at least 1");
  for (auto snr : snr_db)
    if (!std::isfinite(snr)) config_error("snr_db", "values must be finite");
  if (profile.l_h < 1) config_error("profile.l_h", "must be at least 1");
  if (!(profile.tau > 0.0)) config_error("profile.tau", "must be positive");
  if (n_cp < profile.l_h || n_cp > n)
    config_error("n_cp", fmt::format("need l_h ({}) <= n_cp ({}) <= n ({})", profile.l_h, n_cp, n));
  if (trials < 1) config_error("trials", "must be at least 1");
  if (frames_per_trial < 1) config_error("frames_per_trial", "must be at least 1");
  if (std::gcd(zc_root, static_cast<std::int64_t>(n)) != 1)
    config_error("zc_root", fmt::format("{} is not coprime with n = {}", zc_root, n));
}

std::vector<SweepCell> enumerate_cells(const SweepConfig& config) {
  std::vector<SweepCell> cells;
  for (double snr : config.snr_db)
    for (auto k : config.k)
      for (auto m : config.m)
        for (auto dir : config.directions)
          for (auto csi : config.csi_modes)
            cells.push_back(SweepCell{cells.size(), snr, k, m, dir, csi});
  return cells;
}

std::vector<CapacityRecord> run_trial(const SweepConfig& config, const SweepCell& cell,
                                      std::size_t trial) {
  try {
    const LinkScenario scenario = scenario_for(config, cell);
    scenario.validate();
    const ExpanderSpec e(config.n, config.l);
    const double noise_var = scenario.noise_var();
    const double snr = 1.0 / noise_var;
    const std::uint64_t seed = config.seed;

    const ChannelGrid truth =
        ChannelGrid::from_set(draw_channel_set(cell.k, cell.m, config.profile, seed, trial), config.n);
    ChannelGrid estimated;
    if (cell.csi_mode == CsiMode::Estimated) estimated = estimate_grid(config, cell, truth, noise_var, trial);
    const ChannelGrid& csi = cell.csi_mode == CsiMode::Estimated ? estimated : truth;

    std::vector<std::vector<DetectionResult>> results(cell.k);
    for (std::size_t f = 0; f < config.frames_per_trial; ++f) {
      std::vector<SymbolFrame> frames;
      frames.reserve(cell.k);
      for (std::size_t u = 0; u < cell.k; ++u) {
        Rng rng(seed, Stream::Symbols, {trial, f, u});
        frames.push_back(draw_symbol_frame(u, e, config.symbol_source, rng));
      }

      std::vector<CVec> detected;
      if (cell.direction == Direction::Uplink) {
        Rng noise(seed, Stream::UplinkNoise, {trial, f});
        const auto received = ul_channel_output(truth, frames, e, noise_var, noise);
        detected = ul_mf_detect_all(received, csi, e);
      } else {
        const auto transmit = dl_precode_transmit(csi, frames, e);
        std::vector<double> gains(cell.k);
        std::vector<Rng> noise;
        noise.reserve(cell.k);
        for (std::size_t u = 0; u < cell.k; ++u) {
          gains[u] = dl_receiver_gain(csi, u);
          noise.emplace_back(seed, Stream::DownlinkNoise, std::initializer_list<std::uint64_t>{trial, f, u});
        }
        detected = dl_receive_detect_all(truth, transmit, noise_var, gains, noise, e);
      }
      for (std::size_t u = 0; u < cell.k; ++u)
        results[u].push_back(DetectionResult{u, std::move(detected[u]), std::move(frames[u].symbols)});
    }

    std::vector<CapacityRecord> records;
    records.reserve(cell.k);
    for (std::size_t u = 0; u < cell.k; ++u) {
      const SinrEstimate sinr = measure_sinr(results[u], config.l);
      CapacityRecord r;
      r.scenario = cell.id;
      r.snr_db = cell.snr_db;
      r.k = cell.k;
      r.m = cell.m;
      r.l = config.l;
      r.direction = cell.direction;
      r.csi_mode = cell.csi_mode;
      r.user = u;
      r.trial = trial;
      r.sinr = sinr.rho;
      r.per_user_capacity = per_user_capacity(sinr.rho, config.l);
      const auto channels = truth.user(u);
      if (cell.direction == Direction::Uplink) {
        r.ideal_capacity = ideal_capacity(channels, {}, Stacking::Receive, config.l, snr);
      } else {
        const auto g = tr_precoder(channels);
        r.ideal_capacity = ideal_capacity(channels, g, Stacking::Transmit, config.l, snr);
      }
      records.push_back(r);
    }
    return records;
  } catch (const Error& err) {
    throw Error(err.code(), fmt::format("{}, trial {}: {}", describe(cell), trial, err.what()));
  }
}

std::vector<CapacityRecord> run_cell(const SweepConfig& config, const SweepCell& cell,
                                     std::size_t threads) {
  config.validate();
  std::vector<std::vector<CapacityRecord>> per_trial(config.trials);
  parallel_for(config.trials, resolve_thread_count(threads),
               [&](std::size_t t) { per_trial[t] = run_trial(config, cell, t); });
  std::vector<CapacityRecord> records;
  for (auto& rs : per_trial) records.insert(records.end(), rs.begin(), rs.end());
  return records;
}

CellAggregate aggregate_cell(const SweepCell& cell, std::span<const CapacityRecord> records) {
  CellAggregate agg;
  agg.cell = cell;
  if (records.empty()) return agg;

  // Records arrive grouped by trial; average users within each trial first.
  std::vector<double> cap_means, ideal_means;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    double cap = 0.0, ideal = 0.0;
    while (end < records.size() && records[end].trial == records[begin].trial) {
      cap += records[end].per_user_capacity;
      ideal += records[end].ideal_capacity;
      ++end;
    }
    const double users = static_cast<double>(end - begin);
    cap_means.push_back(cap / users);
    ideal_means.push_back(ideal / users);
    begin = end;
  }

  auto mean_and_stderr = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / n;
    if (v.size() < 2) return std::pair{mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / (n - 1.0) / n)};
  };
  agg.trials = cap_means.size();
  std::tie(agg.mean_capacity, agg.stderr_capacity) = mean_and_stderr(cap_means);
  std::tie(agg.mean_ideal, agg.stderr_ideal) = mean_and_stderr(ideal_means);
  return agg;
}

SweepResult run_sweep(const SweepConfig& config, std::size_t threads) {
  config.validate();
  const auto cells = enumerate_cells(config);
  const std::size_t trials = config.trials;
  std::vector<std::vector<CapacityRecord>> slots(cells.size() * trials);
  parallel_for(slots.size(), resolve_thread_count(threads), [&](std::size_t i) {
    slots[i] = run_trial(config, cells[i / trials], i % trials);
  });

  SweepResult result;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t first = result.records.size();
    for (std::size_t t = 0; t < trials; ++t) {
      auto& rs = slots[c * trials + t];
      result.records.insert(result.records.end(), rs.begin(), rs.end());
    }
    result.aggregates.push_back(aggregate_cell(
        cells[c], std::span<const CapacityRecord>(result.records).subspan(first)));
  }
  return result;
}

std::size_t resolve_thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CPDSSS_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_records_csv(std::ostream& out, std::span<const CapacityRecord> records) {
  out << "snr_db,k,m,l,direction,csi_mode,user,trial,sinr_linear,capacity_bpcu\n";
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", format_number(r.snr_db), r.k, r.m, r.l,
                       to_string(r.direction), to_string(r.csi_mode), r.user, r.trial,
                       format_number(r.sinr), format_number(r.per_user_capacity));
  }
}

void write_aggregate_csv(std::ostream& out, const SweepConfig& config,
                         std::span<const CellAggregate> aggregates) {
  out << "snr_db,k,m,l,direction,csi_mode,trials,mean_capacity_bpcu,stderr,mean_ideal_bpcu,ideal_stderr\n";
  for (const auto& a : aggregates) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", format_number(a.cell.snr_db), a.cell.k,
                       a.cell.m, config.l, to_string(a.cell.direction), to_string(a.cell.csi_mode),
                       a.trials, format_number(a.mean_capacity), format_number(a.stderr_capacity),
                       format_number(a.mean_ideal), format_number(a.stderr_ideal));
  }
}

std::string aggregate_path_for(const std::string& records_path) {
  const auto slash = records_path.find_last_of('/');
  const auto dot = records_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return records_path + ".agg.csv";
  return records_path.substr(0, dot) + ".agg" + records_path.substr(dot);
}

void write_sweep_outputs(const SweepResult& result, const SweepConfig& config,
                         const std::string& records_path) {
  std::ofstream records(records_path);
  if (!records) throw Error(ErrorCode::Io, fmt::format("cannot open {}", records_path));
  write_records_csv(records, result.records);
  const std::string agg_path = aggregate_path_for(records_path);
  std::ofstream agg(agg_path);
  if (!agg) throw Error(ErrorCode::Io, fmt::format("cannot open {}", agg_path));
  write_aggregate_csv(agg, config, result.aggregates);
  if (!records || !agg) throw Error(ErrorCode::Io, "write failed");
}

}  // namespace cpdsss
