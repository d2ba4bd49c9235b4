#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpdsss/capacity.hpp"
#include "cpdsss/channel.hpp"
#include "cpdsss/linkops.hpp"

namespace cpdsss {

struct SweepConfig {
  std::vector<double> snr_db{-20.0};
  std::vector<std::size_t> k{1};
  std::vector<std::size_t> m{1};
  std::size_t l = 1;
  std::size_t n = 2048;
  std::size_t n_cp = 144;
  ChannelProfile profile{};
  std::vector<CsiMode> csi_modes{CsiMode::Perfect};
  std::vector<Direction> directions{Direction::Uplink};
  std::size_t trials = 50;
  std::size_t frames_per_trial = 1;
  std::uint64_t seed = 1;
  std::int64_t zc_root = 1;
  SymbolSource symbol_source = SymbolSource::Qpsk;
  std::string output;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;
};

/// One point of the sweep grid.
struct SweepCell {
  std::size_t id = 0;
  double snr_db = 0.0;
  std::size_t k = 1;
  std::size_t m = 1;
  Direction direction = Direction::Uplink;
  CsiMode csi_mode = CsiMode::Perfect;
};

/// Cells in output order: snr, k, m, direction, csi_mode (last varies fastest).
std::vector<SweepCell> enumerate_cells(const SweepConfig& config);

/// One Monte Carlo trial of a cell: one record per user. The ideal column is
/// the single-user log-det capacity of that user's true channels (no
/// precoding on the uplink, TR precoding on the downlink).
std::vector<CapacityRecord> run_trial(const SweepConfig& config, const SweepCell& cell,
                                      std::size_t trial);

/// All trials of one cell, ordered by trial then user.
std::vector<CapacityRecord> run_cell(const SweepConfig& config, const SweepCell& cell,
                                     std::size_t threads = 0);

struct CellAggregate {
  SweepCell cell;
  std::size_t trials = 0;
  double mean_capacity = 0.0;
  double stderr_capacity = 0.0;
  double mean_ideal = 0.0;
  double stderr_ideal = 0.0;
};

/// Mean over trials x users; stderr from the spread of per-trial user means.
CellAggregate aggregate_cell(const SweepCell& cell, std::span<const CapacityRecord> records);

struct SweepResult {
  std::vector<CapacityRecord> records;
  std::vector<CellAggregate> aggregates;
};

/// Runs every cell. The result does not depend on `threads`; 0 picks the
/// default (CPDSSS_THREADS, else hardware concurrency).
SweepResult run_sweep(const SweepConfig& config, std::size_t threads = 0);

std::size_t resolve_thread_count(std::size_t requested);

/// Per-record CSV:
/// snr_db,k,m,l,direction,csi_mode,user,trial,sinr_linear,capacity_bpcu
void write_records_csv(std::ostream& out, std::span<const CapacityRecord> records);
/// Per-cell CSV:
/// snr_db,k,m,l,direction,csi_mode,trials,mean_capacity_bpcu,stderr,mean_ideal_bpcu,ideal_stderr
void write_aggregate_csv(std::ostream& out, const SweepConfig& config,
                         std::span<const CellAggregate> aggregates);

/// `results.csv` -> `results.agg.csv`
std::string aggregate_path_for(const std::string& records_path);

/// Writes both CSV files; throws Io if either cannot be opened.
void write_sweep_outputs(const SweepResult& result, const SweepConfig& config,
                         const std::string& records_path);

}  // namespace cpdsss
