#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cpdsss/chanest.hpp"
#include "cpdsss/config.hpp"
#include "cpdsss/error.hpp"
#include "cpdsss/oracle/checks.hpp"
#include "cpdsss/plot.hpp"
#include "cpdsss/zc_spread.hpp"

namespace cpdsss::cli {
namespace {

struct RunOptions {
  std::string out;
  std::string svg;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--out", opts.out, "Per-record CSV path (aggregates go to <stem>.agg.<ext>)");
  cmd->add_option("--svg", opts.svg, "Write a capacity-vs-SNR plot of the aggregates");
  cmd->add_option("--threads", opts.threads, "Worker threads (default: CPDSSS_THREADS or all cores)");
  cmd->add_option("--seed", opts.seed, "Master seed")->each([&opts](const std::string&) { opts.seed_set = true; });
}

int run_and_write(SweepConfig config, const RunOptions& opts, const std::string& title, std::ostream& out) {
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.out.empty()) config.output = opts.out;
  if (config.output.empty()) config.output = "results.csv";
  config.validate();

  const auto start = std::chrono::steady_clock::now();
  const SweepResult result = run_sweep(config, opts.threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_sweep_outputs(result, config, config.output);
  if (!opts.svg.empty()) {
    std::ofstream svg(opts.svg);
    if (!svg) throw Error(ErrorCode::Io, "cannot open " + opts.svg);
    write_svg_plot(svg, result.aggregates, title);
  }

  out << fmt::format("{:>8} {:>4} {:>4} {:>3} {:>9} {:>14} {:>12} {:>14}\n", "snr_db", "k", "m", "dir", "csi",
                     "capacity", "stderr", "ideal");
  for (const auto& a : result.aggregates)
    out << fmt::format("{:>8} {:>4} {:>4} {:>3} {:>9} {:>14.6g} {:>12.3g} {:>14.6g}\n", a.cell.snr_db, a.cell.k,
                       a.cell.m, to_string(a.cell.direction), to_string(a.cell.csi_mode), a.mean_capacity,
                       a.stderr_capacity, a.mean_ideal);
  out << fmt::format("{} records -> {} ({}), {:.1f} s\n", result.records.size(), config.output,
                     aggregate_path_for(config.output), secs);
  return 0;
}

std::vector<double> snr_grid(double lo, double hi, double step) {
  std::vector<double> v;
  for (double s = lo; s <= hi + 1e-9; s += step) v.push_back(s);
  return v;
}

}  // namespace

SweepConfig figure_config(const std::string& name, std::size_t trials, bool full) {
  SweepConfig cfg;
  cfg.snr_db = snr_grid(-40.0, 0.0, 5.0);
  cfg.trials = trials > 0 ? trials : (full ? 500 : 50);
  if (name == "fig1") {
    cfg.k = {1, 2, 8, 32};
    cfg.m = {1};
    cfg.directions = {Direction::Uplink};
    cfg.csi_modes = {CsiMode::Perfect};
  } else if (name == "fig2") {
    cfg.k = {8, 32};
    cfg.m = {1, 8, 32, 128};
    cfg.directions = {Direction::Downlink};
    cfg.csi_modes = {CsiMode::Perfect};
  } else if (name == "fig3") {
    cfg.k = {32};
    cfg.m = {1, 8, 32, 128};
    cfg.directions = {Direction::Downlink};
    cfg.csi_modes = {CsiMode::Perfect, CsiMode::Estimated};
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown figure " + name);
  }
  cfg.output = name + ".csv";
  return cfg;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CP-DSSS multi-user capacity simulator"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run a sweep described by a JSON config file");
  sweep->add_option("--config", config_path, "Sweep config (JSON)")->required();
  add_run_options(sweep, sweep_opts);

  struct FigureArgs {
    RunOptions run;
    std::size_t trials = 0;
    std::size_t frames = 1;
    std::size_t n = 2048;
    bool full = false;
  };
  std::map<std::string, FigureArgs> figure_args;
  std::vector<std::pair<std::string, CLI::App*>> figures;
  for (const char* name : {"fig1", "fig2", "fig3"}) {
    auto& args = figure_args[name];
    auto* cmd = app.add_subcommand(name, fmt::format("Built-in sweep reproducing the {} capacity curves", name));
    add_run_options(cmd, args.run);
    cmd->add_option("--trials", args.trials, "Monte Carlo trials per cell (default 50)");
    cmd->add_option("--frames", args.frames, "Frames per trial")->check(CLI::PositiveNumber);
    cmd->add_option("--n", args.n, "Frame length")->check(CLI::PositiveNumber);
    cmd->add_flag("--full", args.full, "Use 500 trials per cell");
    figures.emplace_back(name, cmd);
  }

  auto* validate = app.add_subcommand("validate", "Run the dense-oracle and invariant checks");

  struct DumpArgs {
    std::size_t k = 1, m = 1, trials = 1, n = 2048, n_cp = 144, l_h = 130;
    double tau = 25.0;
    std::uint64_t seed = 1;
    bool estimated = false;
    double snr_db = -20.0;
    std::int64_t root = 1;
    std::string out;
  } dump;
  auto* dump_cmd = app.add_subcommand("dump-channels", "Write channel realizations (or their estimates) as CSV");
  dump_cmd->add_option("--k", dump.k, "Users")->check(CLI::PositiveNumber);
  dump_cmd->add_option("--m", dump.m, "Antennas")->check(CLI::PositiveNumber);
  dump_cmd->add_option("--trials", dump.trials, "Trials")->check(CLI::PositiveNumber);
  dump_cmd->add_option("--seed", dump.seed, "Master seed");
  dump_cmd->add_option("--n", dump.n, "Frame length");
  dump_cmd->add_option("--n-cp", dump.n_cp, "CP length");
  dump_cmd->add_option("--l-h", dump.l_h, "Taps per channel")->check(CLI::PositiveNumber);
  dump_cmd->add_option("--tau", dump.tau, "Power decay constant (samples)");
  dump_cmd->add_flag("--estimated", dump.estimated, "Dump pilot-based estimates instead of true channels");
  dump_cmd->add_option("--snr-db", dump.snr_db, "Pilot SNR for --estimated");
  dump_cmd->add_option("--zc-root", dump.root, "ZC root for the pilot frame");
  dump_cmd->add_option("--out", dump.out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sweep) {
      SweepConfig cfg = load_sweep_config(config_path);
      return run_and_write(std::move(cfg), sweep_opts, "sweep", out);
    }
    for (auto& [name, cmd] : figures) {
      if (!*cmd) continue;
      const auto& args = figure_args[name];
      SweepConfig cfg = figure_config(name, args.trials, args.full);
      cfg.frames_per_trial = args.frames;
      cfg.n = args.n;
      return run_and_write(std::move(cfg), args.run, name, out);
    }
    if (*validate) {
      bool ok = true;
      for (const auto& r : oracle::validation_suite()) {
        out << fmt::format("{} {:<44} error {:.3e} (tol {:.0e})\n", r.passed() ? "PASS" : "FAIL", r.name, r.error,
                           r.tolerance);
        ok = ok && r.passed();
      }
      return ok ? 0 : 1;
    }
    if (*dump_cmd) {
      ChannelProfile profile{dump.l_h, dump.tau, true};
      profile.validate();
      std::ofstream file;
      if (!dump.out.empty()) {
        file.open(dump.out);
        if (!file) throw Error(ErrorCode::Io, "cannot open " + dump.out);
      }
      std::ostream& dst = dump.out.empty() ? out : file;
      write_channel_csv_header(dst);
      for (std::size_t t = 0; t < dump.trials; ++t) {
        ChannelSet set = draw_channel_set(dump.k, dump.m, profile, dump.seed, t);
        if (dump.estimated) {
          const PilotPlan plan(dump.n, dump.k, dump.n_cp);
          const ZcSequence z = generate_zc(dump.n, dump.root);
          const SpreadingOperator spreader(z);
          Rng rng(dump.seed, Stream::PilotNoise, {t});
          auto rx = pilot_channel_output(plan, z, ChannelGrid::from_set(set, dump.n),
                                         std::pow(10.0, -dump.snr_db / 10.0), rng);
          for (auto& y : rx) y = spreader.despread(y);
          set = to_channel_set(estimate_channels(rx, plan, plan.pilot_amplitude()), dump.k, dump.m);
        }
        write_channel_csv_rows(dst, t, set);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidConfig ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cpdsss::cli
