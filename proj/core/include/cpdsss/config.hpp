#pragma once

#include <string>

#include "cpdsss/harness.hpp"

namespace cpdsss {

/// Parses a JSON sweep config. Unknown keys and wrong types are rejected with
/// InvalidConfig; syntax errors report the line and column.
///
/// {
///   "snr_db": [-30, -25, -20],  "k": [32],  "m": [1],  "l": 1,
///   "n": 2048,  "n_cp": 144,  "profile": {"l_h": 130, "tau": 25, "normalize": true},
///   "csi_mode": ["perfect", "estimated"],  "direction": ["ul", "dl"],
///   "trials": 50,  "frames_per_trial": 1,  "seed": 1,  "zc_root": 1,
///   "symbols": "qpsk",  "output": "results.csv"
/// }
///
/// Every key is optional; omitted keys keep the SweepConfig defaults.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

}  // namespace cpdsss
