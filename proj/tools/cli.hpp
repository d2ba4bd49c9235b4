#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "cpdsss/harness.hpp"

namespace cpdsss::cli {

/// Built-in sweep reproducing one of the capacity figures ("fig1", "fig2",
/// "fig3"). `trials` = 0 keeps the default (50, or 500 with `full`).
SweepConfig figure_config(const std::string& name, std::size_t trials, bool full);

/// Entry point behind the `cpdsss` binary. Returns the process exit status:
/// 0 on success, 1 on runtime or validation failure, 2 on config errors and
/// the CLI11 code for usage errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cpdsss::cli
