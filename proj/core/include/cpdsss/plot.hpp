#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "cpdsss/harness.hpp"

namespace cpdsss {

/// Capacity-vs-SNR line plot, log-scaled capacity axis. One solid series per
/// (k, m, direction, csi_mode) plus a dashed ideal series per (m, direction).
void write_svg_plot(std::ostream& out, std::span<const CellAggregate> aggregates,
                    const std::string& title);

}  // namespace cpdsss
