#include "cpdsss/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

namespace cpdsss {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 200, kTop = 40, kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

struct Series {
  std::string label;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;
};

}  // namespace

void write_svg_plot(std::ostream& out, std::span<const CellAggregate> aggregates,
                    const std::string& title) {
  using Key = std::tuple<std::size_t, std::size_t, int, int>;
  std::map<Key, Series> measured;
  std::map<std::pair<std::size_t, int>, Series> ideal;
  for (const auto& a : aggregates) {
    const auto& c = a.cell;
    auto& s = measured[{c.m, c.k, static_cast<int>(c.direction), static_cast<int>(c.csi_mode)}];
    s.label = fmt::format("{} K={} M={} {}", to_string(c.direction), c.k, c.m, to_string(c.csi_mode));
    s.points.emplace_back(c.snr_db, a.mean_capacity);
    // The ideal reference is single-user, so one curve per (m, direction).
    auto& i = ideal[{c.m, static_cast<int>(c.direction)}];
    i.label = fmt::format("ideal {} M={}", to_string(c.direction), c.m);
    i.dashed = true;
    if (std::none_of(i.points.begin(), i.points.end(), [&](auto& p) { return p.first == c.snr_db; }))
      i.points.emplace_back(c.snr_db, a.mean_ideal);
  }
  std::vector<Series> all;
  for (auto& [k, s] : ideal) all.push_back(std::move(s));
  for (auto& [k, s] : measured) all.push_back(std::move(s));

  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (auto& s : all) {
    std::sort(s.points.begin(), s.points.end());
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      if (y > 0 && std::isfinite(y)) {
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (all.empty() || y_min > y_max) {
    y_min = 1e-3;
    y_max = 1.0;
  }
  if (x_min >= x_max) {
    x_min -= 1;
    x_max += 1;
  }
  const double d_lo = std::floor(std::log10(y_min));
  const double d_hi = std::max(d_lo + 1, std::ceil(std::log10(y_max)));
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return kTop + (d_hi - std::log10(y)) / (d_hi - d_lo) * ph; };

  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  out << fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kLeft + pw / 2, title);
  out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     kLeft, kTop, pw, ph);
  for (double d = d_lo; d <= d_hi; d += 1) {
    const double y = py(std::pow(10.0, d));
    out << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n", kLeft, y,
                       kLeft + pw, y);
    out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{}</text>\n", kLeft - 6, y + 4, d);
  }
  const double x_step = (x_max - x_min) > 20 ? 10 : 5;
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max; x += x_step) {
    out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", px(x), kTop,
                       kTop + ph);
    out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px(x), kTop + ph + 16, x);
  }
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">SNR (dB)</text>\n", kLeft + pw / 2,
                     kHeight - 10);
  out << fmt::format(
      "<text x=\"16\" y=\"{0}\" transform=\"rotate(-90 16 {0})\" text-anchor=\"middle\">capacity "
      "(bits/sample)</text>\n",
      kTop + ph / 2);

  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& s = all[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string pts;
    for (auto [x, y] : s.points)
      if (y > 0 && std::isfinite(y)) pts += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
    out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n", color,
                       s.dashed ? " stroke-dasharray=\"6 4\"" : "", pts);
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    out << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"{}/>\n", kLeft + pw + 10,
                       ly - 4, kLeft + pw + 34, ly - 4, color, s.dashed ? " stroke-dasharray=\"6 4\"" : "");
    out << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + pw + 40, ly, s.label);
  }
  out << "</svg>\n";
}

}  // namespace cpdsss
