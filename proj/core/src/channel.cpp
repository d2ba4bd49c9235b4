#include "cpdsss/channel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cpdsss/error.hpp"

namespace cpdsss {

void ChannelProfile::validate() const {
  if (l_h < 1) throw Error(ErrorCode::InvalidConfig, "channel profile needs at least one tap");
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidConfig, "channel decay constant must be positive");
}

std::vector<double> ChannelProfile::tap_powers() const {
  validate();
  std::vector<double> p(l_h);
  double total = 0.0;
  for (std::size_t l = 0; l < l_h; ++l) {
    p[l] = std::exp(-static_cast<double>(l) / tau);
    total += p[l];
  }
  for (auto& v : p) v /= total;
  return p;
}

CVec draw_impulse(const ChannelProfile& profile, Rng& rng) {
  const auto powers = profile.tap_powers();
  CVec h(powers.size());
  double energy = 0.0;
  for (std::size_t l = 0; l < h.size(); ++l) {
    h[l] = rng.complex_gaussian(powers[l]);
    energy += std::norm(h[l]);
  }
  if (profile.normalize && energy > 0.0) {
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& v : h) v *= scale;
  }
  return h;
}

ChannelSet::ChannelSet(std::size_t k, std::size_t m) : k_(k), m_(m), impulses_(k * m) {}

CVec& ChannelSet::at(std::size_t user, std::size_t antenna) {
  if (user >= k_ || antenna >= m_) throw Error(ErrorCode::IndexOutOfRange, "channel set index");
  return impulses_[user * m_ + antenna];
}

const CVec& ChannelSet::at(std::size_t user, std::size_t antenna) const {
  if (user >= k_ || antenna >= m_) throw Error(ErrorCode::IndexOutOfRange, "channel set index");
  return impulses_[user * m_ + antenna];
}

ChannelSet draw_channel_set(std::size_t k, std::size_t m, const ChannelProfile& profile,
                            std::uint64_t master_seed, std::uint64_t trial) {
  if (k < 1 || m < 1) throw Error(ErrorCode::InvalidConfig, "need at least one user and antenna");
  ChannelSet set(k, m);
  for (std::size_t user = 0; user < k; ++user) {
    for (std::size_t ant = 0; ant < m; ++ant) {
      Rng rng(master_seed, Stream::Channel, {trial, user, ant});
      set.at(user, ant) = draw_impulse(profile, rng);
    }
  }
  return set;
}

ChannelGrid::ChannelGrid(std::size_t k, std::size_t m, std::vector<CirculantOperator> ops)
    : k_(k), m_(m), ops_(std::move(ops)) {
  if (ops_.size() != k * m) throw Error(ErrorCode::DimensionMismatch, "channel grid size");
  n_ = ops_.empty() ? 0 : ops_.front().size();
  for (const auto& op : ops_)
    if (op.size() != n_) throw Error(ErrorCode::DimensionMismatch, "channel grid operator sizes");
}

ChannelGrid ChannelGrid::from_set(const ChannelSet& set, std::size_t n) {
  std::vector<CirculantOperator> ops;
  ops.reserve(set.users() * set.antennas());
  for (std::size_t user = 0; user < set.users(); ++user)
    for (std::size_t ant = 0; ant < set.antennas(); ++ant)
      ops.push_back(CirculantOperator::from_impulse(set.at(user, ant), n));
  return ChannelGrid(set.users(), set.antennas(), std::move(ops));
}

const CirculantOperator& ChannelGrid::at(std::size_t user, std::size_t antenna) const {
  if (user >= k_ || antenna >= m_)
    throw Error(ErrorCode::MissingEstimate, fmt::format("no channel for user {} antenna {}", user, antenna));
  return ops_[user * m_ + antenna];
}

std::span<const CirculantOperator> ChannelGrid::user(std::size_t user) const {
  if (user >= k_) throw Error(ErrorCode::MissingEstimate, fmt::format("no channels for user {}", user));
  return std::span<const CirculantOperator>(ops_).subspan(user * m_, m_);
}

void write_channel_csv_header(std::ostream& out) { out << "trial,user,antenna,tap_index,re,im\n"; }

void write_channel_csv_rows(std::ostream& out, std::uint64_t trial, const ChannelSet& set) {
  for (std::size_t user = 0; user < set.users(); ++user) {
    for (std::size_t ant = 0; ant < set.antennas(); ++ant) {
      const auto& h = set.at(user, ant);
      for (std::size_t l = 0; l < h.size(); ++l)
        out << fmt::format("{},{},{},{},{},{}\n", trial, user, ant, l, h[l].real(), h[l].imag());
    }
  }
}

std::map<std::uint64_t, ChannelSet> read_channel_csv(std::istream& in) {
  struct Row {
    std::uint64_t trial;
    std::size_t user, antenna, tap;
    cplx value;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != "trial,user,antenna,tap_index,re,im")
    throw Error(ErrorCode::Io, "channel CSV: missing header");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    Row row{};
    double re = 0.0, im = 0.0;
    char c1, c2, c3, c4, c5;
    if (!(fields >> row.trial >> c1 >> row.user >> c2 >> row.antenna >> c3 >> row.tap >> c4 >> re >>
          c5 >> im) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',')
      throw Error(ErrorCode::Io, fmt::format("channel CSV: malformed line {}", line_no));
    row.value = {re, im};
    rows.push_back(row);
  }

  struct Extent {
    std::size_t k = 0, m = 0;
  };
  std::map<std::uint64_t, Extent> extents;
  for (const auto& r : rows) {
    auto& e = extents[r.trial];
    e.k = std::max(e.k, r.user + 1);
    e.m = std::max(e.m, r.antenna + 1);
  }
  std::map<std::uint64_t, ChannelSet> sets;
  for (const auto& [trial, e] : extents) sets.emplace(trial, ChannelSet(e.k, e.m));
  for (const auto& r : rows) {
    auto& h = sets.at(r.trial).at(r.user, r.antenna);
    if (h.size() <= r.tap) h.resize(r.tap + 1);
    h[r.tap] = r.value;
  }
  return sets;
}

}  // namespace cpdsss
