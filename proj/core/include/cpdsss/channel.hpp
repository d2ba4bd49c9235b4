#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>

#include "cpdsss/circulant.hpp"
#include "cpdsss/rng.hpp"
#include "cpdsss/types.hpp"

namespace cpdsss {

/// Exponential power-delay profile: E|h_l|^2 proportional to exp(-l / tau).
struct ChannelProfile {
  std::size_t l_h = 130;
  double tau = 25.0;
  bool normalize = true;

  void validate() const;
  /// Expected tap powers, summing to one.
  std::vector<double> tap_powers() const;
};

/// Rayleigh taps with the profile's power roll-off; unit energy when
/// `profile.normalize` is set.
CVec draw_impulse(const ChannelProfile& profile, Rng& rng);

/// Impulse responses for k users by m gateway antennas.
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(std::size_t k, std::size_t m);

  std::size_t users() const noexcept { return k_; }
  std::size_t antennas() const noexcept { return m_; }

  CVec& at(std::size_t user, std::size_t antenna);
  const CVec& at(std::size_t user, std::size_t antenna) const;

  bool operator==(const ChannelSet&) const = default;

 private:
  std::size_t k_ = 0;
  std::size_t m_ = 0;
  std::vector<CVec> impulses_;  // user-major
};

/// Each (user, antenna) pair draws from its own substream keyed by
/// (master, trial, user, antenna), so a pair's taps do not depend on k or m.
ChannelSet draw_channel_set(std::size_t k, std::size_t m, const ChannelProfile& profile,
                            std::uint64_t master_seed, std::uint64_t trial);

/// k x m grid of circulant channel operators (true or estimated), each
/// holding its n-point spectrum.
class ChannelGrid {
 public:
  ChannelGrid() = default;
  ChannelGrid(std::size_t k, std::size_t m, std::vector<CirculantOperator> ops);

  static ChannelGrid from_set(const ChannelSet& set, std::size_t n);

  std::size_t users() const noexcept { return k_; }
  std::size_t antennas() const noexcept { return m_; }
  std::size_t size() const noexcept { return n_; }
  const CirculantOperator& at(std::size_t user, std::size_t antenna) const;
  /// The m operators of one user.
  std::span<const CirculantOperator> user(std::size_t user) const;

 private:
  std::size_t k_ = 0;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<CirculantOperator> ops_;  // user-major
};

/// CSV with header `trial,user,antenna,tap_index,re,im`.
void write_channel_csv_header(std::ostream& out);
void write_channel_csv_rows(std::ostream& out, std::uint64_t trial, const ChannelSet& set);
/// Parses the format above, keyed by trial. Throws Io on malformed input.
std::map<std::uint64_t, ChannelSet> read_channel_csv(std::istream& in);

}  // namespace cpdsss
