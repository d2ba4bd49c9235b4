#pragma once

#include <cstddef>
#include <vector>

#include "cpdsss/channel.hpp"
#include "cpdsss/types.hpp"
#include "cpdsss/zc_spread.hpp"

namespace cpdsss {

/// Pilot layout for a single L = N pilot frame shared by all k users.
/// User u sends sqrt(n) on ZC shift u * n / k; the gateway keeps a window of
/// min(n / k, n_cp) despread samples per user.
struct PilotPlan {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t n_cp = 0;

  PilotPlan(std::size_t n, std::size_t k, std::size_t n_cp);

  std::size_t shift(std::size_t user) const;
  std::size_t window_len() const noexcept;
  double pilot_amplitude() const noexcept;
};

struct ChannelEstimate {
  std::size_t user = 0;
  std::size_t antenna = 0;
  CVec taps;
};

/// Time-domain (spread) pilot frame of `user`: sqrt(n) * z shifted by d_user.
CVec build_pilot_frame(const PilotPlan& plan, const ZcSequence& z, std::size_t user);

/// Received, still-spread pilot frame at each gateway antenna:
/// sum_k h_k^(m) (*) pilot_k + noise, with circular convolution.
std::vector<CVec> pilot_channel_output(const PilotPlan& plan, const ZcSequence& z,
                                       const ChannelGrid& truth, double noise_var, Rng& rng);

/// Despread pilot frames (one per antenna) -> estimates for every user and
/// antenna, ordered user-major. Each window is scaled by 1/pilot_amplitude.
std::vector<ChannelEstimate> estimate_channels(std::span<const CVec> despread, const PilotPlan& plan,
                                               double pilot_amplitude);

/// Rescales each estimate to unit energy, the receiver's gain control under
/// equal-gain power control. All-zero estimates are left untouched.
void normalize_estimates(std::vector<ChannelEstimate>& estimates);

/// Packs estimates into a ChannelSet (k x m) for export or reuse.
ChannelSet to_channel_set(std::span<const ChannelEstimate> estimates, std::size_t k, std::size_t m);

}  // namespace cpdsss
