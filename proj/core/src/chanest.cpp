#include "cpdsss/chanest.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cpdsss/error.hpp"
#include "cpdsss/fft.hpp"

namespace cpdsss {

PilotPlan::PilotPlan(std::size_t n_, std::size_t k_, std::size_t n_cp_) : n(n_), k(k_), n_cp(n_cp_) {
  if (n < 2) throw Error(ErrorCode::InvalidLength, "pilot frame too short");
  if (k < 1 || n % k != 0) throw Error(ErrorCode::InvalidConfig, "user count must divide the frame length");
  if (n_cp < 1 || n_cp > n) throw Error(ErrorCode::InvalidConfig, "CP length must lie in [1, n]");
}

std::size_t PilotPlan::shift(std::size_t user) const {
  if (user >= k) throw Error(ErrorCode::IndexOutOfRange, fmt::format("pilot user {} of {}", user, k));
  return user * (n / k);
}

std::size_t PilotPlan::window_len() const noexcept { return std::min(n / k, n_cp); }

double PilotPlan::pilot_amplitude() const noexcept { return std::sqrt(static_cast<double>(n)); }

CVec build_pilot_frame(const PilotPlan& plan, const ZcSequence& z, std::size_t user) {
  if (z.samples.size() != plan.n) throw Error(ErrorCode::LengthMismatch, "ZC length differs from pilot plan");
  CVec frame = cyclic_shift(z.samples, plan.shift(user));
  const double amp = plan.pilot_amplitude();
  for (auto& v : frame) v *= amp;
  return frame;
}

std::vector<CVec> pilot_channel_output(const PilotPlan& plan, const ZcSequence& z,
                                       const ChannelGrid& truth, double noise_var, Rng& rng) {
  if (truth.users() != plan.k || truth.size() != plan.n)
    throw Error(ErrorCode::DimensionMismatch, "channel grid does not match pilot plan");

  std::vector<CVec> pilot_spectra;
  pilot_spectra.reserve(plan.k);
  for (std::size_t user = 0; user < plan.k; ++user)
    pilot_spectra.push_back(fft::forward(build_pilot_frame(plan, z, user)));

  std::vector<CVec> received(truth.antennas(), CVec(plan.n));
  for (std::size_t ant = 0; ant < truth.antennas(); ++ant) {
    CVec& y = received[ant];
    for (std::size_t user = 0; user < plan.k; ++user) {
      const auto& h = truth.at(user, ant).freq();
      const auto& p = pilot_spectra[user];
      for (std::size_t f = 0; f < plan.n; ++f) y[f] += h[f] * p[f];
    }
    fft::inverse(y, y);
    if (noise_var > 0.0) rng.add_noise(y, noise_var);
  }
  return received;
}

std::vector<ChannelEstimate> estimate_channels(std::span<const CVec> despread, const PilotPlan& plan,
                                               double pilot_amplitude) {
  const std::size_t window = plan.window_len();
  for (std::size_t user = 0; user < plan.k; ++user)
    if (plan.shift(user) + window > plan.n)
      throw Error(ErrorCode::WindowOverrun, fmt::format("window of user {} runs past the frame", user));
  if (!(pilot_amplitude > 0.0)) throw Error(ErrorCode::InvalidConfig, "pilot amplitude must be positive");

  std::vector<ChannelEstimate> estimates;
  estimates.reserve(plan.k * despread.size());
  const double inv = 1.0 / pilot_amplitude;
  for (std::size_t user = 0; user < plan.k; ++user) {
    const std::size_t d = plan.shift(user);
    for (std::size_t ant = 0; ant < despread.size(); ++ant) {
      const CVec& y = despread[ant];
      if (y.size() != plan.n) throw Error(ErrorCode::LengthMismatch, "despread pilot length");
      ChannelEstimate est{user, ant, CVec(window)};
      for (std::size_t t = 0; t < window; ++t) est.taps[t] = y[d + t] * inv;
      estimates.push_back(std::move(est));
    }
  }
  return estimates;
}

void normalize_estimates(std::vector<ChannelEstimate>& estimates) {
  for (auto& est : estimates) {
    double energy = 0.0;
    for (const auto& v : est.taps) energy += std::norm(v);
    if (energy <= 0.0) continue;
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& v : est.taps) v *= scale;
  }
}

ChannelSet to_channel_set(std::span<const ChannelEstimate> estimates, std::size_t k, std::size_t m) {
  ChannelSet set(k, m);
  std::vector<bool> seen(k * m, false);
  for (const auto& est : estimates) {
    set.at(est.user, est.antenna) = est.taps;
    seen[est.user * m + est.antenna] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorCode::MissingEstimate, "estimates do not cover every user and antenna");
  return set;
}

}  // namespace cpdsss
