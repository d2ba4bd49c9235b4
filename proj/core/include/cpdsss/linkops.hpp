#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpdsss/channel.hpp"
#include "cpdsss/chanest.hpp"
#include "cpdsss/circulant.hpp"
#include "cpdsss/rng.hpp"
#include "cpdsss/types.hpp"

namespace cpdsss {

enum class SymbolSource { Qpsk, Gaussian };

/// Parameters of one link configuration. SNR is per sample with sigma_s^2 = 1
/// and unit-energy channels, so the noise variance is 10^(-snr_db/10).
struct LinkScenario {
  std::size_t n = 2048;
  std::size_t n_cp = 144;
  std::size_t l = 1;
  std::size_t k = 1;
  std::size_t m = 1;
  std::size_t l_h = 130;
  double snr_db = -20.0;
  SymbolSource symbol_source = SymbolSource::Qpsk;
  std::size_t frames_per_trial = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 1;

  void validate() const;
  double noise_var() const;
};

/// One user's symbols for one frame; each symbol carries power l.
struct SymbolFrame {
  std::size_t user = 0;
  CVec symbols;
};

struct DetectionResult {
  std::size_t user = 0;
  CVec estimated;
  CVec transmitted;
};

/// n/l unit-power symbols scaled by sqrt(l).
SymbolFrame draw_symbol_frame(std::size_t user, const ExpanderSpec& e, SymbolSource source, Rng& rng);

// Everything below operates on despread-domain frames: y~ = H E_L s + v~.

/// Per-antenna received vectors y~^(m) = sum_k H_k^(m) E_L s_k + v~^(m).
/// Noise is drawn antenna by antenna from `rng`; noise_var = 0 draws nothing.
std::vector<CVec> ul_channel_output(const ChannelGrid& channels, std::span<const SymbolFrame> frames,
                                    const ExpanderSpec& e, double noise_var, Rng& rng);

/// Matched filter averaged over antennas:
/// s_hat_i = E_L^H (1/M) sum_m H_hat_i^(m)H y~^(m) / ||h_hat_i^(m)||^2.
CVec ul_mf_detect(std::span<const CVec> received, const ChannelGrid& estimates, std::size_t user,
                  const ExpanderSpec& e);
/// Same as ul_mf_detect for every user, transforming each antenna once.
std::vector<CVec> ul_mf_detect_all(std::span<const CVec> received, const ChannelGrid& estimates,
                                   const ExpanderSpec& e);

/// Per-antenna TR-precoded transmit vectors
/// x^(m) = sum_k H_hat_k^(m)H E_L s_k / sqrt(M).
std::vector<CVec> dl_precode_transmit(const ChannelGrid& estimates, std::span<const SymbolFrame> frames,
                                      const ExpanderSpec& e);

/// Receiver gain of user i, mean over antennas of ||h_hat_i^(m)||^2.
double dl_receiver_gain(const ChannelGrid& estimates, std::size_t user);

/// User i receives sum_m H_i^(m) x^(m) + v~_i and scales by 1/(sqrt(M) gain).
CVec dl_receive_detect(const ChannelGrid& truth, std::size_t user, std::span<const CVec> transmit,
                       double noise_var, double gain, Rng& rng, const ExpanderSpec& e);
/// dl_receive_detect for every user. gains[i] belongs to user i; user i's
/// noise comes from rngs[i].
std::vector<CVec> dl_receive_detect_all(const ChannelGrid& truth, std::span<const CVec> transmit,
                                        double noise_var, std::span<const double> gains,
                                        std::span<Rng> rngs, const ExpanderSpec& e);

}  // namespace cpdsss
