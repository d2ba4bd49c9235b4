#include "cpdsss/linkops.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cpdsss/error.hpp"
#include "cpdsss/fft.hpp"

namespace cpdsss {
namespace {

void require(bool ok, ErrorCode code, const char* what) {
  if (!ok) throw Error(code, what);
}

std::vector<CVec> symbol_spectra(std::span<const SymbolFrame> frames, const ExpanderSpec& e) {
  std::vector<CVec> spectra;
  spectra.reserve(frames.size());
  for (const auto& frame : frames) {
    CVec x = expand(e, frame.symbols);
    fft::forward(x, x);
    spectra.push_back(std::move(x));
  }
  return spectra;
}

void check_frames(const ChannelGrid& grid, std::span<const SymbolFrame> frames, const ExpanderSpec& e) {
  require(grid.size() == e.n, ErrorCode::DimensionMismatch, "channel size differs from frame length");
  require(frames.size() == grid.users(), ErrorCode::DimensionMismatch, "need one frame per user");
  for (std::size_t i = 0; i < frames.size(); ++i)
    require(frames[i].symbols.size() == e.symbols(), ErrorCode::LengthMismatch, "symbol frame length");
}

double estimate_energy(const CirculantOperator& op) {
  const double energy = op.energy();
  require(energy > 0.0, ErrorCode::MissingEstimate, "channel estimate has zero energy");
  return energy;
}

// Matched filter for one user on already-transformed antenna spectra.
CVec mf_from_spectra(std::span<const CVec> spectra, const ChannelGrid& estimates, std::size_t user,
                     const ExpanderSpec& e) {
  const std::size_t m = spectra.size();
  CVec acc(e.n);
  for (std::size_t ant = 0; ant < m; ++ant) {
    const auto& op = estimates.at(user, ant);
    const auto& h = op.freq();
    const auto& y = spectra[ant];
    const double w = 1.0 / (estimate_energy(op) * static_cast<double>(m));
    for (std::size_t f = 0; f < e.n; ++f) acc[f] += std::conj(h[f]) * y[f] * w;
  }
  fft::inverse(acc, acc);
  return compress(e, acc);
}

std::vector<CVec> antenna_spectra(std::span<const CVec> signals, std::size_t n) {
  std::vector<CVec> spectra;
  spectra.reserve(signals.size());
  for (const auto& x : signals) {
    require(x.size() == n, ErrorCode::LengthMismatch, "antenna signal length");
    spectra.push_back(fft::forward(x));
  }
  return spectra;
}

CVec dl_from_spectra(const ChannelGrid& truth, std::size_t user, std::span<const CVec> spectra,
                     double noise_var, double gain, Rng& rng, const ExpanderSpec& e) {
  require(spectra.size() == truth.antennas(), ErrorCode::DimensionMismatch,
          "need one transmit vector per antenna");
  require(gain > 0.0, ErrorCode::MissingEstimate, "receiver gain must be positive");
  CVec y(e.n);
  for (std::size_t ant = 0; ant < spectra.size(); ++ant) {
    const auto& h = truth.at(user, ant).freq();
    const auto& x = spectra[ant];
    for (std::size_t f = 0; f < e.n; ++f) y[f] += h[f] * x[f];
  }
  fft::inverse(y, y);
  if (noise_var > 0.0) rng.add_noise(y, noise_var);
  const double scale = 1.0 / (std::sqrt(static_cast<double>(spectra.size())) * gain);
  CVec s = compress(e, y);
  for (auto& v : s) v *= scale;
  return s;
}

}  // namespace

void LinkScenario::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (n < 2) fail("n must be at least 2");
  if (l < 1 || n % l != 0) fail(fmt::format("l = {} must divide n = {}", l, n));
  if (k < 1 || n % k != 0) fail(fmt::format("k = {} must divide n = {}", k, n));
  if (m < 1) fail("m must be at least 1");
  if (l_h < 1 || l_h > n_cp || n_cp > n) fail(fmt::format("need 1 <= l_h ({}) <= n_cp ({}) <= n ({})", l_h, n_cp, n));
  if (!std::isfinite(snr_db)) fail("snr_db must be finite");
  if (frames_per_trial < 1 || trials < 1) fail("trials and frames_per_trial must be at least 1");
}

double LinkScenario::noise_var() const { return std::pow(10.0, -snr_db / 10.0); }

SymbolFrame draw_symbol_frame(std::size_t user, const ExpanderSpec& e, SymbolSource source, Rng& rng) {
  SymbolFrame frame{user, CVec(e.symbols())};
  const double amp = std::sqrt(static_cast<double>(e.l));
  const double qpsk = amp / std::sqrt(2.0);
  for (auto& s : frame.symbols) {
    if (source == SymbolSource::Qpsk) {
      const auto b = rng.bits();
      s = {(b & 1u) ? qpsk : -qpsk, (b & 2u) ? qpsk : -qpsk};
    } else {
      s = amp * rng.complex_gaussian(1.0);
    }
  }
  return frame;
}

std::vector<CVec> ul_channel_output(const ChannelGrid& channels, std::span<const SymbolFrame> frames,
                                    const ExpanderSpec& e, double noise_var, Rng& rng) {
  check_frames(channels, frames, e);
  const auto spectra = symbol_spectra(frames, e);
  std::vector<CVec> received(channels.antennas(), CVec(e.n));
  for (std::size_t ant = 0; ant < channels.antennas(); ++ant) {
    CVec& y = received[ant];
    for (std::size_t user = 0; user < frames.size(); ++user) {
      const auto& h = channels.at(user, ant).freq();
      const auto& s = spectra[user];
      for (std::size_t f = 0; f < e.n; ++f) y[f] += h[f] * s[f];
    }
    fft::inverse(y, y);
    if (noise_var > 0.0) rng.add_noise(y, noise_var);
  }
  return received;
}

CVec ul_mf_detect(std::span<const CVec> received, const ChannelGrid& estimates, std::size_t user,
                  const ExpanderSpec& e) {
  require(received.size() == estimates.antennas(), ErrorCode::MissingEstimate,
          "estimates must cover every receive antenna");
  const auto spectra = antenna_spectra(received, e.n);
  return mf_from_spectra(spectra, estimates, user, e);
}

std::vector<CVec> ul_mf_detect_all(std::span<const CVec> received, const ChannelGrid& estimates,
                                   const ExpanderSpec& e) {
  require(received.size() == estimates.antennas(), ErrorCode::MissingEstimate,
          "estimates must cover every receive antenna");
  const auto spectra = antenna_spectra(received, e.n);
  std::vector<CVec> out;
  out.reserve(estimates.users());
  for (std::size_t user = 0; user < estimates.users(); ++user)
    out.push_back(mf_from_spectra(spectra, estimates, user, e));
  return out;
}

std::vector<CVec> dl_precode_transmit(const ChannelGrid& estimates, std::span<const SymbolFrame> frames,
                                      const ExpanderSpec& e) {
  check_frames(estimates, frames, e);
  const auto spectra = symbol_spectra(frames, e);
  const double split = 1.0 / std::sqrt(static_cast<double>(estimates.antennas()));
  std::vector<CVec> transmit(estimates.antennas(), CVec(e.n));
  for (std::size_t ant = 0; ant < estimates.antennas(); ++ant) {
    CVec& x = transmit[ant];
    for (std::size_t user = 0; user < frames.size(); ++user) {
      const auto& h = estimates.at(user, ant).freq();
      const auto& s = spectra[user];
      for (std::size_t f = 0; f < e.n; ++f) x[f] += std::conj(h[f]) * s[f];
    }
    for (auto& v : x) v *= split;
    fft::inverse(x, x);
  }
  return transmit;
}

double dl_receiver_gain(const ChannelGrid& estimates, std::size_t user) {
  const auto ops = estimates.user(user);
  double sum = 0.0;
  for (const auto& op : ops) sum += op.energy();
  return sum / static_cast<double>(ops.size());
}

CVec dl_receive_detect(const ChannelGrid& truth, std::size_t user, std::span<const CVec> transmit,
                       double noise_var, double gain, Rng& rng, const ExpanderSpec& e) {
  require(truth.size() == e.n, ErrorCode::DimensionMismatch, "channel size differs from frame length");
  const auto spectra = antenna_spectra(transmit, e.n);
  return dl_from_spectra(truth, user, spectra, noise_var, gain, rng, e);
}

std::vector<CVec> dl_receive_detect_all(const ChannelGrid& truth, std::span<const CVec> transmit,
                                        double noise_var, std::span<const double> gains,
                                        std::span<Rng> rngs, const ExpanderSpec& e) {
  require(truth.size() == e.n, ErrorCode::DimensionMismatch, "channel size differs from frame length");
  require(gains.size() == truth.users() && rngs.size() == truth.users(), ErrorCode::DimensionMismatch,
          "need one gain and one noise stream per user");
  const auto spectra = antenna_spectra(transmit, e.n);
  std::vector<CVec> out;
  out.reserve(truth.users());
  for (std::size_t user = 0; user < truth.users(); ++user)
    out.push_back(dl_from_spectra(truth, user, spectra, noise_var, gains[user], rngs[user], e));
  return out;
}

}  // namespace cpdsss
