#include "cpdsss/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cpdsss/error.hpp"

namespace cpdsss {

const char* to_string(CsiMode mode) noexcept {
  return mode == CsiMode::Perfect ? "perfect" : "estimated";
}

const char* to_string(Direction dir) noexcept { return dir == Direction::Uplink ? "ul" : "dl"; }

SinrEstimate measure_sinr(std::span<const DetectionResult> results, std::size_t l) {
  if (l < 1) throw Error(ErrorCode::InvalidConfig, "reduction factor must be at least 1");
  const double inv_l = 1.0 / static_cast<double>(l);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& r : results) {
    if (r.estimated.size() != r.transmitted.size())
      throw Error(ErrorCode::LengthMismatch, "estimated and transmitted symbol counts differ");
    for (std::size_t i = 0; i < r.estimated.size(); ++i) {
      const double err = std::norm(r.estimated[i] - r.transmitted[i]) * inv_l;
      sum += err;
      sum_sq += err * err;
    }
    count += r.estimated.size();
  }
  if (count == 0) throw Error(ErrorCode::EmptyStream, "no symbols to measure");

  SinrEstimate out;
  out.user = results.front().user;
  out.sample_count = count;
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  if (mean == 0.0) {
    out.rho = std::numeric_limits<double>::infinity();
    return out;
  }
  out.rho = 1.0 / mean;
  if (count > 1) {
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    // Delta method: d(1/x) = dx / x^2.
    out.std_error = std::sqrt(var / n) / (mean * mean);
  }
  return out;
}

double per_user_capacity(double rho, std::size_t l) {
  if (l < 1) throw Error(ErrorCode::InvalidConfig, "reduction factor must be at least 1");
  if (std::isinf(rho)) return rho;
  return std::log1p(rho) / std::numbers::ln2 / static_cast<double>(l);
}

double cp_overhead_factor(std::size_t n, std::size_t n_cp) {
  return static_cast<double>(n) / static_cast<double>(n + n_cp);
}

std::vector<double> gram_spectrum(std::span<const CirculantOperator> channels,
                                  std::span<const CirculantOperator> precoders, Stacking stacking) {
  if (channels.empty()) throw Error(ErrorCode::DimensionMismatch, "no channel operators");
  const std::size_t n = channels.front().size();
  for (const auto& c : channels)
    if (c.size() != n) throw Error(ErrorCode::DimensionMismatch, "channel operators differ in size");
  for (const auto& g : precoders)
    if (g.size() != n) throw Error(ErrorCode::DimensionMismatch, "precoder size differs from channel");

  std::vector<double> gamma(n, 0.0);
  if (stacking == Stacking::Receive) {
    // (HG)^H HG = G^H (sum_m H_m^H H_m) G with one common G.
    if (precoders.size() > 1)
      throw Error(ErrorCode::DimensionMismatch, "receive stacking takes at most one precoder");
    for (const auto& c : channels)
      for (std::size_t f = 0; f < n; ++f) gamma[f] += std::norm(c.freq()[f]);
    if (!precoders.empty())
      for (std::size_t f = 0; f < n; ++f) gamma[f] *= std::norm(precoders.front().freq()[f]);
    return gamma;
  }

  // HG = sum_m H_m G_m. Without precoders every antenna sends s / sqrt(M).
  if (!precoders.empty() && precoders.size() != channels.size())
    throw Error(ErrorCode::DimensionMismatch, "need one precoder per antenna");
  const double equal_split = 1.0 / std::sqrt(static_cast<double>(channels.size()));
  for (std::size_t f = 0; f < n; ++f) {
    cplx acc{};
    for (std::size_t ant = 0; ant < channels.size(); ++ant) {
      const cplx g = precoders.empty() ? cplx(equal_split) : precoders[ant].freq()[f];
      acc += channels[ant].freq()[f] * g;
    }
    gamma[f] = std::norm(acc);
  }
  return gamma;
}

double ideal_capacity(std::span<const CirculantOperator> channels,
                      std::span<const CirculantOperator> precoders, Stacking stacking, std::size_t l,
                      double snr) {
  const auto gamma = gram_spectrum(channels, precoders, stacking);
  const std::size_t n = gamma.size();
  if (l < 1 || n % l != 0) throw Error(ErrorCode::DimensionMismatch, "reduction factor must divide n");
  // E_L^H C E_L keeps every l-th row and column of the circulant C: an n/l
  // circulant whose spectrum is the l-fold alias of C's.
  const std::size_t bins = n / l;
  const double ld = static_cast<double>(l);
  double total = 0.0;
  for (std::size_t q = 0; q < bins; ++q) {
    double mu = 0.0;
    for (std::size_t r = 0; r < l; ++r) mu += gamma[q + r * bins];
    mu /= ld;
    total += std::log1p(ld * snr * mu);
  }
  return total / std::numbers::ln2 / static_cast<double>(n);
}

std::vector<CirculantOperator> tr_precoder(std::span<const CirculantOperator> estimates) {
  if (estimates.empty()) throw Error(ErrorCode::MissingEstimate, "no channel estimates for precoder");
  double energy = 0.0;
  for (const auto& h : estimates) energy += h.energy();
  if (!(energy > 0.0)) throw Error(ErrorCode::MissingEstimate, "channel estimates have zero energy");
  const double alpha = 1.0 / std::sqrt(energy);
  std::vector<CirculantOperator> g;
  g.reserve(estimates.size());
  for (const auto& h : estimates) g.push_back(h.adjoint().scaled(alpha));
  return g;
}

}  // namespace cpdsss
