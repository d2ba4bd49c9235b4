#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cpdsss/circulant.hpp"
#include "cpdsss/linkops.hpp"

namespace cpdsss {

enum class CsiMode { Perfect, Estimated };
enum class Direction { Uplink, Downlink };

const char* to_string(CsiMode mode) noexcept;
const char* to_string(Direction dir) noexcept;

struct SinrEstimate {
  std::size_t user = 0;
  /// Linear SINR; +infinity when the detector is error-free.
  double rho = 0.0;
  std::size_t sample_count = 0;
  double std_error = 0.0;
};

struct CapacityRecord {
  std::size_t scenario = 0;
  double snr_db = 0.0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t l = 1;
  Direction direction = Direction::Uplink;
  CsiMode csi_mode = CsiMode::Perfect;
  std::size_t user = 0;
  std::size_t trial = 0;
  double sinr = 0.0;
  /// Bits per channel use (per payload sample).
  double per_user_capacity = 0.0;
  double ideal_capacity = 0.0;
};

/// rho = 1 / mean |s_hat - s|^2 / l over every symbol of every result, i.e.
/// the error of unit-power symbols once the sqrt(l) scale is removed.
/// Throws EmptyStream when there are no symbols.
SinrEstimate measure_sinr(std::span<const DetectionResult> results, std::size_t l);

/// (1/l) log2(1 + rho) bits per payload sample.
double per_user_capacity(double rho, std::size_t l);

/// N / (N + N_cp), for callers that want CP overhead in the rate.
double cp_overhead_factor(std::size_t n, std::size_t n_cp);

/// How per-antenna operators stack in the ideal-capacity model:
///  - Receive: H = [H^(1); ...; H^(M)], one common precoder (uplink).
///  - Transmit: H = [H^(1) ... H^(M)], G = [G^(1); ...; G^(M)] (downlink).
enum class Stacking { Receive, Transmit };

/// Spectrum of the n x n Gram circulant (HG)^H (HG) for the stacked model.
/// Empty `precoders` means G = I.
std::vector<double> gram_spectrum(std::span<const CirculantOperator> channels,
                                  std::span<const CirculantOperator> precoders, Stacking stacking);

/// (1/n) log2 det(I + l snr H G E_L E_L^H G^H H^H), exact for every l via the
/// aliased spectrum of E_L^H (HG)^H HG E_L.
double ideal_capacity(std::span<const CirculantOperator> channels,
                      std::span<const CirculantOperator> precoders, Stacking stacking, std::size_t l,
                      double snr);

/// Stacked TR precoder for one user: G^(m) = alpha H_hat^(m)H with alpha
/// chosen so sum_m tr(G^(m)H G^(m)) = n.
std::vector<CirculantOperator> tr_precoder(std::span<const CirculantOperator> estimates);

}  // namespace cpdsss
