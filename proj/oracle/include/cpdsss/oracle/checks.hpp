#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cpdsss::oracle {

struct CheckResult {
  std::string name;
  double error = 0.0;      // worst observed error for the check
  double tolerance = 0.0;
  bool passed() const { return error <= tolerance; }
};

/// Frequency-domain operations and the noiseless UL/DL chains against dense
/// matrix products at dimension n (K = 2 users, M = 2 antennas, L in {1, 2}).
std::vector<CheckResult> fft_oracle_checks(std::size_t n, double tolerance, std::uint64_t seed = 1);

/// Constant modulus and cyclic-shift orthogonality of a ZC sequence. With
/// `random_pairs` = 0 the full Gram matrix of all n shifts is formed.
std::vector<CheckResult> zc_checks(std::size_t n, std::int64_t root, std::size_t random_pairs,
                                   std::uint64_t seed = 1);

/// Fast ideal capacity against the dense log-det for both stackings.
std::vector<CheckResult> ideal_capacity_checks(std::size_t n, std::size_t m, std::size_t l, double snr,
                                               double tolerance, std::uint64_t seed = 1);

/// Everything above at small sizes; what `cpdsss validate` runs.
std::vector<CheckResult> validation_suite();

}  // namespace cpdsss::oracle
