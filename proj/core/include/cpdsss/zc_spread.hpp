#pragma once

#include <cstddef>
#include <cstdint>

#include "cpdsss/types.hpp"

namespace cpdsss {

/// Zadoff-Chu sequence scaled to unit total power (z^H z = 1).
struct ZcSequence {
  std::size_t n = 0;
  std::int64_t u = 1;
  CVec samples;
};

/// z[k] = exp(-j pi u k^2 / n) / sqrt(n) for even n,
/// z[k] = exp(-j pi u k (k+1) / n) / sqrt(n) for odd n.
/// Throws InvalidLength for n < 2 and InvalidRoot when gcd(u, n) != 1.
ZcSequence generate_zc(std::size_t n, std::int64_t u = 1);

/// Cyclic shift by `shift` samples: out[k] = z[(k - shift) mod n].
CVec cyclic_shift(CSpan z, std::size_t shift);

/// The circulant spreading matrix Z whose column i is z cyclically shifted by
/// i, held as its DFT diagonal. Z is unitary, so despreading applies conj().
class SpreadingOperator {
 public:
  explicit SpreadingOperator(const ZcSequence& z);

  std::size_t size() const noexcept { return lambda_.size(); }
  const CVec& diagonal() const noexcept { return lambda_; }

  /// Z s
  CVec spread(CSpan s) const;
  /// Z^H y
  CVec despread(CSpan y) const;

 private:
  CVec lambda_;
};

inline SpreadingOperator spreading_operator(const ZcSequence& z) { return SpreadingOperator(z); }

}  // namespace cpdsss
