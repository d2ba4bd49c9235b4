#include "cpdsss/zc_spread.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cpdsss/error.hpp"
#include "cpdsss/fft.hpp"

namespace cpdsss {

ZcSequence generate_zc(std::size_t n, std::int64_t u) {
  if (n < 2) throw Error(ErrorCode::InvalidLength, "ZC length must be at least 2");
  const auto nn = static_cast<std::int64_t>(n);
  if (std::gcd(u, nn) != 1)
    throw Error(ErrorCode::InvalidRoot, "ZC root must be coprime with the length");

  // Reduce the phase numerator modulo 2n before converting to double so the
  // argument stays small for long sequences.
  const std::int64_t two_n = 2 * nn;
  const std::int64_t ur = ((u % two_n) + two_n) % two_n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  ZcSequence z{n, u, CVec(n)};
  for (std::int64_t k = 0; k < nn; ++k) {
    const std::int64_t q = (n % 2 == 0) ? (k * k) % two_n : (k * (k + 1)) % two_n;
    const std::int64_t num = (ur * q) % two_n;
    const double phase = -std::numbers::pi * static_cast<double>(num) / static_cast<double>(nn);
    z.samples[static_cast<std::size_t>(k)] = std::polar(scale, phase);
  }
  return z;
}

CVec cyclic_shift(CSpan z, std::size_t shift) {
  const std::size_t n = z.size();
  CVec out(n);
  if (n == 0) return out;
  shift %= n;
  for (std::size_t k = 0; k < n; ++k) out[(k + shift) % n] = z[k];
  return out;
}

SpreadingOperator::SpreadingOperator(const ZcSequence& z) : lambda_(fft::forward(z.samples)) {}

CVec SpreadingOperator::spread(CSpan s) const {
  if (s.size() != size()) throw Error(ErrorCode::LengthMismatch, "spread input length");
  CVec f = fft::forward(s);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= lambda_[i];
  fft::inverse(f, f);
  return f;
}

CVec SpreadingOperator::despread(CSpan y) const {
  if (y.size() != size()) throw Error(ErrorCode::LengthMismatch, "despread input length");
  CVec f = fft::forward(y);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= std::conj(lambda_[i]);
  fft::inverse(f, f);
  return f;
}

}  // namespace cpdsss
