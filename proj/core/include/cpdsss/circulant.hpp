#pragma once

#include <cstddef>

#include "cpdsss/types.hpp"

namespace cpdsss {

/// An n x n circulant matrix. Column i is the first column cyclically shifted
/// down by i samples. Only the nonzero support of the first column is kept
/// (`taps`); `freq` is its n-point DFT and is what all arithmetic uses.
class CirculantOperator {
 public:
  CirculantOperator() = default;

  /// Circulant built from an impulse response zero-padded to n.
  /// Throws ImpulseTooLong when h.size() > n.
  static CirculantOperator from_impulse(CSpan h, std::size_t n);
  /// Circulant with the given DFT diagonal. `taps` becomes the full first
  /// column.
  static CirculantOperator from_spectrum(CVec freq);
  static CirculantOperator identity(std::size_t n);

  std::size_t size() const noexcept { return freq_.size(); }
  const CVec& freq() const noexcept { return freq_; }
  const CVec& taps() const noexcept { return taps_; }
  /// Zero-padded first column, length n.
  CVec first_col() const;
  /// Squared norm of the first column (the diagonal of C^H C).
  double energy() const noexcept { return energy_; }

  CVec apply(CSpan x) const;
  CVec apply_hermitian(CSpan x) const;

  /// C^H as a circulant.
  CirculantOperator adjoint() const;
  CirculantOperator scaled(double alpha) const;

 private:
  CirculantOperator(CVec taps, CVec freq);

  CVec taps_;
  CVec freq_;
  double energy_ = 0.0;
};

/// a * b. Circulants commute so the order does not matter.
CirculantOperator compose(const CirculantOperator& a, const CirculantOperator& b);

inline CirculantOperator from_impulse(CSpan h, std::size_t n) {
  return CirculantOperator::from_impulse(h, n);
}
inline CVec apply(const CirculantOperator& c, CSpan x) { return c.apply(x); }
inline CVec apply_hermitian(const CirculantOperator& c, CSpan x) { return c.apply_hermitian(x); }

/// Symbol-rate reduction: the n x n/l selection matrix E_L, never materialized.
struct ExpanderSpec {
  std::size_t n = 0;
  std::size_t l = 1;

  /// Throws InvalidLength unless l >= 1 and l divides n.
  ExpanderSpec(std::size_t n, std::size_t l);

  std::size_t symbols() const noexcept { return n / l; }
};

/// E_L s: s[i] lands at index i*l, zeros elsewhere.
CVec expand(const ExpanderSpec& e, CSpan s);
/// E_L^H y: reads y at indices i*l.
CVec compress(const ExpanderSpec& e, CSpan y);

}  // namespace cpdsss
