#include "cpdsss/circulant.hpp"

#include <algorithm>
#include <numeric>

#include "cpdsss/error.hpp"
#include "cpdsss/fft.hpp"

namespace cpdsss {
namespace {

double squared_norm(CSpan v) {
  return std::accumulate(v.begin(), v.end(), 0.0,
                         [](double acc, cplx x) { return acc + std::norm(x); });
}

CVec multiply_in_freq(const CVec& freq, CSpan x, bool conjugate) {
  if (x.size() != freq.size())
    throw Error(ErrorCode::LengthMismatch, "circulant operand length");
  CVec f = fft::forward(x);
  if (conjugate) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= std::conj(freq[i]);
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= freq[i];
  }
  fft::inverse(f, f);
  return f;
}

}  // namespace

CirculantOperator::CirculantOperator(CVec taps, CVec freq)
    : taps_(std::move(taps)), freq_(std::move(freq)), energy_(squared_norm(taps_)) {}

CirculantOperator CirculantOperator::from_impulse(CSpan h, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidLength, "circulant dimension must be positive");
  if (h.size() > n) throw Error(ErrorCode::ImpulseTooLong, "impulse has more taps than the frame");
  CVec padded(n);
  std::copy(h.begin(), h.end(), padded.begin());
  CVec freq = fft::forward(padded);
  return CirculantOperator(CVec(h.begin(), h.end()), std::move(freq));
}

CirculantOperator CirculantOperator::from_spectrum(CVec freq) {
  if (freq.empty()) throw Error(ErrorCode::InvalidLength, "circulant dimension must be positive");
  CVec col = fft::inverse(freq);
  return CirculantOperator(std::move(col), std::move(freq));
}

CirculantOperator CirculantOperator::identity(std::size_t n) {
  const cplx one{1.0, 0.0};
  return from_impulse(CSpan(&one, 1), n);
}

CVec CirculantOperator::first_col() const {
  CVec col(size());
  std::copy(taps_.begin(), taps_.end(), col.begin());
  return col;
}

CVec CirculantOperator::apply(CSpan x) const { return multiply_in_freq(freq_, x, false); }

CVec CirculantOperator::apply_hermitian(CSpan x) const { return multiply_in_freq(freq_, x, true); }

CirculantOperator CirculantOperator::adjoint() const {
  // First column of C^H is conj(c[-i mod n]).
  const std::size_t n = size();
  CVec col(n);
  for (std::size_t i = 0; i < taps_.size(); ++i) col[(n - i) % n] = std::conj(taps_[i]);
  CVec freq(n);
  std::transform(freq_.begin(), freq_.end(), freq.begin(), [](cplx v) { return std::conj(v); });
  return CirculantOperator(std::move(col), std::move(freq));
}

CirculantOperator CirculantOperator::scaled(double alpha) const {
  CVec taps = taps_;
  CVec freq = freq_;
  for (auto& v : taps) v *= alpha;
  for (auto& v : freq) v *= alpha;
  return CirculantOperator(std::move(taps), std::move(freq));
}

CirculantOperator compose(const CirculantOperator& a, const CirculantOperator& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "composed circulants differ in size");
  CVec freq(a.size());
  for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = a.freq()[i] * b.freq()[i];
  return CirculantOperator::from_spectrum(std::move(freq));
}

ExpanderSpec::ExpanderSpec(std::size_t n_, std::size_t l_) : n(n_), l(l_) {
  if (l == 0 || n == 0 || n % l != 0)
    throw Error(ErrorCode::InvalidLength, "reduction factor must divide the frame length");
}

CVec expand(const ExpanderSpec& e, CSpan s) {
  if (s.size() != e.symbols()) throw Error(ErrorCode::LengthMismatch, "expand input length");
  CVec out(e.n);
  for (std::size_t i = 0; i < s.size(); ++i) out[i * e.l] = s[i];
  return out;
}

CVec compress(const ExpanderSpec& e, CSpan y) {
  if (y.size() != e.n) throw Error(ErrorCode::LengthMismatch, "compress input length");
  CVec out(e.symbols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i * e.l];
  return out;
}

}  // namespace cpdsss
