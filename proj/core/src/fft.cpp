#include "cpdsss/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "cpdsss/error.hpp"

namespace cpdsss::fft {
namespace {

// FFTW's planner is not thread-safe but executing an existing plan on new
// arrays is, so plans are created once under a lock and then shared.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign, bool in_place) {
    const Key key{n, sign, in_place};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    CVec a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = in_place ? in : reinterpret_cast<fftw_complex*>(b.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::tuple<std::size_t, int, bool>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(CSpan in, MutCSpan out, int sign) {
  if (in.size() != out.size())
    throw Error(ErrorCode::LengthMismatch, "fft input and output sizes differ");
  const std::size_t n = in.size();
  if (n == 0) return;
  const bool in_place = in.data() == out.data();
  fftw_plan plan = cache().get(n, sign, in_place);
  // Out-of-place complex DFTs preserve their input, so the cast is safe.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void forward(CSpan in, MutCSpan out) { run(in, out, FFTW_FORWARD); }

void inverse(CSpan in, MutCSpan out) {
  run(in, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
}

CVec forward(CSpan in) {
  CVec out(in.size());
  forward(in, out);
  return out;
}

CVec inverse(CSpan in) {
  CVec out(in.size());
  inverse(in, out);
  return out;
}

}  // namespace cpdsss::fft
