#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cpdsss {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

using CSpan = std::span<const cplx>;
using MutCSpan = std::span<cplx>;

}  // namespace cpdsss
