#pragma once

#include "cpdsss/types.hpp"

// DFT convention used everywhere: forward kernel exp(-j 2 pi k f / n), no
// scaling; inverse kernel exp(+j 2 pi k f / n) scaled by 1/n.
namespace cpdsss::fft {

/// `out` may alias `in` (in-place) but must otherwise not overlap it.
void forward(CSpan in, MutCSpan out);
void inverse(CSpan in, MutCSpan out);

CVec forward(CSpan in);
CVec inverse(CSpan in);

}  // namespace cpdsss::fft
