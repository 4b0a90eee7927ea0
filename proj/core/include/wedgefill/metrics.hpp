#pragma once

#include "wedgefill/array2.hpp"

namespace wedgefill {

/// PSNR in dB with peak = max(ref); +inf for identical inputs.
double psnr(const Array2& x, const Array2& ref);

/// Mean SSIM with K1 = 0.01, K2 = 0.03, 8x8 Gaussian window (sigma 1.5),
/// dynamic range = max(ref) - min(ref).
double ssim(const Array2& x, const Array2& ref);

}  // namespace wedgefill
