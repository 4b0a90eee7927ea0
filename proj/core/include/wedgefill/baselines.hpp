#pragma once

#include <vector>

#include "wedgefill/pdhg.hpp"
#include "wedgefill/types.hpp"

namespace wedgefill {

/// Ramp-filtered backprojection over the acquired angles only. Ram-Lak
/// filter with optional Hann apodization, cutoff at Nyquist.
Image fbp(const Sinogram& b, const SampleMask& mask, int width, int height, double pixel_size = 1.0,
          bool hann = true);

/// Preconditioned Landweber iteration u <- u + C R^T W (b - S R u) with
/// inverse row/column-sum diagonal preconditioners.
Image sirt(const Sinogram& b, const SampleMask& mask, int width, int height, int iters,
           std::vector<double>* residual_trace = nullptr, double pixel_size = 1.0);

struct TvReconOptions {
    int iters = 500;
    double tol = 1e-7;
    double pixel_size = 1.0;
    std::vector<double>* objective_trace = nullptr;
};

/// argmin_{u >= 0} 1/2 ||S R u - b||^2 + lambda TV(u) via PDHG.
Image tv_reconstruct(const Sinogram& b, const SampleMask& mask, int width, int height, double lambda,
                     const TvReconOptions& opt = {});

}  // namespace wedgefill
