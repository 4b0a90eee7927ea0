#pragma once

#include <cstdint>
#include <vector>

#include "wedgefill/types.hpp"

namespace wedgefill {

/// Piecewise-constant radially symmetric phantom. Disks of the given
/// radii (strictly decreasing) are painted in order, so alternating
/// intensities produce concentric rings. Background is 0.
Image concentric_rings(int width, int height, const std::vector<double>& radii,
                       const std::vector<double>& intensities);

/// Standard 10-ellipse modified Shepp-Logan phantom (Toft intensity
/// table), values in [0,1] with max 1.
Image shepp_logan_modified(int width, int height);

/// Convex faceted-particle phantom standing in for the experimental
/// STEM crystal: a homogeneous bipyramid-like polygon with one rounded
/// corner on a zero background.
Image faceted_particle(int width, int height);

/// Adds i.i.d. zero-mean Gaussian noise with sigma = level_fraction *
/// max(s). Counter-based generator: deterministic per seed and
/// independent of platform and call order.
Sinogram add_gaussian_noise(const Sinogram& s, double level_fraction, uint64_t seed);

/// Single platform-independent N(0,1) sample addressed by (seed, counter).
double gaussian_sample(uint64_t seed, uint64_t counter);

/// Stripe pair for the DTV line-continuation experiments:
/// clean stripe (two gray levels), a noisy copy, an inpainting hole
/// whose horizontal extent exceeds the vertical separation of the
/// stripe edges, and the indicator c1 field (0 on the stripe band).
struct StripePhantom {
    Image clean;
    Image noisy;
    Array2 hole;  // 1 = missing
    Array2 c1;    // indicator weight for the across-edge direction
    double e1x, e1y;  // across-edge unit direction
    double gap_width;        // horizontal extent of the hole
    double edge_separation;  // vertical separation of the stripe edges
};

StripePhantom stripe_phantom_pair();

}  // namespace wedgefill
