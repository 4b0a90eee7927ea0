#pragma once

#include <vector>

#include "wedgefill/types.hpp"

namespace wedgefill {

/// Parallel-beam X-ray transform, Joseph-style interpolating line
/// integrals. Rays are parameterized by view angle and signed detector
/// offset from the image center; rotation is about the image center.
Sinogram forward_project(const Image& u, const ProjectionGeometry& g);

/// Exact discrete adjoint of forward_project (matched pair):
/// <forward_project(u), s> == <u, back_project(s)>.
Image back_project(const Sinogram& s, int width, int height, double pixel_size = 1.0);

/// Mask with rows of the kept angle indices set, everything else unset.
SampleMask make_limited_angle_mask(const ProjectionGeometry& g, const std::vector<int>& kept_angle_indices);

/// Convenience: keep a contiguous angle range [first, first+count).
SampleMask make_wedge_mask(const ProjectionGeometry& g, int first, int count);

SampleMask full_mask(const ProjectionGeometry& g);

/// Zero out entries outside the acquired region. Idempotent.
Sinogram apply_mask(const SampleMask& m, const Sinogram& s);

}  // namespace wedgefill
