#include "wedgefill/projector.hpp"

#include <algorithm>
#include <cmath>

namespace wedgefill {

namespace {

struct RayBasis {
    double dx, dy;  // ray direction
    double nx, ny;  // detector axis (perpendicular)
};

RayBasis basis(double theta_rad) {
    const double c = std::cos(theta_rad), s = std::sin(theta_rad);
    return {c, s, -s, c};
}

void check_extent(const Image& u, const ProjectionGeometry& g) {
    const double diagonal = std::hypot(u.width, u.height) * u.pixel_size;
    const double extent = g.detector_count * g.detector_spacing;
    if (extent + 1e-9 < diagonal)
        throw ConfigError("projector: detector extent " + std::to_string(extent) +
                          " does not cover image diagonal " + std::to_string(diagonal));
}

// Joseph traversal: visits the interpolation taps of one ray and hands
// (row, col, weight) triples to `f`. The same traversal drives both the
// forward map and its transpose, which keeps the pair exactly matched.
template <typename F>
void traverse(int width, int height, double px, const RayBasis& rb, double offset, F&& f) {
    const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
    if (std::fabs(rb.dx) >= std::fabs(rb.dy)) {
        const double scale = px / std::fabs(rb.dx);
        for (int c = 0; c < width; ++c) {
            const double x = (c - cx) * px;
            const double t = (x - offset * rb.nx) / rb.dx;
            const double y = offset * rb.ny + t * rb.dy;
            const double rf = y / px + cy;
            const int r0 = static_cast<int>(std::floor(rf));
            const double w = rf - r0;
            if (r0 >= 0 && r0 < height) f(r0, c, (1.0 - w) * scale);
            if (r0 + 1 >= 0 && r0 + 1 < height) f(r0 + 1, c, w * scale);
        }
    } else {
        const double scale = px / std::fabs(rb.dy);
        for (int r = 0; r < height; ++r) {
            const double y = (r - cy) * px;
            const double t = (y - offset * rb.ny) / rb.dy;
            const double x = offset * rb.nx + t * rb.dx;
            const double cf = x / px + cx;
            const int c0 = static_cast<int>(std::floor(cf));
            const double w = cf - c0;
            if (c0 >= 0 && c0 < width) f(r, c0, (1.0 - w) * scale);
            if (c0 + 1 >= 0 && c0 + 1 < width) f(r, c0 + 1, w * scale);
        }
    }
}

}  // namespace

Sinogram forward_project(const Image& u, const ProjectionGeometry& g) {
    u.validate();
    g.validate();
    check_extent(u, g);
    Sinogram s(g);
    for (int a = 0; a < g.angle_count(); ++a) {
        const RayBasis rb = basis(g.angle_rad(a));
        for (int k = 0; k < g.detector_count; ++k) {
            double acc = 0.0;
            traverse(u.width, u.height, u.pixel_size, rb, g.bin_offset(k),
                     [&](int r, int c, double w) { acc += w * u.values(r, c); });
            s.values(a, k) = acc;
        }
    }
    return s;
}

Image back_project(const Sinogram& s, int width, int height, double pixel_size) {
    s.validate();
    const ProjectionGeometry& g = s.geometry;
    Image u(width, height, pixel_size);
    for (int a = 0; a < g.angle_count(); ++a) {
        const RayBasis rb = basis(g.angle_rad(a));
        for (int k = 0; k < g.detector_count; ++k) {
            const double val = s.values(a, k);
            if (val == 0.0) continue;
            traverse(width, height, pixel_size, rb, g.bin_offset(k),
                     [&](int r, int c, double w) { u.values(r, c) += w * val; });
        }
    }
    return u;
}

SampleMask make_limited_angle_mask(const ProjectionGeometry& g, const std::vector<int>& kept_angle_indices) {
    g.validate();
    if (kept_angle_indices.empty()) throw ConfigError("mask: kept angle subset is empty");
    SampleMask m(g);
    for (int idx : kept_angle_indices) {
        if (idx < 0 || idx >= g.angle_count()) throw ConfigError("mask: kept angle index out of range");
        for (int k = 0; k < g.detector_count; ++k) m.flags(idx, k) = 1.0;
    }
    return m;
}

SampleMask make_wedge_mask(const ProjectionGeometry& g, int first, int count) {
    std::vector<int> kept(count);
    for (int i = 0; i < count; ++i) kept[i] = first + i;
    return make_limited_angle_mask(g, kept);
}

SampleMask full_mask(const ProjectionGeometry& g) {
    SampleMask m(g);
    m.flags.fill(1.0);
    return m;
}

Sinogram apply_mask(const SampleMask& m, const Sinogram& s) {
    if (!m.flags.same_shape(s.values)) throw ConfigError("apply_mask: shape mismatch");
    Sinogram out = s;
    for (size_t i = 0; i < out.values.v.size(); ++i) out.values.v[i] *= m.flags.v[i];
    return out;
}

}  // namespace wedgefill
