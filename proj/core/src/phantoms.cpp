#include "wedgefill/phantoms.hpp"

#include <cmath>

namespace wedgefill {

Image concentric_rings(int width, int height, const std::vector<double>& radii,
                       const std::vector<double>& intensities) {
    if (radii.size() != intensities.size()) throw ConfigError("rings: radii/intensity lists differ in length");
    const double half = 0.5 * std::min(width, height);
    for (size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] <= 0.0) throw ConfigError("rings: radii must be positive");
        if (radii[i] > half) throw ConfigError("rings: radius exceeds grid half-extent");
        if (i > 0 && radii[i] >= radii[i - 1]) throw ConfigError("rings: radii must be strictly decreasing");
    }
    Image u(width, height);
    const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const double rad = std::hypot(c - cx, r - cy);
            for (size_t i = 0; i < radii.size(); ++i)
                if (rad <= radii[i]) u.values(r, c) = intensities[i];
        }
    return u;
}

namespace {

struct Ellipse {
    double a, b, x0, y0, phi_deg, value;
};

// Toft's modified Shepp-Logan table.
constexpr Ellipse kSheppLogan[] = {
    {0.69, 0.92, 0.0, 0.0, 0.0, 1.0},
    {0.6624, 0.8740, 0.0, -0.0184, 0.0, -0.8},
    {0.11, 0.31, 0.22, 0.0, -18.0, -0.2},
    {0.16, 0.41, -0.22, 0.0, 18.0, -0.2},
    {0.21, 0.25, 0.0, 0.35, 0.0, 0.1},
    {0.046, 0.046, 0.0, 0.1, 0.0, 0.1},
    {0.046, 0.046, 0.0, -0.1, 0.0, 0.1},
    {0.046, 0.023, -0.08, -0.605, 0.0, 0.1},
    {0.023, 0.023, 0.0, -0.606, 0.0, 0.1},
    {0.023, 0.046, 0.06, -0.605, 0.0, 0.1},
};

bool inside(const Ellipse& e, double x, double y) {
    const double phi = e.phi_deg * M_PI / 180.0;
    const double c = std::cos(phi), s = std::sin(phi);
    const double dx = x - e.x0, dy = y - e.y0;
    const double xr = c * dx + s * dy, yr = -s * dx + c * dy;
    return (xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Image shepp_logan_modified(int width, int height) {
    if (width < 16 || height < 16) throw ConfigError("shepp_logan: size must be >= 16");
    Image u(width, height);
    const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
    const double sx = 2.0 / width, sy = 2.0 / height;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const double x = (c - cx) * sx;
            const double y = (cy - r) * sy;  // image row 0 is the top
            double val = 0.0;
            for (const Ellipse& e : kSheppLogan)
                if (inside(e, x, y)) val += e.value;
            u.values(r, c) = std::max(val, 0.0);  // intensity sums cancel to -1ulp inside the skull
        }
    return u;
}

Image faceted_particle(int width, int height) {
    Image u(width, height);
    const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
    const double R = 0.36 * std::min(width, height);
    // Irregular hexagon with flat facets; the leftmost corner rounded.
    const int nfacets = 6;
    const double facet_r[nfacets] = {1.0, 0.85, 0.95, 0.8, 1.05, 0.9};
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const double x = c - cx, y = r - cy;
            bool in = true;
            for (int f = 0; f < nfacets && in; ++f) {
                const double ang = (2.0 * M_PI * f) / nfacets + 0.4;
                const double nx = std::cos(ang), ny = std::sin(ang);
                if (x * nx + y * ny > R * facet_r[f]) in = false;
            }
            // Rounded left corner: clip by a disk on the -x side.
            if (in && x < -0.55 * R && std::hypot(x + 0.55 * R, y) > 0.75 * R) in = false;
            u.values(r, c) = in ? 1.0 : 0.0;
        }
    return u;
}

double gaussian_sample(uint64_t seed, uint64_t counter) {
    // Box-Muller from two counter-derived uniforms.
    const uint64_t h1 = splitmix64(seed ^ splitmix64(counter));
    const uint64_t h2 = splitmix64(h1 ^ 0xda3e39cb94b95bdbULL);
    const double u1 = (static_cast<double>(h1 >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(h2 >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Sinogram add_gaussian_noise(const Sinogram& s, double level_fraction, uint64_t seed) {
    if (level_fraction < 0.0) throw ConfigError("noise: level_fraction must be >= 0");
    Sinogram out = s;
    if (level_fraction == 0.0) return out;
    const double sigma = level_fraction * max_val(s.values);
    for (size_t i = 0; i < out.values.v.size(); ++i)
        out.values.v[i] += sigma * gaussian_sample(seed, static_cast<uint64_t>(i));
    return out;
}

StripePhantom stripe_phantom_pair() {
    const int n = 64;
    StripePhantom p;
    p.clean = Image(n, n);
    // Horizontal stripe; the across-edge direction is the row axis, so
    // forward differences keep across-edge jumps purely in e1 and a
    // continued stripe is penalty-free on the band.
    p.e1x = 0.0;
    p.e1y = 1.0;
    const double half_width = 3.0;  // perpendicular half-width in pixels
    const double cy = 0.5 * (n - 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) p.clean.values(r, c) = std::fabs(r - cy) <= half_width ? 1.0 : 0.0;
    p.noisy = p.clean;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            p.noisy.values(r, c) += 0.1 * gaussian_sample(0x5742u, static_cast<uint64_t>(r) * n + c);
    // Square hole in the middle of the stripe, away from the border.
    p.hole = Array2(n, n, 0.0);
    for (int r = 20; r < 44; ++r)
        for (int c = 20; c < 44; ++c) p.hole(r, c) = 1.0;
    p.gap_width = 24.0;
    p.edge_separation = 2.0 * half_width;
    // c1 indicator: free across-edge jumps on a dilated stripe band.
    p.c1 = Array2(n, n, 1.0);
    const double band = half_width + 2.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (std::fabs(r - cy) <= band) p.c1(r, c) = 0.0;
    return p;
}

}  // namespace wedgefill
