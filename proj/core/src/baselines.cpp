#include "wedgefill/baselines.hpp"

#include <cmath>
#include <complex>

#include "wedgefill/projector.hpp"
#include "wedgefill/regularizers.hpp"

namespace wedgefill {

namespace {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT; n must be a power of two.
void fft(std::vector<cplx>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (cplx& x : a) x /= static_cast<double>(n);
}

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Frequency response of the discrete Ram-Lak kernel (Kak & Slaney),
// optionally Hann-apodized. ds is the detector spacing.
std::vector<double> ramp_response(size_t n, double ds, bool hann) {
    std::vector<cplx> h(n, 0.0);
    h[0] = 1.0 / (4.0 * ds * ds);
    for (size_t k = 1; k <= n / 2; k += 2) {
        const double val = -1.0 / (M_PI * M_PI * static_cast<double>(k) * static_cast<double>(k) * ds * ds);
        h[k] = val;
        h[n - k] = val;
    }
    fft(h, false);
    std::vector<double> H(n);
    for (size_t k = 0; k < n; ++k) {
        double w = 1.0;
        if (hann) {
            // Hann window over [-Nyquist, Nyquist].
            const double f = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(n - k);
            w = 0.5 * (1.0 + std::cos(2.0 * M_PI * f / static_cast<double>(n)));
        }
        H[k] = h[k].real() * w;
    }
    return H;
}

}  // namespace

Image fbp(const Sinogram& b, const SampleMask& mask, int width, int height, double pixel_size, bool hann) {
    b.validate();
    const ProjectionGeometry& g = b.geometry;
    const double ds = g.detector_spacing;
    const size_t n = next_pow2(static_cast<size_t>(2 * g.detector_count));
    const std::vector<double> H = ramp_response(n, ds, hann);

    std::vector<int> kept;
    for (int a = 0; a < g.angle_count(); ++a)
        if (mask.flags(a, 0) != 0.0) kept.push_back(a);
    if (kept.empty()) return Image(width, height, pixel_size);

    Sinogram filtered(g);
    std::vector<cplx> row(n);
    for (int a : kept) {
        std::fill(row.begin(), row.end(), cplx(0.0));
        for (int k = 0; k < g.detector_count; ++k) row[k] = b.values(a, k);
        fft(row, false);
        for (size_t k = 0; k < n; ++k) row[k] *= H[k];
        fft(row, true);
        for (int k = 0; k < g.detector_count; ++k) filtered.values(a, k) = row[k].real() * ds;
    }

    // Angular quadrature step (radians); assumes near-uniform spacing.
    double dtheta = M_PI / g.angle_count();
    if (g.angle_count() > 1) dtheta = (g.angles_deg[1] - g.angles_deg[0]) * M_PI / 180.0;

    // B = (dtheta*ds/px^2) R^T under quadrature matching of the discrete and
    // continuous inner products; filtered already carries one factor of ds.
    Image u = back_project(filtered, width, height, pixel_size);
    const double scale = dtheta * ds / (pixel_size * pixel_size);
    for (double& x : u.values.v) x *= scale;
    return u;
}

Image sirt(const Sinogram& b, const SampleMask& mask, int width, int height, int iters,
           std::vector<double>* residual_trace, double pixel_size) {
    b.validate();
    const ProjectionGeometry& g = b.geometry;
    if (!mask.flags.same_shape(b.values)) throw ConfigError("sirt: mask shape mismatch");

    Image ones(width, height, pixel_size);
    ones.values.fill(1.0);
    Sinogram row_sums = forward_project(ones, g);
    Sinogram w(g);
    for (size_t i = 0; i < w.values.v.size(); ++i)
        w.values.v[i] = mask.flags.v[i] / std::max(row_sums.values.v[i], 1e-8);

    Sinogram mask_s(g);
    mask_s.values = mask.flags;
    Image col_sums = back_project(mask_s, width, height, pixel_size);
    Array2 c(height, width);
    for (size_t i = 0; i < c.v.size(); ++i) c.v[i] = 1.0 / std::max(col_sums.values.v[i], 1e-8);

    Image u(width, height, pixel_size);
    for (int it = 0; it < iters; ++it) {
        Sinogram r = forward_project(u, g);
        double res_sq = 0.0;
        for (size_t i = 0; i < r.values.v.size(); ++i) {
            const double e = mask.flags.v[i] * (b.values.v[i] - r.values.v[i]);
            res_sq += e * e;
            r.values.v[i] = w.values.v[i] * (b.values.v[i] - mask.flags.v[i] * r.values.v[i]);
        }
        if (residual_trace) residual_trace->push_back(std::sqrt(res_sq));
        Image upd = back_project(r, width, height, pixel_size);
        for (size_t i = 0; i < u.values.v.size(); ++i) u.values.v[i] += c.v[i] * upd.values.v[i];
    }
    if (residual_trace) {
        Sinogram r = forward_project(u, g);
        double res_sq = 0.0;
        for (size_t i = 0; i < r.values.v.size(); ++i) {
            const double e = mask.flags.v[i] * (b.values.v[i] - r.values.v[i]);
            res_sq += e * e;
        }
        residual_trace->push_back(std::sqrt(res_sq));
    }
    return u;
}

Image tv_reconstruct(const Sinogram& b, const SampleMask& mask, int width, int height, double lambda,
                     const TvReconOptions& opt) {
    b.validate();
    const ProjectionGeometry& g = b.geometry;
    const size_t np = static_cast<size_t>(width) * height;
    const size_t ns = b.values.size();

    auto to_image = [&](const std::vector<double>& x) {
        Image u(width, height, opt.pixel_size);
        u.values.v = x;
        return u;
    };

    PdhgProblem prob;
    prob.primal_size = np;
    prob.max_iters = opt.iters;
    prob.tol = opt.tol;

    DualBlock data;
    data.dual_size = ns;
    data.K = [&](const std::vector<double>& x) {
        Sinogram s = forward_project(to_image(x), g);
        return s.values.v;
    };
    data.Kt = [&](const std::vector<double>& y) {
        Sinogram s(g);
        s.values.v = y;
        return back_project(s, width, height, opt.pixel_size).values.v;
    };
    data.prox_conj = [&](std::vector<double>& y, double sigma) {
        // Conjugate prox of sum_i m_i/2 (w_i - b_i)^2.
        for (size_t i = 0; i < y.size(); ++i) {
            if (mask.flags.v[i] != 0.0)
                y[i] = (y[i] - sigma * b.values.v[i]) / (1.0 + sigma);
            else
                y[i] = 0.0;
        }
    };
    prob.blocks.push_back(std::move(data));

    if (lambda > 0.0) {
        DualBlock tv_block;
        tv_block.dual_size = 2 * np;
        tv_block.K = [=](const std::vector<double>& x) {
            Array2 f(height, width);
            f.v = x;
            GradientField gf = grad(f);
            std::vector<double> z(2 * np);
            std::copy(gf.x.v.begin(), gf.x.v.end(), z.begin());
            std::copy(gf.y.v.begin(), gf.y.v.end(), z.begin() + np);
            return z;
        };
        tv_block.Kt = [=](const std::vector<double>& z) {
            GradientField gf(height, width);
            std::copy(z.begin(), z.begin() + np, gf.x.v.begin());
            std::copy(z.begin() + np, z.end(), gf.y.v.begin());
            Array2 d = divergence(gf);
            std::vector<double> out(np);
            for (size_t i = 0; i < np; ++i) out[i] = -d.v[i];
            return out;
        };
        tv_block.prox_conj = [=](std::vector<double>& z, double) {
            for (size_t i = 0; i < np; ++i) {
                const double n = std::hypot(z[i], z[i + np]);
                if (n > lambda) {
                    z[i] *= lambda / n;
                    z[i + np] *= lambda / n;
                }
            }
        };
        prob.blocks.push_back(std::move(tv_block));
    }

    prob.prox_primal = [](std::vector<double>& x, double) {
        for (double& a : x) a = std::max(a, 0.0);
    };

    prob.objective = [&](const std::vector<double>& x) {
        Image u = to_image(x);
        Sinogram s = forward_project(u, g);
        double f = 0.0;
        for (size_t i = 0; i < ns; ++i) {
            const double e = mask.flags.v[i] * s.values.v[i] - mask.flags.v[i] * b.values.v[i];
            f += 0.5 * e * e;
        }
        return f + lambda * tv(u.values);
    };

    PdhgResult res = pdhg_solve(prob);
    if (opt.objective_trace) *opt.objective_trace = res.objective_trace;
    return to_image(res.x);
}

}  // namespace wedgefill
