#include "wedgefill/metrics.hpp"

#include <cmath>
#include <limits>

#include "wedgefill/types.hpp"

namespace wedgefill {

double psnr(const Array2& x, const Array2& ref) {
    if (!x.same_shape(ref)) throw ConfigError("psnr: shape mismatch");
    double mse = 0.0;
    for (size_t i = 0; i < x.v.size(); ++i) {
        const double d = x.v[i] - ref.v[i];
        mse += d * d;
    }
    mse /= static_cast<double>(x.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    const double peak = max_val(ref);
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

// 8x8 Gaussian window, sigma 1.5, centered between samples.
void window_weights(double w[8]) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += w[i] = std::exp(-0.5 * (i - 3.5) * (i - 3.5) / (1.5 * 1.5));
    for (int i = 0; i < 8; ++i) w[i] /= s;
}

}  // namespace

double ssim(const Array2& x, const Array2& ref) {
    if (!x.same_shape(ref)) throw ConfigError("ssim: shape mismatch");
    const double L = max_val(ref) - min_val(ref);
    const double C1 = (0.01 * L) * (0.01 * L);
    const double C2 = (0.03 * L) * (0.03 * L);
    double w[8];
    window_weights(w);
    double acc = 0.0;
    int count = 0;
    // Valid windows only; for fields smaller than 8x8 fall back to one
    // clamped window.
    const int rmax = std::max(1, x.rows - 7), cmax = std::max(1, x.cols - 7);
    for (int r0 = 0; r0 < rmax; ++r0)
        for (int c0 = 0; c0 < cmax; ++c0) {
            double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) {
                    const int r = std::min(r0 + i, x.rows - 1), c = std::min(c0 + j, x.cols - 1);
                    const double wij = w[i] * w[j];
                    const double a = x(r, c), b = ref(r, c);
                    mx += wij * a;
                    my += wij * b;
                    sxx += wij * a * a;
                    syy += wij * b * b;
                    sxy += wij * a * b;
                }
            sxx -= mx * mx;
            syy -= my * my;
            sxy -= mx * my;
            const double num = (2 * mx * my + C1) * (2 * sxy + C2);
            const double den = (mx * mx + my * my + C1) * (sxx + syy + C2);
            acc += num / den;
            ++count;
        }
    return acc / count;
}

}  // namespace wedgefill
