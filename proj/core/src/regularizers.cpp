#include "wedgefill/regularizers.hpp"

#include <algorithm>
#include <cmath>

namespace wedgefill {

void AnisotropyParams::validate() const {
    if (rho <= 0.0) throw ConfigError("anisotropy: rho must be > 0");
    if (sigma < 0.0) throw ConfigError("anisotropy: sigma must be >= 0");
    if (beta3 < 0.0) throw ConfigError("anisotropy: beta3 must be >= 0");
    if (eps <= 0.0) throw ConfigError("anisotropy: eps must be > 0");
}

GradientField grad(const Array2& f) {
    GradientField g(f.rows, f.cols);
    for (int r = 0; r < f.rows; ++r)
        for (int c = 0; c < f.cols; ++c) {
            g.x(r, c) = c + 1 < f.cols ? f(r, c + 1) - f(r, c) : 0.0;
            g.y(r, c) = r + 1 < f.rows ? f(r + 1, c) - f(r, c) : 0.0;
        }
    return g;
}

Array2 divergence(const GradientField& g) {
    // Backward differences; exact negative transpose of grad above.
    Array2 d(g.x.rows, g.x.cols, 0.0);
    for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c) {
            double acc = 0.0;
            if (c + 1 < d.cols) acc += g.x(r, c);
            if (c > 0) acc -= g.x(r, c - 1);
            if (r + 1 < d.rows) acc += g.y(r, c);
            if (r > 0) acc -= g.y(r - 1, c);
            d(r, c) = acc;
        }
    return d;
}

double tv(const Array2& f) {
    GradientField g = grad(f);
    double s = 0.0;
    for (size_t i = 0; i < g.x.v.size(); ++i) s += std::hypot(g.x.v[i], g.y.v[i]);
    return s;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int K = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(2 * K + 1);
    double s = 0.0;
    for (int i = -K; i <= K; ++i) s += k[i + K] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (double& w : k) w /= s;
    return k;
}

// One separable pass over rows or columns with replicate clamping.
// `adjoint` scatters instead of gathering, which transposes the clamp.
Array2 blur_pass(const Array2& f, const std::vector<double>& k, bool along_cols, bool adjoint) {
    const int K = (static_cast<int>(k.size()) - 1) / 2;
    Array2 out(f.rows, f.cols, 0.0);
    for (int r = 0; r < f.rows; ++r)
        for (int c = 0; c < f.cols; ++c)
            for (int j = -K; j <= K; ++j) {
                int rr = r, cc = c;
                if (along_cols)
                    cc = std::clamp(c + j, 0, f.cols - 1);
                else
                    rr = std::clamp(r + j, 0, f.rows - 1);
                if (adjoint)
                    out(rr, cc) += k[j + K] * f(r, c);
                else
                    out(r, c) += k[j + K] * f(rr, cc);
            }
    return out;
}

Array2 blur_impl(const Array2& f, double sigma, bool adjoint) {
    if (sigma < 0.0) throw ConfigError("gaussian_blur: sigma must be >= 0");
    if (sigma == 0.0) return f;
    const auto k = gaussian_kernel(sigma);
    // The two passes commute, so the adjoint keeps the same order.
    return blur_pass(blur_pass(f, k, true, adjoint), k, false, adjoint);
}

constexpr double kTinyDelta = 1e-300;

// Per-pixel scalars shared by the anisotropy value and its Jacobian.
struct PointwiseState {
    double P, Q, Sigma, Delta, T, r, omega, c1, c2;
};

PointwiseState pointwise_state(double m11, double m12, double m22, const AnisotropyParams& p) {
    PointwiseState s;
    s.Sigma = m11 + m22;
    s.P = m11 - m22;
    s.Q = 2.0 * m12;
    const double d2 = s.P * s.P + s.Q * s.Q;
    s.Delta = std::sqrt(d2);
    s.T = std::tanh(s.Sigma);
    s.r = 1.0 / (1.0 + p.beta3 * d2);
    s.c1 = p.eps + s.T * s.r;
    s.c2 = p.eps + s.T;
    s.omega = -s.T * p.beta3 * s.Delta * s.r;  // (c1 - c2)/Delta, -> 0 at crossings
    return s;
}

}  // namespace

Array2 gaussian_blur(const Array2& f, double sigma) { return blur_impl(f, sigma, false); }
Array2 gaussian_blur_adjoint(const Array2& f, double sigma) { return blur_impl(f, sigma, true); }

TensorField structure_tensor(const Array2& d, double rho, double sigma) {
    if (rho <= 0.0) throw ConfigError("structure_tensor: rho must be > 0");
    GradientField g = grad(gaussian_blur(d, rho));
    TensorField M(d.rows, d.cols);
    for (size_t i = 0; i < g.x.v.size(); ++i) {
        M.m11.v[i] = g.x.v[i] * g.x.v[i];
        M.m12.v[i] = g.x.v[i] * g.y.v[i];
        M.m22.v[i] = g.y.v[i] * g.y.v[i];
    }
    M.m11 = gaussian_blur(M.m11, sigma);
    M.m12 = gaussian_blur(M.m12, sigma);
    M.m22 = gaussian_blur(M.m22, sigma);
    return M;
}

EigenField eig2x2(const TensorField& M) {
    EigenField e;
    const int rows = M.m11.rows, cols = M.m11.cols;
    e.lambda1 = e.lambda2 = e.e1x = e.e1y = e.e2x = e.e2y = Array2(rows, cols);
    for (size_t i = 0; i < M.m11.v.size(); ++i) {
        const double P = M.m11.v[i] - M.m22.v[i];
        const double Q = 2.0 * M.m12.v[i];
        const double Sigma = M.m11.v[i] + M.m22.v[i];
        const double Delta = std::hypot(P, Q);
        e.lambda1.v[i] = 0.5 * (Sigma + Delta);
        e.lambda2.v[i] = 0.5 * (Sigma - Delta);
        double ex = 1.0, ey = 0.0;
        if (Delta > kTinyDelta) {
            // Two closed forms; pick the one whose denominator is not
            // degenerate near (0,0)/0.
            const double a1x = Q, a1y = Delta - P;
            const double a2x = Delta + P, a2y = Q;
            const double n1 = std::hypot(a1x, a1y), n2 = std::hypot(a2x, a2y);
            if (n2 >= n1) {
                ex = a2x / n2;
                ey = a2y / n2;
            } else {
                ex = a1x / n1;
                ey = a1y / n1;
            }
        }
        e.e1x.v[i] = ex;
        e.e1y.v[i] = ey;
        e.e2x.v[i] = -ey;
        e.e2y.v[i] = ex;
    }
    return e;
}

TensorField anisotropy_from_structure(const TensorField& M, const AnisotropyParams& p) {
    p.validate();
    TensorField A(M.m11.rows, M.m11.cols);
    for (size_t i = 0; i < M.m11.v.size(); ++i) {
        const PointwiseState s = pointwise_state(M.m11.v[i], M.m12.v[i], M.m22.v[i], p);
        const double mean = 0.5 * (s.c1 + s.c2);
        A.m11.v[i] = mean + 0.5 * s.omega * s.P;
        A.m12.v[i] = 0.5 * s.omega * s.Q;
        A.m22.v[i] = mean - 0.5 * s.omega * s.P;
    }
    return A;
}

TensorField anisotropy_tensor(const Array2& d, const AnisotropyParams& p) {
    p.validate();
    return anisotropy_from_structure(structure_tensor(d, p.rho, p.sigma), p);
}

TensorJacobian::TensorJacobian(int r, int co) : rows(r), cols(co) {
    for (auto& a : c) a = Array2(r, co);
}

TensorJacobian anisotropy_jacobian(const TensorField& M, const AnisotropyParams& p) {
    p.validate();
    TensorJacobian J(M.m11.rows, M.m11.cols);
    for (size_t i = 0; i < M.m11.v.size(); ++i) {
        const PointwiseState s = pointwise_state(M.m11.v[i], M.m12.v[i], M.m22.v[i], p);
        const double sech2 = 1.0 - s.T * s.T;
        // Directional derivative in (dm11, dm12, dm22).
        auto deriv = [&](double dm11, double dm12, double dm22, double out[3]) {
            const double dS = dm11 + dm22;
            const double dP = dm11 - dm22;
            const double dQ = 2.0 * dm12;
            const double dD2 = 2.0 * (s.P * dP + s.Q * dQ);
            const double dT = sech2 * dS;
            const double dr = -p.beta3 * s.r * s.r * dD2;
            const double dc1 = dT * s.r + s.T * dr;
            const double dc2 = dT;
            double domega = -p.beta3 * (dT * s.Delta * s.r + s.T * s.Delta * dr);
            if (s.Delta > kTinyDelta) domega -= p.beta3 * s.T * s.r * (0.5 * dD2 / s.Delta);
            const double dmean = 0.5 * (dc1 + dc2);
            out[0] = dmean + 0.5 * (domega * s.P + s.omega * dP);
            out[1] = 0.5 * (domega * s.Q + s.omega * dQ);
            out[2] = dmean - 0.5 * (domega * s.P + s.omega * dP);
        };
        double col[3];
        for (int b = 0; b < 3; ++b) {
            deriv(b == 0, b == 1, b == 2, col);
            for (int rr = 0; rr < 3; ++rr) J.c[rr * 3 + b].v[i] = col[rr];
        }
    }
    return J;
}

TensorField apply_jacobian(const TensorJacobian& J, const TensorField& dM) {
    TensorField dA(J.rows, J.cols);
    for (size_t i = 0; i < dA.m11.v.size(); ++i) {
        const double in[3] = {dM.m11.v[i], dM.m12.v[i], dM.m22.v[i]};
        dA.m11.v[i] = J.c[0].v[i] * in[0] + J.c[1].v[i] * in[1] + J.c[2].v[i] * in[2];
        dA.m12.v[i] = J.c[3].v[i] * in[0] + J.c[4].v[i] * in[1] + J.c[5].v[i] * in[2];
        dA.m22.v[i] = J.c[6].v[i] * in[0] + J.c[7].v[i] * in[1] + J.c[8].v[i] * in[2];
    }
    return dA;
}

TensorField apply_jacobian_adjoint(const TensorJacobian& J, const TensorField& dA) {
    TensorField dM(J.rows, J.cols);
    for (size_t i = 0; i < dM.m11.v.size(); ++i) {
        const double in[3] = {dA.m11.v[i], dA.m12.v[i], dA.m22.v[i]};
        dM.m11.v[i] = J.c[0].v[i] * in[0] + J.c[3].v[i] * in[1] + J.c[6].v[i] * in[2];
        dM.m12.v[i] = J.c[1].v[i] * in[0] + J.c[4].v[i] * in[1] + J.c[7].v[i] * in[2];
        dM.m22.v[i] = J.c[2].v[i] * in[0] + J.c[5].v[i] * in[1] + J.c[8].v[i] * in[2];
    }
    return dM;
}

TensorField structure_tensor_derivative(const GradientField& g, const Array2& dd, double rho, double sigma) {
    GradientField dg = grad(gaussian_blur(dd, rho));
    TensorField dM(dd.rows, dd.cols);
    for (size_t i = 0; i < dg.x.v.size(); ++i) {
        dM.m11.v[i] = 2.0 * g.x.v[i] * dg.x.v[i];
        dM.m12.v[i] = g.x.v[i] * dg.y.v[i] + g.y.v[i] * dg.x.v[i];
        dM.m22.v[i] = 2.0 * g.y.v[i] * dg.y.v[i];
    }
    dM.m11 = gaussian_blur(dM.m11, sigma);
    dM.m12 = gaussian_blur(dM.m12, sigma);
    dM.m22 = gaussian_blur(dM.m22, sigma);
    return dM;
}

Array2 structure_tensor_derivative_adjoint(const GradientField& g, const TensorField& dM, double rho, double sigma) {
    const Array2 b11 = gaussian_blur_adjoint(dM.m11, sigma);
    const Array2 b12 = gaussian_blur_adjoint(dM.m12, sigma);
    const Array2 b22 = gaussian_blur_adjoint(dM.m22, sigma);
    GradientField dg(g.x.rows, g.x.cols);
    for (size_t i = 0; i < dg.x.v.size(); ++i) {
        dg.x.v[i] = 2.0 * g.x.v[i] * b11.v[i] + g.y.v[i] * b12.v[i];
        dg.y.v[i] = g.x.v[i] * b12.v[i] + 2.0 * g.y.v[i] * b22.v[i];
    }
    Array2 gt = divergence(dg);
    for (double& x : gt.v) x = -x;  // grad^T = -div
    return gaussian_blur_adjoint(gt, rho);
}

TensorField danisotropy_dd(const Array2& d, const Array2& dd, const AnisotropyParams& p) {
    p.validate();
    const GradientField g = grad(gaussian_blur(d, p.rho));
    TensorField M(d.rows, d.cols);
    for (size_t i = 0; i < g.x.v.size(); ++i) {
        M.m11.v[i] = g.x.v[i] * g.x.v[i];
        M.m12.v[i] = g.x.v[i] * g.y.v[i];
        M.m22.v[i] = g.y.v[i] * g.y.v[i];
    }
    M.m11 = gaussian_blur(M.m11, p.sigma);
    M.m12 = gaussian_blur(M.m12, p.sigma);
    M.m22 = gaussian_blur(M.m22, p.sigma);
    const TensorField dM = structure_tensor_derivative(g, dd, p.rho, p.sigma);
    return apply_jacobian(anisotropy_jacobian(M, p), dM);
}

GradientField apply_tensor(const TensorField& A, const GradientField& g) {
    GradientField z(g.x.rows, g.x.cols);
    for (size_t i = 0; i < g.x.v.size(); ++i) {
        z.x.v[i] = A.m11.v[i] * g.x.v[i] + A.m12.v[i] * g.y.v[i];
        z.y.v[i] = A.m12.v[i] * g.x.v[i] + A.m22.v[i] * g.y.v[i];
    }
    return z;
}

double dtv(const Array2& v, const TensorField& A) {
    GradientField z = apply_tensor(A, grad(v));
    double s = 0.0;
    for (size_t i = 0; i < z.x.v.size(); ++i) s += std::hypot(z.x.v[i], z.y.v[i]);
    return s;
}

TensorField make_anisotropy(const Array2& c1, const Array2& c2, const Array2& e1x, const Array2& e1y) {
    TensorField A(c1.rows, c1.cols);
    for (size_t i = 0; i < c1.v.size(); ++i) {
        const double ex = e1x.v[i], ey = e1y.v[i];
        A.m11.v[i] = c1.v[i] * ex * ex + c2.v[i] * ey * ey;
        A.m12.v[i] = (c1.v[i] - c2.v[i]) * ex * ey;
        A.m22.v[i] = c1.v[i] * ey * ey + c2.v[i] * ex * ex;
    }
    return A;
}

}  // namespace wedgefill
