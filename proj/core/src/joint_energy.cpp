#include "wedgefill/joint_energy.hpp"

#include <cmath>
#include <limits>

namespace wedgefill {

void JointParams::validate() const {
    if (rho <= 0.0) throw ConfigError("JointParams: rho must be > 0");
    if (sigma < 0.0) throw ConfigError("JointParams: sigma must be >= 0");
    if (alpha1 < 0.0 || alpha2 < 0.0 || alpha3 < 0.0) throw ConfigError("JointParams: alpha weights must be >= 0");
    if (beta1 < 0.0 || beta2 < 0.0 || beta3 < 0.0) throw ConfigError("JointParams: beta weights must be >= 0");
    if (tau_x < 0.0 || tau_y < 0.0) throw ConfigError("JointParams: prox weights must be >= 0");
    if (iters < 0 || inner_iters <= 0) throw ConfigError("JointParams: iteration counts invalid");
}

AnisotropyParams JointParams::anisotropy() const {
    AnisotropyParams a;
    a.rho = rho;
    a.sigma = sigma;
    a.beta3 = beta3;
    return a;
}

namespace {

void check_shapes(const Image& u, const Sinogram& v, const Sinogram& b, const SampleMask& mask) {
    if (!v.values.same_shape(b.values) || !v.values.same_shape(mask.flags))
        throw ConfigError("energy: sinogram shape mismatch");
    if (u.width <= 0 || u.height <= 0) throw ConfigError("energy: empty image");
}

}  // namespace

EnergyTerms energy(const Image& u, const Sinogram& v, const Sinogram& b, const SampleMask& mask,
                   const JointParams& p) {
    p.validate();
    check_shapes(u, v, b, mask);
    const Sinogram ru = forward_project(u, b.geometry);

    EnergyTerms t;
    for (size_t i = 0; i < ru.values.size(); ++i) {
        const double m = mask.flags.v[i];
        const double dpair = ru.values.v[i] - v.values.v[i];
        t.pairing += 0.5 * p.alpha1 * (1.0 - m) * dpair * dpair;
        const double du = m * (ru.values.v[i] - b.values.v[i]);
        t.data_u += 0.5 * p.alpha2 * du * du;
        const double dv = m * (v.values.v[i] - b.values.v[i]);
        t.data_v += 0.5 * p.alpha3 * dv * dv;
    }
    t.tv_u = p.beta1 * tv(u.values);
    if (p.beta2 > 0.0) {
        const TensorField A = anisotropy_tensor(ru.values, p.anisotropy());
        t.dtv_v = p.beta2 * dtv(v.values, A);
    }
    return t;
}

SplitParts split_fgJ(const Sinogram& b, const SampleMask& mask, const JointParams& p) {
    p.validate();
    SplitParts s;
    s.f = [b, mask, p](const Image& u, const Sinogram& v) {
        check_shapes(u, v, b, mask);
        for (double x : u.values.v)
            if (x < 0.0) return std::numeric_limits<double>::infinity();
        JointParams q = p;
        q.beta2 = 0.0;  // convex terms only; g(J) carries the rest
        EnergyTerms t = energy(u, v, b, mask, q);
        return t.pairing + t.data_u + t.data_v + t.tv_u;
    };
    const double beta2 = p.beta2;
    s.g = [beta2](const GradientField& z) {
        double acc = 0.0;
        for (size_t i = 0; i < z.x.size(); ++i) acc += std::hypot(z.x.v[i], z.y.v[i]);
        return beta2 * acc;
    };
    s.J = [p](const Image& u, const Sinogram& v) {
        const Sinogram ru = forward_project(u, v.geometry);
        const TensorField A = anisotropy_tensor(ru.values, p.anisotropy());
        return apply_tensor(A, grad(v.values));
    };
    return s;
}

GradientField linearize_J_in_x(const Image& u, const Sinogram& v, const Image& du, const JointParams& p) {
    JxOperator op(u, v, p);
    return op.apply(du.values);
}

GradientField linearize_J_in_y(const Image& u, const Sinogram& v, const Sinogram& dv, const JointParams& p) {
    const Sinogram ru = forward_project(u, v.geometry);
    const TensorField A = anisotropy_tensor(ru.values, p.anisotropy());
    return apply_tensor(A, grad(dv.values));
}

JxOperator::JxOperator(const Image& u0, const Sinogram& v0, const JointParams& p)
    : geom_(v0.geometry),
      width_(u0.width),
      height_(u0.height),
      pixel_size_(u0.pixel_size),
      rho_(p.rho),
      sigma_(p.sigma) {
    p.validate();
    const Sinogram ru = forward_project(u0, geom_);
    g0_ = grad(gaussian_blur(ru.values, rho_));
    const TensorField M = structure_tensor(ru.values, rho_, sigma_);
    const AnisotropyParams ap = p.anisotropy();
    jac_ = anisotropy_jacobian(M, ap);
    A0_ = anisotropy_from_structure(M, ap);
    gv0_ = grad(v0.values);
    J0_ = apply_tensor(A0_, gv0_);
}

GradientField JxOperator::apply(const Array2& du) const {
    Image d(width_, height_, pixel_size_);
    d.values = du;
    const Sinogram dd = forward_project(d, geom_);
    const TensorField dM = structure_tensor_derivative(g0_, dd.values, rho_, sigma_);
    const TensorField dA = apply_jacobian(jac_, dM);
    return apply_tensor(dA, gv0_);
}

Array2 JxOperator::adjoint(const GradientField& z) const {
    TensorField dA(z.x.rows, z.x.cols);
    for (size_t i = 0; i < z.x.size(); ++i) {
        dA.m11.v[i] = z.x.v[i] * gv0_.x.v[i];
        dA.m12.v[i] = z.x.v[i] * gv0_.y.v[i] + z.y.v[i] * gv0_.x.v[i];
        dA.m22.v[i] = z.y.v[i] * gv0_.y.v[i];
    }
    const TensorField dM = apply_jacobian_adjoint(jac_, dA);
    Sinogram dd(geom_);
    dd.values = structure_tensor_derivative_adjoint(g0_, dM, rho_, sigma_);
    return back_project(dd, width_, height_, pixel_size_).values;
}

}  // namespace wedgefill
