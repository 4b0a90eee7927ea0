#pragma once

#include <functional>

#include "wedgefill/projector.hpp"
#include "wedgefill/regularizers.hpp"
#include "wedgefill/types.hpp"

namespace wedgefill {

/// Weights and radii of the joint reconstruction-inpainting objective
///   E(u, v) = 1/2 |Ru - v|^2_{a1 on the unsampled region}
///           + a2/2 |S Ru - b|^2 + a3/2 |S v - b|^2
///           + b1 TV(u) + b2 DTV_{Ru}(v).
struct JointParams {
    double alpha1 = 0.25;  // pairing weight on the unsampled sinogram region
    double alpha2 = 1.0;   // data fit of Ru on acquired samples
    double alpha3 = 0.1;   // data fit of v on acquired samples
    double beta1 = 3e-5;   // TV weight on u
    double beta2 = 3e3;    // directional TV weight on v
    double beta3 = 1e10;   // coherence sharpening inside the anisotropy
    double rho = 1.0;      // pre-smoothing radius of the structure tensor
    double sigma = 8.0;    // tensor smoothing radius
    double tau_x = 1.0;    // proximal weight of the u-step (adapted at runtime)
    double tau_y = 0.0;    // proximal weight of the v-step
    int iters = 200;       // outer alternations
    int inner_iters = 200; // inner solver cap per subproblem
    double inner_tol = 1e-6;

    void validate() const;
    AnisotropyParams anisotropy() const;
};

/// Term-wise breakdown of E; keeps traces interpretable.
struct EnergyTerms {
    double pairing = 0.0;  // 1/2 |Ru - v|^2 on the unsampled region
    double data_u = 0.0;   // a2/2 |S Ru - b|^2
    double data_v = 0.0;   // a3/2 |S v - b|^2
    double tv_u = 0.0;     // b1 TV(u)
    double dtv_v = 0.0;    // b2 |A_{Ru} grad v|_{2,1}

    double total() const { return pairing + data_u + data_v + tv_u + dtv_v; }
};

/// Full objective; reports (never rejects) negative u so intermediate
/// iterates keep well-defined traces.
EnergyTerms energy(const Image& u, const Sinogram& v, const Sinogram& b, const SampleMask& mask,
                   const JointParams& p);

/// E = f + g(J): f is the jointly convex part (quadratics, TV(u),
/// nonnegativity indicator on u), g the 2,1 semi-norm scaled by beta2,
/// J(u, v) = A_{Ru} grad v.
struct SplitParts {
    std::function<double(const Image&, const Sinogram&)> f;
    std::function<double(const GradientField&)> g;
    std::function<GradientField(const Image&, const Sinogram&)> J;
};

SplitParts split_fgJ(const Sinogram& b, const SampleMask& mask, const JointParams& p);

/// Directional derivative of u -> J(u, v) at (u, v) in direction du.
GradientField linearize_J_in_x(const Image& u, const Sinogram& v, const Image& du, const JointParams& p);
/// Derivative in v; exact since J is linear in v.
GradientField linearize_J_in_y(const Image& u, const Sinogram& v, const Sinogram& dv, const JointParams& p);

/// The linear operator du -> grad_x J(u0, v0) du with its exact adjoint,
/// caching the pieces that depend only on the linearization point.
class JxOperator {
  public:
    JxOperator(const Image& u0, const Sinogram& v0, const JointParams& p);

    GradientField apply(const Array2& du) const;
    Array2 adjoint(const GradientField& z) const;

    const TensorField& anisotropy_at_base() const { return A0_; }
    const GradientField& grad_v0() const { return gv0_; }
    /// J(u0, v0), the base point of the linearization.
    const GradientField& base_value() const { return J0_; }

  private:
    ProjectionGeometry geom_;
    int width_, height_;
    double pixel_size_;
    double rho_, sigma_;
    GradientField g0_;    // grad(blur_rho(R u0))
    TensorJacobian jac_;  // dM -> dA at M(R u0)
    TensorField A0_;
    GradientField gv0_;
    GradientField J0_;
};

}  // namespace wedgefill
