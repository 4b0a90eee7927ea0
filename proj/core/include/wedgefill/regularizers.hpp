#pragma once

#include <array>

#include "wedgefill/array2.hpp"
#include "wedgefill/types.hpp"

namespace wedgefill {

/// Per-pixel gradient (forward differences, replicate boundary).
struct GradientField {
    Array2 x, y;

    GradientField() = default;
    GradientField(int rows, int cols) : x(rows, cols), y(rows, cols) {}
    bool same_shape(const GradientField& o) const { return x.same_shape(o.x) && y.same_shape(o.y); }
};

/// Per-pixel symmetric 2x2 matrix as three planes.
struct TensorField {
    Array2 m11, m12, m22;

    TensorField() = default;
    TensorField(int rows, int cols) : m11(rows, cols), m12(rows, cols), m22(rows, cols) {}
};

/// Ordered eigendecomposition of a TensorField: lambda1 >= lambda2,
/// orthonormal eigenvector pair.
struct EigenField {
    Array2 lambda1, lambda2, e1x, e1y, e2x, e2y;
};

struct AnisotropyParams {
    double rho = 1.0;    // pre-smoothing of the field, must be > 0
    double sigma = 8.0;  // tensor smoothing, >= 0
    double beta3 = 1e10; // coherence sharpening in c1
    double eps = 1e-6;   // lower bound keeping c_i away from 0
    void validate() const;
};

GradientField grad(const Array2& f);
/// Exact negative adjoint of grad: <grad f, g> = -<f, div g>.
Array2 divergence(const GradientField& g);

/// Isotropic TV: sum over pixels of |grad f|_2.
double tv(const Array2& f);

/// Separable discrete Gaussian, truncated at 4*sigma, kernel
/// renormalized to sum 1; replicate boundary. sigma = 0 is the identity.
Array2 gaussian_blur(const Array2& f, double sigma);
/// Exact adjoint of gaussian_blur (replicate padding is not
/// self-adjoint at the boundary).
Array2 gaussian_blur_adjoint(const Array2& f, double sigma);

/// Structure tensor M = blur_sigma( grad(blur_rho d) grad(blur_rho d)^T ).
TensorField structure_tensor(const Array2& d, double rho, double sigma);

/// Closed-form 2x2 eigendecomposition with two e1 formulas, selecting
/// the non-degenerate denominator; ties (Delta = 0) return the
/// coordinate axes.
EigenField eig2x2(const TensorField& M);

/// Pointwise anisotropy tensor A = c1 e1 e1^T + c2 e2 e2^T with
///   c1 = eps + tanh(Sigma) / (1 + beta3 Delta^2),  c2 = eps + tanh(Sigma).
/// Assembled from smooth functions of (Delta^2, Sigma) so the map stays
/// continuous through eigenvalue crossings.
TensorField anisotropy_from_structure(const TensorField& M, const AnisotropyParams& p);
TensorField anisotropy_tensor(const Array2& d, const AnisotropyParams& p);

/// Pointwise 3x3 Jacobian of (M11, M12, M22) -> (A11, A12, A22).
struct TensorJacobian {
    int rows = 0, cols = 0;
    std::array<Array2, 9> c;  // row-major 3x3 per pixel

    TensorJacobian() = default;
    TensorJacobian(int r, int co);
};

TensorJacobian anisotropy_jacobian(const TensorField& M, const AnisotropyParams& p);
TensorField apply_jacobian(const TensorJacobian& J, const TensorField& dM);
TensorField apply_jacobian_adjoint(const TensorJacobian& J, const TensorField& dA);

/// Directional derivative of the structure tensor in d. `g` must be
/// grad(blur_rho d) as produced by structure_tensor's chain.
TensorField structure_tensor_derivative(const GradientField& g, const Array2& dd, double rho, double sigma);
/// Adjoint of the above, mapping a tensor-field cotangent back to d.
Array2 structure_tensor_derivative_adjoint(const GradientField& g, const TensorField& dM, double rho, double sigma);

/// Analytic directional derivative of d -> A_d.
TensorField danisotropy_dd(const Array2& d, const Array2& dd, const AnisotropyParams& p);

/// z = A g pointwise (A symmetric).
GradientField apply_tensor(const TensorField& A, const GradientField& g);

/// Directional TV: sum over pixels of |A(x) grad v(x)|_2.
double dtv(const Array2& v, const TensorField& A);

/// Assemble A = c1 e1 e1^T + c2 e2 e2^T from explicit fields (used by
/// experiments that prescribe the edge direction).
TensorField make_anisotropy(const Array2& c1, const Array2& c2, const Array2& e1x, const Array2& e1y);

}  // namespace wedgefill
