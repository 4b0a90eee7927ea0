#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wedgefill/joint_energy.hpp"
#include "wedgefill/pdhg.hpp"
#include "wedgefill/types.hpp"

namespace wedgefill {

/// Warm-start capsule for an inner solver; duals persist across outer
/// iterations of the same subproblem.
struct InnerWarm {
    std::vector<std::vector<double>> duals;
};

/// One proximal descent step in u: minimizes the convex model
///   1/2|Rx - v|^2_{a1,off-mask} + a2/2|S Rx - b|^2 + b1 TV(x)
///   + tau_x |x - u|^2 + b2 |J0 + grad_x J (x - u)|_{2,1},  x >= 0.
Image x_step(const Image& u, const Sinogram& v, const Sinogram& b, const SampleMask& mask,
             const JointParams& p, double tau_x, InnerWarm* warm = nullptr, int* inner_iters = nullptr);

/// Proximal step in v (exact model, J is linear in v):
///   1/2|Ru - v|^2_{a1,off-mask} + a3/2|S v - b|^2
///   + b2 |A_{Ru} grad v|_{2,1} + tau_y |v - v_prev|^2.
Sinogram y_step(const Image& u, const Sinogram& v_prev, const Sinogram& b, const SampleMask& mask,
                const JointParams& p, double tau_y, InnerWarm* warm = nullptr, int* inner_iters = nullptr);

struct JointState {
    Image u;
    Sinogram v;
    std::vector<EnergyTerms> energy_trace;  // E(u_n, v_n), entry 0 is the start
    std::vector<double> du_sq, dv_sq;       // squared step norms per iteration
    std::vector<double> tau_x_trace, tau_y_trace;
    std::vector<int> inner_iters_x, inner_iters_y;
    int iteration = 0;
};

struct JointRunOptions {
    std::string trace_csv;       // per-iteration CSV when non-empty
    std::string checkpoint_dir;  // binary u/v snapshots when non-empty
    int checkpoint_every = 0;
};

/// Alternating descent on E. Each half-step must decrease the energy by
/// at least tau_dec times its squared step norm (tau_dec = min of the
/// configured prox weights); on violation the step's prox weight doubles
/// and the step is redone, and after repeated failure the step is
/// rejected in favor of staying put. The recorded energy trace is
/// therefore non-increasing by construction; a solver that cannot make
/// any progress raises SolverError only on inner divergence.
JointState run_joint(const Image& u0, const Sinogram& v0, const Sinogram& b, const SampleMask& mask,
                     const JointParams& p, const JointRunOptions& opt = {});

/// Descent-slope estimate of F at x: max over sampled unit directions of
/// max(0, F(x) - F(x + r d)) / r, reported at the smallest radius of the
/// schedule. Directions: the coordinate axes (both signs) plus n_dirs
/// seeded Gaussian directions.
double slope(const std::function<double(const std::vector<double>&)>& F, const std::vector<double>& x,
             const std::vector<double>& radii = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}, int n_dirs = 64,
             uint64_t seed = 0x51EE7);

/// E(x, y) = max(x, y) + x^2 + y^2, the two-axis test energy.
double toy_energy(double x, double y);

struct ToyState {
    double x = 0.0, y = 0.0;
    std::vector<std::pair<double, double>> trace;  // iterates, starting point first
};

/// Exact alternating minimization of toy_energy with prox weights:
/// each half-step solves its piecewise-quadratic 1D problem in closed
/// form.
ToyState run_toy_2axis(double x0, double y0, double tau_x, double tau_y, int iters);

struct ConeBoundReport {
    int samples = 0;
    int violations = 0;
    double worst_margin = 0.0;  // most negative slack-adjusted margin seen
};

/// Checks E(x*) <= E(x* + dx) + 2 tau_x |dx|^2 on random perturbations
/// of radius r, with slack 1e-6 |E(x*)|.
ConeBoundReport cone_bound_check(const std::function<double(const std::vector<double>&)>& E,
                                 const std::vector<double>& x_star, double tau_x, int samples, double radius,
                                 uint64_t seed = 0xC03E);

}  // namespace wedgefill
