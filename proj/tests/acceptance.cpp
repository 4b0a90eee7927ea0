// Acceptance checks for the joint limited-angle reconstruction stack.
// Each criterion prints exactly one PASS/FAIL line; the exit status is
// the number of failed criteria. The heavyweight 64x64 experiment is run
// once and shared by the descent, metric and cone-bound checks.
//
// Set WEDGEFILL_LONG_TESTS=1 to also run the full-resolution 200x200
// comparison (slow; skipped and reported as such by default).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include "wedgefill/baselines.hpp"
#include "wedgefill/io.hpp"
#include "wedgefill/metrics.hpp"
#include "wedgefill/phantoms.hpp"
#include "wedgefill/projector.hpp"
#include "wedgefill/regularizers.hpp"
#include "wedgefill/runner.hpp"
#include "wedgefill/solvers.hpp"

using namespace wedgefill;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d %-28s %s%s%s\n", id, name, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---- criterion 1: projector adjoint ------------------------------------

void check_adjoint() {
    const int n = 32;
    ProjectionGeometry g = uniform_geometry(16, 0.0, 11.25, default_detector_count(n, n), 1.0);
    std::mt19937 rng(2024);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Image u(n, n);
        Sinogram s(g);
        for (double& x : u.values.v) x = nd(rng);
        for (double& x : s.values.v) x = nd(rng);
        Sinogram ru = forward_project(u, g);
        Image rts = back_project(s, n, n, 1.0);
        const double lhs = dot(ru.values, s.values);
        const double rhs = dot(u.values, rts.values);
        const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
        worst = std::max(worst, std::fabs(lhs - rhs) / std::max(scale, 1e-30));
    }
    report(1, "projector adjoint", worst <= 1e-6, fmt("worst rel err %.2e over 100 pairs", worst));
}

// ---- shared 64x64 experiment --------------------------------------------

ExperimentConfig shared_config(const std::string& out_dir) {
    ExperimentConfig e;
    e.phantom = "shepp";
    e.size = 64;
    e.n_angles = 180;
    e.angle_step = 1.0;
    e.wedge_start_deg = 120.0;
    e.wedge_width_deg = 60.0;
    e.noise_level = 0.05;
    e.seed = 7;
    e.joint.alpha1 = 0.0625;
    e.joint.alpha2 = 1.0;
    e.joint.alpha3 = 0.3;
    e.joint.beta1 = 3e-5;
    e.joint.beta2 = 300.0;
    e.joint.beta3 = 1e10;
    e.joint.rho = 1.0;
    e.joint.sigma = 3.0;
    e.joint.tau_x = 0.05;
    e.joint.tau_y = 0.05;
    e.joint.iters = 200;
    e.joint.inner_iters = 150;
    e.joint.inner_tol = 1e-6;
    e.tv_lambda = 3e-5;
    e.tv_iters = 300;
    e.out_dir = out_dir;
    return e;
}

struct SharedRun {
    ExperimentConfig cfg;
    std::map<std::string, double> metrics;
    std::vector<double> total, du_sq, dv_sq, tau_x;
    bool ok = false;
};

SharedRun run_shared() {
    SharedRun r;
    r.cfg = shared_config((fs::temp_directory_path() / "wedgefill_acceptance").string());
    fs::remove_all(r.cfg.out_dir);
    r.metrics = run_experiment(r.cfg);

    std::ifstream trace(r.cfg.out_dir + "/trace.csv");
    std::string line;
    std::getline(trace, line);  // header
    while (std::getline(trace, line)) {
        std::vector<double> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(std::strtod(cell.c_str(), nullptr));
        if (cols.size() < 13) continue;
        r.total.push_back(cols[6]);
        r.du_sq.push_back(cols[7]);
        r.dv_sq.push_back(cols[8]);
        r.tau_x.push_back(cols[9]);
    }
    r.ok = r.total.size() == 201;
    return r;
}

void check_monotone_descent(const SharedRun& r) {
    if (!r.ok) {
        report(2, "monotone energy descent", false, "experiment run incomplete");
        return;
    }
    const double e0 = r.total.front();
    const double slack = 1e-8 * std::fabs(e0);
    bool monotone = true;
    double worst_rise = 0.0;
    for (size_t i = 1; i < r.total.size(); ++i) {
        const double rise = r.total[i] - r.total[i - 1];
        worst_rise = std::max(worst_rise, rise);
        if (rise > slack) monotone = false;
    }
    double step_sum = 0.0;
    for (size_t i = 0; i < r.du_sq.size(); ++i) step_sum += r.du_sq[i] + r.dv_sq[i];
    const double tau_min = std::min(r.cfg.joint.tau_x, r.cfg.joint.tau_y);
    const bool summable = step_sum <= e0 / tau_min;
    report(2, "monotone energy descent", monotone && summable,
           fmt("E0 %.4g, worst rise %.2e (slack %.2e), step sum %.4g <= %.4g", e0, worst_rise, slack,
               step_sum, e0 / tau_min));
}

// ---- criterion 3: two-axis fixed point ----------------------------------

void check_toy_fixed_point() {
    ToyState at0 = run_toy_2axis(0.0, 0.0, 0.5, 0.5, 1000);
    bool origin_exact = true;
    for (const auto& [x, y] : at0.trace)
        if (x != 0.0 || y != 0.0) origin_exact = false;

    ToyState lim = run_toy_2axis(-1.0, -1.0, 0.5, 0.5, 200);
    const double err = std::hypot(lim.x + 0.5, lim.y + 0.5);
    report(3, "two-axis fixed point", origin_exact && err <= 1e-6,
           fmt("origin exact %s, limit error %.2e", origin_exact ? "yes" : "no", err));
}

// ---- criterion 4: slope estimator ---------------------------------------

void check_slope() {
    auto norm2 = [](const std::vector<double>& x) { return std::hypot(x[0], x[1]); };
    std::vector<double> origin = {0.0, 0.0};
    const double s_neg = slope([&](const std::vector<double>& x) { return -norm2(x); }, origin);
    const double s_sq = slope([&](const std::vector<double>& x) { return norm2(x) * norm2(x); }, origin);
    const double s_abs = slope([&](const std::vector<double>& x) { return norm2(x); }, origin);
    const bool ok = std::fabs(s_neg - 1.0) <= 0.01 && s_sq <= 1e-3 && s_abs == 0.0;
    report(4, "slope estimator", ok, fmt("-|x|: %.4f, |x|^2: %.2e, |x|: %.2e", s_neg, s_sq, s_abs));
}

// ---- criterion 5: tensor smoothness through the eigenvalue flip ----------

void check_tensor_smoothness() {
    AnisotropyParams p;
    p.beta3 = 1.0;
    auto A_of = [&](double t) {
        TensorField M(1, 1);
        M.m11(0, 0) = 1.0 - t;
        M.m22(0, 0) = t;
        return anisotropy_from_structure(M, p);
    };
    // Here the difference is quadratic in delta (the eigenvalue gap
    // enters c1 through Delta^2 only), so per-delta quotients decay;
    // Lipschitz continuity means the C fitted at the coarsest delta
    // bounds every finer delta within a factor of 2.
    const std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
    std::vector<double> diffs, ratios;
    for (double delta : deltas) {
        TensorField a = A_of(0.5 - delta), b = A_of(0.5 + delta);
        const double d11 = a.m11(0, 0) - b.m11(0, 0);
        const double d12 = a.m12(0, 0) - b.m12(0, 0);
        const double d22 = a.m22(0, 0) - b.m22(0, 0);
        diffs.push_back(std::sqrt(d11 * d11 + 2.0 * d12 * d12 + d22 * d22));
        ratios.push_back(diffs.back() / delta);
    }
    const double C = ratios[0];
    bool ok = C > 0.0;
    for (size_t i = 0; i < deltas.size(); ++i)
        if (diffs[i] > 2.0 * C * deltas[i]) ok = false;
    report(5, "tensor Lipschitz at the flip", ok,
           fmt("C %.4g; per-delta quotients %.4g %.4g %.4g", C, ratios[0], ratios[1], ratios[2]));
}

// ---- criterion 6: linearization remainders -------------------------------

void check_linearization() {
    const int n = 16;
    Image u(n, n);
    ProjectionGeometry g = uniform_geometry(12, 0.0, 15.0, default_detector_count(n, n), 1.0);
    Sinogram v(g), b(g);
    std::mt19937 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (double& x : u.values.v) x = 0.5 + 0.1 * nd(rng);
    for (double& x : v.values.v) x = nd(rng);
    JointParams p;
    p.sigma = 2.0;
    p.beta3 = 10.0;
    SplitParts parts = split_fgJ(b, full_mask(g), p);

    Image du(n, n);
    for (double& x : du.values.v) x = nd(rng);
    GradientField lin = linearize_J_in_x(u, v, du, p);
    GradientField probe(lin.x.rows, lin.x.cols);
    for (double& x : probe.x.v) x = nd(rng);
    for (double& x : probe.y.v) x = nd(rng);
    auto pair = [&](const GradientField& a) { return dot(a.x, probe.x) + dot(a.y, probe.y); };
    GradientField j = parts.J(u, v);
    auto value_at = [&](double h) {
        Image uh = u;
        for (size_t i = 0; i < uh.values.size(); ++i) uh.values.v[i] += h * du.values.v[i];
        return pair(parts.J(uh, v)) - pair(j);
    };
    const double d = pair(lin);
    const double r1 = value_at(1e-3) - 1e-3 * d;
    const double r2 = value_at(5e-4) - 5e-4 * d;
    const double order = std::log(std::fabs(r1) / std::fabs(r2)) / std::log(2.0);

    // J is linear in v, so the y-remainder vanishes (at machine
    // precision; the gradient and the tensor product each round once).
    Sinogram dv(g);
    for (double& x : dv.values.v) x = nd(rng);
    GradientField liny = linearize_J_in_y(u, v, dv, p);
    Sinogram vpd = v;
    for (size_t i = 0; i < vpd.values.size(); ++i) vpd.values.v[i] += dv.values.v[i];
    GradientField jy = parts.J(u, vpd);
    double rem = 0.0, scale = 0.0;
    for (size_t i = 0; i < jy.x.v.size(); ++i) {
        rem = std::max(rem, std::fabs(jy.x.v[i] - j.x.v[i] - liny.x.v[i]));
        rem = std::max(rem, std::fabs(jy.y.v[i] - j.y.v[i] - liny.y.v[i]));
        scale = std::max(scale, std::fabs(jy.x.v[i]) + std::fabs(jy.y.v[i]));
    }
    const bool ok = order >= 1.8 && rem <= 1e-12 * std::max(scale, 1.0);
    report(6, "linearization remainders", ok, fmt("x-order %.2f, y-remainder %.2e", order, rem));
}

// ---- criterion 7: DTV reduces to TV -------------------------------------

void check_dtv_tv() {
    std::mt19937 rng(99);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int rows = 8 + trial % 9, cols = 8 + trial % 7;
        Array2 f(rows, cols);
        for (double& x : f.v) x = nd(rng);
        Array2 ones(rows, cols, 1.0), zeros(rows, cols, 0.0);
        TensorField I = make_anisotropy(ones, ones, ones, zeros);
        const double a = dtv(f, I), t = tv(f);
        worst = std::max(worst, std::fabs(a - t) / std::max(std::fabs(t), 1e-30));
    }
    report(7, "dtv equals tv at identity", worst <= 1e-12, fmt("worst rel err %.2e over 50 fields", worst));
}

// ---- criterion 8: line continuation across a wide gap --------------------

Array2 stripe_inpaint(const StripePhantom& ph, const TensorField& A, double lambda, int iters) {
    const int n = ph.clean.width;
    const size_t sz = ph.noisy.values.size();
    PdhgProblem prob;
    prob.primal_size = sz;
    DualBlock blk;
    blk.dual_size = 2 * sz;
    blk.K = [&A, n, sz](const std::vector<double>& x) {
        Array2 u(n, n);
        u.v = x;
        GradientField gf = apply_tensor(A, grad(u));
        std::vector<double> out(2 * sz);
        std::copy(gf.x.v.begin(), gf.x.v.end(), out.begin());
        std::copy(gf.y.v.begin(), gf.y.v.end(), out.begin() + sz);
        return out;
    };
    blk.Kt = [&A, n, sz](const std::vector<double>& y) {
        GradientField gf(n, n);
        std::copy(y.begin(), y.begin() + sz, gf.x.v.begin());
        std::copy(y.begin() + sz, y.end(), gf.y.v.begin());
        Array2 d = divergence(apply_tensor(A, gf));
        std::vector<double> out(sz);
        for (size_t i = 0; i < sz; ++i) out[i] = -d.v[i];
        return out;
    };
    blk.prox_conj = [lambda, sz](std::vector<double>& y, double) {
        for (size_t i = 0; i < sz; ++i) {
            const double m = std::hypot(y[i], y[i + sz]);
            if (m > lambda) {
                y[i] *= lambda / m;
                y[i + sz] *= lambda / m;
            }
        }
    };
    prob.blocks.push_back(std::move(blk));
    prob.prox_primal = [&ph, sz](std::vector<double>& x, double tau) {
        for (size_t i = 0; i < sz; ++i) {
            if (ph.hole.v[i] > 0.5) continue;
            x[i] = (x[i] + tau * ph.noisy.values.v[i]) / (1.0 + tau);
        }
    };
    prob.objective = [&ph, &A, lambda, n, sz](const std::vector<double>& x) {
        Array2 u(n, n);
        u.v = x;
        double q = 0.0;
        for (size_t i = 0; i < sz; ++i)
            if (ph.hole.v[i] <= 0.5) q += (x[i] - ph.noisy.values.v[i]) * (x[i] - ph.noisy.values.v[i]);
        return 0.5 * q + lambda * dtv(u, A);
    };
    prob.max_iters = iters;
    prob.tol = 0.0;
    PdhgResult res = pdhg_solve(prob);
    Array2 out(n, n);
    out.v = res.x;
    return out;
}

void check_line_continuation() {
    StripePhantom ph = stripe_phantom_pair();
    const int n = ph.clean.width;
    Array2 e1x(n, n), e1y(n, n), c2(n, n, 1.0);
    for (double& v : e1x.v) v = ph.e1x;
    for (double& v : e1y.v) v = ph.e1y;
    TensorField A_dir = make_anisotropy(ph.c1, c2, e1x, e1y);
    Array2 ones(n, n, 1.0), zeros(n, n, 0.0);
    TensorField A_iso = make_anisotropy(ones, ones, ones, zeros);

    auto hole_rmse = [&](const Array2& x) {
        double acc = 0.0;
        int cnt = 0;
        for (size_t i = 0; i < x.v.size(); ++i)
            if (ph.hole.v[i] > 0.5) {
                const double d = x.v[i] - ph.clean.values.v[i];
                acc += d * d;
                ++cnt;
            }
        return std::sqrt(acc / cnt);
    };
    const double dir = hole_rmse(stripe_inpaint(ph, A_dir, 0.5, 1500));
    const double iso = hole_rmse(stripe_inpaint(ph, A_iso, 0.5, 1500));
    report(8, "line continuation", dir <= iso / 3.0, fmt("hole RMSE directional %.4f vs isotropic %.4f", dir, iso));
}

// ---- criterion 9: reconstruction metrics ---------------------------------

double wedge_ratio(const Array2& a) {
    GradientField g = grad(a);
    double cx = 0.0, cy = 0.0;
    for (size_t i = 0; i < g.x.v.size(); ++i) {
        cx += g.x.v[i] * g.x.v[i];
        cy += g.y.v[i] * g.y.v[i];
    }
    return cy / std::max(cx, 1e-30);
}

void check_metrics(const SharedRun& r) {
    if (!r.ok) {
        report(9, "wedge metrics vs tv baseline", false, "experiment run incomplete");
        return;
    }
    const Array2 phantom = read_binary(r.cfg.out_dir + "/phantom.bin");
    const Array2 u0 = read_binary(r.cfg.out_dir + "/u0.bin");  // TV-initialized baseline
    const Array2 uj = read_binary(r.cfg.out_dir + "/u_final.bin");
    const double truth = wedge_ratio(phantom);
    const double tv_gap = std::fabs(wedge_ratio(u0) - truth);
    const double joint_gap = std::fabs(wedge_ratio(uj) - truth);
    const double psnr_tv = r.metrics.at("psnr_u0");
    const double psnr_joint = r.metrics.at("psnr_joint");
    const bool ok = joint_gap < tv_gap && psnr_joint >= psnr_tv - 0.5;
    std::string detail = fmt("ratio gap joint %.4f < tv %.4f; psnr joint %.2f vs tv %.2f", joint_gap,
                             tv_gap, psnr_joint, psnr_tv);
    if (std::getenv("WEDGEFILL_LONG_TESTS")) {
        ExperimentConfig big = shared_config((fs::temp_directory_path() / "wedgefill_acceptance_200").string());
        big.size = 200;
        fs::remove_all(big.out_dir);
        std::map<std::string, double> m = run_experiment(big);
        const double tv200 = m.at("psnr_u0"), joint200 = m.at("psnr_joint");
        const bool big_ok = std::fabs(tv200 - 17.33) <= 1.5 && joint200 >= tv200;
        detail += fmt("; 200x200 tv %.2f joint %.2f ssim %.3f", tv200, joint200, m.at("ssim_joint"));
        report(9, "wedge metrics vs tv baseline", ok && big_ok, detail);
        return;
    }
    detail += "; 200x200 long run skipped (set WEDGEFILL_LONG_TESTS=1)";
    report(9, "wedge metrics vs tv baseline", ok, detail);
}

// ---- criterion 10: proximal cone bound ------------------------------------

void check_cone_bound(const SharedRun& r) {
    // Toy landscape: perturb x with y held at its limit.
    ToyState lim = run_toy_2axis(-1.0, -1.0, 0.5, 0.5, 300);
    auto Ex = [&](const std::vector<double>& t) { return toy_energy(t[0], lim.y); };
    ConeBoundReport toy = cone_bound_check(Ex, {lim.x}, 0.5, 100, 0.05);

    if (!r.ok) {
        report(10, "proximal cone bound", false, "experiment run incomplete");
        return;
    }
    // 64x64 run: perturb u with v fixed at its final value, using the
    // adapted prox weight the solver ended on.
    Dataset ds = synthesize(r.cfg);
    Array2 uf = read_binary(r.cfg.out_dir + "/u_final.bin");
    Array2 vf = read_binary(r.cfg.out_dir + "/v_final.bin");
    Sinogram v_final(ds.geometry);
    v_final.values = vf;
    const int n = r.cfg.size;
    auto Eu = [&](const std::vector<double>& x) {
        Image u(n, n);
        u.values.v = x;
        return energy(u, v_final, ds.data, ds.mask, r.cfg.joint).total();
    };
    const double tau_final = r.tau_x.back();
    ConeBoundReport big = cone_bound_check(Eu, uf.v, tau_final, 100, 0.01);
    const bool ok = toy.violations == 0 && big.violations == 0;
    report(10, "proximal cone bound", ok,
           fmt("toy violations %d/100, image violations %d/100 (tau %.3g)", toy.violations, big.violations,
               tau_final));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    check_adjoint();
    check_toy_fixed_point();
    check_slope();
    check_tensor_smoothness();
    check_linearization();
    check_dtv_tv();
    check_line_continuation();

    SharedRun shared = run_shared();
    check_monotone_descent(shared);
    check_metrics(shared);
    check_cone_bound(shared);

    const double secs =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count() / 1000.0;
    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, secs);
    return failures;
}
