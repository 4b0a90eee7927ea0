#include "wedgefill/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "wedgefill/io.hpp"
#include "wedgefill/phantoms.hpp"

namespace wedgefill {

namespace {

// Pointwise 2-ball projection of a stacked (zx, zy) vector.
void project_ball(std::vector<double>& z, size_t n, double radius) {
    for (size_t i = 0; i < n; ++i) {
        const double m = std::hypot(z[i], z[i + n]);
        if (m > radius) {
            z[i] *= radius / m;
            z[i + n] *= radius / m;
        }
    }
}

std::vector<double> pack(const GradientField& g) {
    std::vector<double> z(2 * g.x.size());
    std::copy(g.x.v.begin(), g.x.v.end(), z.begin());
    std::copy(g.y.v.begin(), g.y.v.end(), z.begin() + g.x.size());
    return z;
}

GradientField unpack(const std::vector<double>& z, int rows, int cols) {
    GradientField g(rows, cols);
    const size_t n = g.x.size();
    std::copy(z.begin(), z.begin() + n, g.x.v.begin());
    std::copy(z.begin() + n, z.end(), g.y.v.begin());
    return g;
}

const std::vector<std::vector<double>>* usable(const InnerWarm* warm, const PdhgProblem& prob) {
    if (!warm || warm->duals.size() != prob.blocks.size()) return nullptr;
    for (size_t i = 0; i < prob.blocks.size(); ++i)
        if (warm->duals[i].size() != prob.blocks[i].dual_size) return nullptr;
    return &warm->duals;
}

}  // namespace

Image x_step(const Image& u, const Sinogram& v, const Sinogram& b, const SampleMask& mask,
             const JointParams& p, double tau_x, InnerWarm* warm, int* inner_iters) {
    p.validate();
    const ProjectionGeometry g = b.geometry;
    const int W = u.width, H = u.height;
    const double px = u.pixel_size;
    const size_t np = static_cast<size_t>(W) * H;
    const size_t ns = b.values.size();

    // Merge the two quadratic sinogram terms into one weighted fit.
    std::vector<double> w(ns), t(ns, 0.0);
    for (size_t i = 0; i < ns; ++i) {
        const double m = mask.flags.v[i];
        const double w1 = p.alpha1 * (1.0 - m), w2 = p.alpha2 * m;
        w[i] = w1 + w2;
        if (w[i] > 0.0) t[i] = (w1 * v.values.v[i] + w2 * b.values.v[i]) / w[i];
    }

    auto to_image = [&](const std::vector<double>& x) {
        Image im(W, H, px);
        im.values.v = x;
        return im;
    };

    PdhgProblem prob;
    prob.primal_size = np;
    prob.max_iters = p.inner_iters;
    prob.tol = p.inner_tol;

    DualBlock data;
    data.dual_size = ns;
    data.K = [&](const std::vector<double>& x) { return forward_project(to_image(x), g).values.v; };
    data.Kt = [&](const std::vector<double>& y) {
        Sinogram s(g);
        s.values.v = y;
        return back_project(s, W, H, px).values.v;
    };
    data.prox_conj = [&](std::vector<double>& y, double sigma) {
        for (size_t i = 0; i < ns; ++i) y[i] = w[i] * (y[i] - sigma * t[i]) / (w[i] + sigma);
    };
    prob.blocks.push_back(std::move(data));

    if (p.beta1 > 0.0) {
        DualBlock tvb;
        tvb.dual_size = 2 * np;
        tvb.K = [=](const std::vector<double>& x) {
            Array2 f(H, W);
            f.v = x;
            return pack(grad(f));
        };
        tvb.Kt = [=](const std::vector<double>& z) {
            Array2 d = divergence(unpack(z, H, W));
            for (double& a : d.v) a = -a;
            return d.v;
        };
        const double beta1 = p.beta1;
        tvb.prox_conj = [np, beta1](std::vector<double>& z, double) { project_ball(z, np, beta1); };
        prob.blocks.push_back(std::move(tvb));
    }

    // Linearized directional term: b2 |c + Kx|_{2,1}, c = J0 - K u.
    std::unique_ptr<JxOperator> Kop;
    std::vector<double> c;
    if (p.beta2 > 0.0) {
        Kop = std::make_unique<JxOperator>(u, v, p);
        c = pack(Kop->base_value());
        const std::vector<double> ku0 = pack(Kop->apply(u.values));
        for (size_t i = 0; i < c.size(); ++i) c[i] -= ku0[i];

        DualBlock dir;
        dir.dual_size = 2 * ns;
        const JxOperator* K = Kop.get();
        dir.K = [K, H, W](const std::vector<double>& x) {
            Array2 f(H, W);
            f.v = x;
            return pack(K->apply(f));
        };
        const int na = g.angle_count(), nd = g.detector_count;
        dir.Kt = [K, na, nd](const std::vector<double>& z) { return K->adjoint(unpack(z, na, nd)).v; };
        const double beta2 = p.beta2;
        const std::vector<double>* cp = &c;
        dir.prox_conj = [ns, beta2, cp](std::vector<double>& z, double sigma) {
            for (size_t i = 0; i < z.size(); ++i) z[i] += sigma * (*cp)[i];
            project_ball(z, ns, beta2);
        };
        prob.blocks.push_back(std::move(dir));
    }

    const std::vector<double>& u0 = u.values.v;
    prob.prox_primal = [&u0, tau_x](std::vector<double>& x, double tau) {
        const double a = 2.0 * tau * tau_x;
        for (size_t i = 0; i < x.size(); ++i) x[i] = std::max(0.0, (x[i] + a * u0[i]) / (1.0 + a));
    };

    prob.objective = [&](const std::vector<double>& x) {
        double f = 0.0;
        const std::vector<double> rx = forward_project(to_image(x), g).values.v;
        for (size_t i = 0; i < ns; ++i) {
            const double e = rx[i] - t[i];
            f += 0.5 * w[i] * e * e;
        }
        Array2 xa(H, W);
        xa.v = x;
        f += p.beta1 * tv(xa);
        for (size_t i = 0; i < np; ++i) {
            const double d = x[i] - u0[i];
            f += tau_x * d * d;
        }
        if (Kop) {
            const std::vector<double> kx = pack(Kop->apply(xa));
            for (size_t i = 0; i < ns; ++i)
                f += p.beta2 * std::hypot(c[i] + kx[i], c[i + ns] + kx[i + ns]);
        }
        return f;
    };

    PdhgResult res = pdhg_solve(prob, &u0, usable(warm, prob));
    if (warm) warm->duals = std::move(res.duals);
    if (inner_iters) *inner_iters = res.iters;
    return to_image(res.x);
}

Sinogram y_step(const Image& u, const Sinogram& v_prev, const Sinogram& b, const SampleMask& mask,
                const JointParams& p, double tau_y, InnerWarm* warm, int* inner_iters) {
    p.validate();
    const ProjectionGeometry g = b.geometry;
    const int na = g.angle_count(), nd = g.detector_count;
    const size_t ns = b.values.size();

    const Sinogram ru = forward_project(u, g);
    TensorField A;
    if (p.beta2 > 0.0) A = anisotropy_tensor(ru.values, p.anisotropy());

    // Pointwise quadratic coefficients: q(v) = a/2 v^2 - r v + const.
    std::vector<double> qa(ns), qr(ns);
    for (size_t i = 0; i < ns; ++i) {
        const double m = mask.flags.v[i];
        const double wp = p.alpha1 * (1.0 - m), wd = p.alpha3 * m;
        qa[i] = wp + wd + 2.0 * tau_y;
        qr[i] = wp * ru.values.v[i] + wd * b.values.v[i] + 2.0 * tau_y * v_prev.values.v[i];
    }

    PdhgProblem prob;
    prob.primal_size = ns;
    prob.max_iters = p.inner_iters;
    prob.tol = p.inner_tol;

    if (p.beta2 > 0.0) {
        DualBlock dir;
        dir.dual_size = 2 * ns;
        const TensorField* Ap = &A;
        dir.K = [Ap, na, nd](const std::vector<double>& x) {
            Array2 f(na, nd);
            f.v = x;
            return pack(apply_tensor(*Ap, grad(f)));
        };
        dir.Kt = [Ap, na, nd](const std::vector<double>& z) {
            Array2 d = divergence(apply_tensor(*Ap, unpack(z, na, nd)));
            for (double& a : d.v) a = -a;
            return d.v;
        };
        const double beta2 = p.beta2;
        dir.prox_conj = [ns, beta2](std::vector<double>& z, double) { project_ball(z, ns, beta2); };
        prob.blocks.push_back(std::move(dir));
    }

    prob.prox_primal = [&](std::vector<double>& x, double tau) {
        for (size_t i = 0; i < ns; ++i) x[i] = (x[i] / tau + qr[i]) / (1.0 / tau + qa[i]);
    };

    prob.objective = [&](const std::vector<double>& x) {
        double f = 0.0;
        for (size_t i = 0; i < ns; ++i) {
            const double m = mask.flags.v[i];
            const double ep = x[i] - ru.values.v[i];
            const double ed = x[i] - b.values.v[i];
            const double es = x[i] - v_prev.values.v[i];
            f += 0.5 * p.alpha1 * (1.0 - m) * ep * ep + 0.5 * p.alpha3 * m * ed * ed + tau_y * es * es;
        }
        if (p.beta2 > 0.0) {
            Array2 xa(na, nd);
            xa.v = x;
            f += p.beta2 * dtv(xa, A);
        }
        return f;
    };

    PdhgResult res = pdhg_solve(prob, &v_prev.values.v, usable(warm, prob));
    if (warm) warm->duals = std::move(res.duals);
    if (inner_iters) *inner_iters = res.iters;
    Sinogram out(g);
    out.values.v = res.x;
    return out;
}

namespace {

double step_norm_sq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void write_trace_csv(const std::string& path, const JointState& st) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open trace file: " + path);
    f.precision(17);
    f << "iteration,pairing,data_u,data_v,tv_u,dtv_v,total,du_sq,dv_sq,tau_x,tau_y,inner_x,inner_y\n";
    for (size_t n = 0; n < st.energy_trace.size(); ++n) {
        const EnergyTerms& e = st.energy_trace[n];
        f << n << ',' << e.pairing << ',' << e.data_u << ',' << e.data_v << ',' << e.tv_u << ','
          << e.dtv_v << ',' << e.total();
        if (n == 0)
            f << ",0,0,0,0,0,0\n";
        else
            f << ',' << st.du_sq[n - 1] << ',' << st.dv_sq[n - 1] << ',' << st.tau_x_trace[n - 1] << ','
              << st.tau_y_trace[n - 1] << ',' << st.inner_iters_x[n - 1] << ',' << st.inner_iters_y[n - 1]
              << '\n';
    }
}

}  // namespace

JointState run_joint(const Image& u0, const Sinogram& v0, const Sinogram& b, const SampleMask& mask,
                     const JointParams& p, const JointRunOptions& opt) {
    p.validate();
    JointState st;
    st.u = u0;
    st.v = v0;
    st.energy_trace.push_back(energy(u0, v0, b, mask, p));

    const double e0 = st.energy_trace.front().total();
    const double slack = 1e-8 * std::fabs(e0);
    const double tau_dec = std::min(p.tau_x, p.tau_y);
    double tau_x = p.tau_x, tau_y = p.tau_y;
    int good_x = 0, good_y = 0;
    InnerWarm warm_x, warm_y;

    for (int n = 0; n < p.iters; ++n) {
        const double e_cur = st.energy_trace.back().total();

        // u half-step with sufficient-decrease backtracking.
        Image u_new = st.u;
        double du2 = 0.0;
        int itx = 0;
        bool accepted = false;
        for (int attempt = 0; attempt <= 10; ++attempt) {
            Image cand = x_step(st.u, st.v, b, mask, p, tau_x, &warm_x, &itx);
            const double d2 = step_norm_sq(cand.values.v, st.u.values.v);
            const double e_cand = energy(cand, st.v, b, mask, p).total();
            if (e_cand <= e_cur - tau_dec * d2 + slack) {
                u_new = std::move(cand);
                du2 = d2;
                accepted = true;
                if (e_cur - e_cand - tau_dec * d2 > 10.0 * slack) {
                    if (++good_x >= 5) {
                        tau_x = std::max(p.tau_x, 0.5 * tau_x);
                        good_x = 0;
                    }
                } else {
                    good_x = 0;
                }
                break;
            }
            tau_x *= 2.0;
            good_x = 0;
        }
        if (!accepted) du2 = 0.0;  // keep the previous iterate; descent holds trivially
        const EnergyTerms e_mid = energy(u_new, st.v, b, mask, p);

        // v half-step.
        Sinogram v_new = st.v;
        double dv2 = 0.0;
        int ity = 0;
        accepted = false;
        for (int attempt = 0; attempt <= 10; ++attempt) {
            Sinogram cand = y_step(u_new, st.v, b, mask, p, tau_y, &warm_y, &ity);
            const double d2 = step_norm_sq(cand.values.v, st.v.values.v);
            const double e_cand = energy(u_new, cand, b, mask, p).total();
            if (e_cand <= e_mid.total() - tau_dec * d2 + slack) {
                v_new = std::move(cand);
                dv2 = d2;
                accepted = true;
                if (e_mid.total() - e_cand - tau_dec * d2 > 10.0 * slack) {
                    if (++good_y >= 5) {
                        tau_y = std::max(p.tau_y, 0.5 * tau_y);
                        good_y = 0;
                    }
                } else {
                    good_y = 0;
                }
                break;
            }
            tau_y *= 2.0;
            good_y = 0;
        }
        if (!accepted) dv2 = 0.0;

        st.u = std::move(u_new);
        st.v = std::move(v_new);
        st.energy_trace.push_back(energy(st.u, st.v, b, mask, p));
        st.du_sq.push_back(du2);
        st.dv_sq.push_back(dv2);
        st.tau_x_trace.push_back(tau_x);
        st.tau_y_trace.push_back(tau_y);
        st.inner_iters_x.push_back(itx);
        st.inner_iters_y.push_back(ity);
        st.iteration = n + 1;

        if (opt.checkpoint_every > 0 && !opt.checkpoint_dir.empty() && (n + 1) % opt.checkpoint_every == 0) {
            const std::string tag = std::to_string(n + 1);
            write_binary(opt.checkpoint_dir + "/u_" + tag + ".bin", st.u.values);
            write_binary(opt.checkpoint_dir + "/v_" + tag + ".bin", st.v.values);
        }
    }

    if (!opt.trace_csv.empty()) write_trace_csv(opt.trace_csv, st);
    return st;
}

double slope(const std::function<double(const std::vector<double>&)>& F, const std::vector<double>& x,
             const std::vector<double>& radii, int n_dirs, uint64_t seed) {
    const size_t n = x.size();
    std::vector<std::vector<double>> dirs;
    for (size_t i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
            std::vector<double> d(n, 0.0);
            d[i] = s;
            dirs.push_back(std::move(d));
        }
    uint64_t ctr = 0;
    for (int k = 0; k < n_dirs; ++k) {
        std::vector<double> d(n);
        double norm2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            d[i] = gaussian_sample(seed, ctr++);
            norm2 += d[i] * d[i];
        }
        if (norm2 <= 0.0) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& a : d) a *= inv;
        dirs.push_back(std::move(d));
    }

    const double f0 = F(x);
    double smallest = radii.empty() ? 1e-5 : radii[0];
    for (double r : radii) smallest = std::min(smallest, r);

    double best = 0.0;
    std::vector<double> xp(n);
    for (const auto& d : dirs) {
        for (size_t i = 0; i < n; ++i) xp[i] = x[i] + smallest * d[i];
        best = std::max(best, (f0 - F(xp)) / smallest);
    }
    return std::max(0.0, best);
}

double toy_energy(double x, double y) { return std::max(x, y) + x * x + y * y; }

namespace {

// argmin over x of max(x, y) + x^2 + tau (x - x0)^2, exactly.
double toy_axis_min(double y, double x0, double tau) {
    // Branch x >= y: objective x + x^2 + tau (x - x0)^2.
    const double xa = std::max(y, (2.0 * tau * x0 - 1.0) / (2.0 + 2.0 * tau));
    const double fa = xa + xa * xa + tau * (xa - x0) * (xa - x0);
    // Branch x <= y: objective y + x^2 + tau (x - x0)^2.
    const double xb = std::min(y, 2.0 * tau * x0 / (2.0 + 2.0 * tau));
    const double fb = y + xb * xb + tau * (xb - x0) * (xb - x0);
    return fb <= fa ? xb : xa;
}

}  // namespace

ToyState run_toy_2axis(double x0, double y0, double tau_x, double tau_y, int iters) {
    if (tau_x < 0.0 || tau_y < 0.0) throw ConfigError("run_toy_2axis: prox weights must be >= 0");
    ToyState st;
    st.x = x0;
    st.y = y0;
    st.trace.emplace_back(x0, y0);
    for (int n = 0; n < iters; ++n) {
        st.x = toy_axis_min(st.y, st.x, tau_x);
        st.y = toy_axis_min(st.x, st.y, tau_y);
        st.trace.emplace_back(st.x, st.y);
    }
    return st;
}

ConeBoundReport cone_bound_check(const std::function<double(const std::vector<double>&)>& E,
                                 const std::vector<double>& x_star, double tau_x, int samples, double radius,
                                 uint64_t seed) {
    ConeBoundReport rep;
    rep.samples = samples;
    const double e_star = E(x_star);
    const double slack = 1e-6 * std::fabs(e_star);
    const size_t n = x_star.size();
    uint64_t ctr = 0;
    std::vector<double> x(n);
    for (int s = 0; s < samples; ++s) {
        double norm2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            x[i] = gaussian_sample(seed, ctr++);
            norm2 += x[i] * x[i];
        }
        const double scale = norm2 > 0.0 ? radius / std::sqrt(norm2) : 0.0;
        double dist2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            x[i] = x_star[i] + scale * x[i];
            const double d = x[i] - x_star[i];
            dist2 += d * d;
        }
        const double margin = E(x) + 2.0 * tau_x * dist2 + slack - e_star;
        if (margin < 0.0) ++rep.violations;
        rep.worst_margin = std::min(rep.worst_margin, margin - slack);
    }
    return rep;
}

}  // namespace wedgefill
