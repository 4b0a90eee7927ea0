#include "wedgefill/pdhg.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace wedgefill {

namespace {

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double estimate_op_norm(const PdhgProblem& prob) {
    if (prob.blocks.empty()) return 0.0;
    std::vector<double> x(prob.primal_size);
    for (size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + 1e-3 * std::sin(0.7 * static_cast<double>(i));
    double lambda = 0.0;
    for (int it = 0; it < prob.power_iters; ++it) {
        const double n = vec_norm(x);
        if (n == 0.0) return 0.0;
        for (double& a : x) a /= n;
        std::vector<double> y(prob.primal_size, 0.0);
        for (const DualBlock& b : prob.blocks) {
            const std::vector<double> z = b.Kt(b.K(x));
            for (size_t i = 0; i < y.size(); ++i) y[i] += z[i];
        }
        lambda = 0.0;
        for (size_t i = 0; i < x.size(); ++i) lambda += x[i] * y[i];
        x.swap(y);
    }
    return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace

PdhgResult pdhg_solve(const PdhgProblem& prob, const std::vector<double>* warm_x,
                      const std::vector<std::vector<double>>* warm_duals) {
    PdhgResult res;
    res.op_norm = estimate_op_norm(prob);

    double tau, sigma;
    if (prob.blocks.empty() || res.op_norm == 0.0) {
        // Pure prox problem: a huge primal step makes the prox iteration
        // contract to the minimizer almost immediately.
        tau = 1e12;
        sigma = 0.0;
    } else {
        const double L = res.op_norm * 1.0001;
        tau = 0.999 / (L * std::sqrt(prob.step_ratio));
        sigma = prob.step_ratio * tau;
    }

    std::vector<double> x = warm_x ? *warm_x : std::vector<double>(prob.primal_size, 0.0);
    std::vector<double> x_bar = x;
    std::vector<std::vector<double>> y(prob.blocks.size());
    for (size_t i = 0; i < y.size(); ++i)
        y[i] = warm_duals && warm_duals->size() == y.size() ? (*warm_duals)[i]
                                                            : std::vector<double>(prob.blocks[i].dual_size, 0.0);

    const double f0 = prob.objective ? prob.objective(x) : 0.0;
    double window_obj = f0;
    res.objective_trace.push_back(f0);
    const double diverge_limit = 1e3 * (std::fabs(f0) + 1.0);

    std::vector<double> x_prev(prob.primal_size);
    for (int it = 1; it <= prob.max_iters; ++it) {
        for (size_t bi = 0; bi < prob.blocks.size(); ++bi) {
            const DualBlock& b = prob.blocks[bi];
            const std::vector<double> kx = b.K(x_bar);
            for (size_t i = 0; i < y[bi].size(); ++i) y[bi][i] += sigma * kx[i];
            b.prox_conj(y[bi], sigma);
        }
        x_prev = x;
        std::vector<double> kty(prob.primal_size, 0.0);
        for (size_t bi = 0; bi < prob.blocks.size(); ++bi) {
            const std::vector<double> z = prob.blocks[bi].Kt(y[bi]);
            for (size_t i = 0; i < kty.size(); ++i) kty[i] += z[i];
        }
        for (size_t i = 0; i < x.size(); ++i) x[i] -= tau * kty[i];
        if (prob.prox_primal) prob.prox_primal(x, tau);
        for (size_t i = 0; i < x.size(); ++i) x_bar[i] = 2.0 * x[i] - x_prev[i];

        res.iters = it;
        if (it % 10 == 0 || it == prob.max_iters) {
            const double f = prob.objective ? prob.objective(x) : 0.0;
            if (std::getenv("WF_PDHG_DEBUG")) std::fprintf(stderr, "pdhg it=%d f=%.6f\n", it, f);
            res.objective_trace.push_back(f);
            if (f > diverge_limit)
                throw SolverError("pdhg: objective diverged (f=" + std::to_string(f) +
                                  ", f0=" + std::to_string(f0) + ", iter=" + std::to_string(it) + ")");
            const double slack = 1e-8 * (std::fabs(f0) + 1.0);
            if (f > window_obj + slack) res.monotone_ok = false;
            const double rel_change = std::fabs(window_obj - f) / (std::fabs(window_obj) + 1e-30);
            window_obj = f;
            if (it >= 20 && rel_change <= prob.tol) {
                res.converged = true;
                break;
            }
        }
    }
    res.x = std::move(x);
    res.duals = std::move(y);
    res.objective = prob.objective ? prob.objective(res.x) : 0.0;
    return res;
}

}  // namespace wedgefill
