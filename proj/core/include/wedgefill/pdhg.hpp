#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wedgefill/types.hpp"

namespace wedgefill {

/// One dual block of a saddle-point problem
///   min_x G(x) + sum_i F_i(K_i x).
/// K/Kt must be exact transposes of each other; prox_conj applies the
/// proximal map of F_i^* in place.
struct DualBlock {
    size_t dual_size = 0;
    std::function<std::vector<double>(const std::vector<double>&)> K;
    std::function<std::vector<double>(const std::vector<double>&)> Kt;
    std::function<void(std::vector<double>&, double sigma)> prox_conj;
};

struct PdhgProblem {
    size_t primal_size = 0;
    std::vector<DualBlock> blocks;
    /// Proximal map of G, in place: x <- prox_{tau G}(x).
    std::function<void(std::vector<double>&, double tau)> prox_primal;
    /// Full primal objective, used for the stopping rule and the
    /// monotonicity diagnostic.
    std::function<double(const std::vector<double>&)> objective;

    int max_iters = 200;
    double tol = 1e-6;       // relative objective change over a 10-iteration window
    int power_iters = 20;    // ||K|| estimation budget
    double step_ratio = 1.0; // sigma / tau
};

struct PdhgResult {
    std::vector<double> x;
    std::vector<std::vector<double>> duals;
    int iters = 0;
    bool converged = false;
    bool monotone_ok = true;  // objective non-increasing per 10-iteration window
    double objective = 0.0;
    double op_norm = 0.0;
    std::vector<double> objective_trace;  // sampled every 10 iterations
};

/// Chambolle-Pock primal-dual iteration with over-relaxation theta = 1.
/// Steps satisfy sigma * tau * ||K||^2 <= 1 with ||K|| from power
/// iteration. Throws SolverError on divergence (objective growth beyond
/// 1e3x its starting magnitude).
PdhgResult pdhg_solve(const PdhgProblem& prob, const std::vector<double>* warm_x = nullptr,
                      const std::vector<std::vector<double>>* warm_duals = nullptr);

}  // namespace wedgefill
