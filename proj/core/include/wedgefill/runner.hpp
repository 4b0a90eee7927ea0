#pragma once

#include <map>
#include <string>
#include <vector>

#include "wedgefill/config.hpp"
#include "wedgefill/joint_energy.hpp"
#include "wedgefill/types.hpp"

namespace wedgefill {

/// Resolved experiment description: phantom, acquisition, noise, solver
/// parameters and output location.
struct ExperimentConfig {
    std::string phantom = "shepp";  // rings | shepp | particle
    int size = 64;
    std::vector<double> ring_radii;        // rings phantom only; empty = defaults
    std::vector<double> ring_intensities;

    int n_angles = 180;
    double angle_start = 0.0;
    double angle_step = 1.0;
    int detector_count = 0;  // 0 = derived from size
    double detector_spacing = 1.0;
    double wedge_start_deg = 120.0;  // first missing view angle
    double wedge_width_deg = 60.0;   // 0 disables the wedge

    double noise_level = 0.05;
    uint64_t seed = 0;

    JointParams joint;
    double tv_lambda = 3e-5;
    int tv_iters = 500;
    int sirt_iters = 100;

    std::string out_dir = "out";

    void validate() const;
};

/// Reads an ExperimentConfig from parsed key=value data; unknown keys
/// are rejected so typos fail loudly.
ExperimentConfig resolve_experiment(const Config& cfg);

/// Synthesized dataset shared by all methods of one experiment.
struct Dataset {
    Image phantom;
    ProjectionGeometry geometry;
    SampleMask mask;
    Sinogram clean;
    Sinogram data;  // noisy, masked
};

Dataset synthesize(const ExperimentConfig& cfg);

/// Full pipeline: dataset, TV initialization, joint solve, artifacts
/// (binary fields, CSVs, PGM renders, metrics key=value file). Returns
/// the metrics that were written.
std::map<std::string, double> run_experiment(const ExperimentConfig& cfg);

struct MethodResult {
    std::string name;
    double psnr_db = 0.0;
    double ssim_val = 0.0;
};

struct CompareTable {
    std::vector<MethodResult> rows;  // fbp, sirt, tv, joint
};

/// Runs the four methods on one dataset; writes the summary table,
/// reconstructions and their thresholded versions.
CompareTable compare_methods(const ExperimentConfig& cfg);

/// Two-level quantization at the midpoint of the two dominant gray
/// levels (1D two-means); idempotent.
Array2 threshold_midpoint(const Array2& img);

}  // namespace wedgefill
