#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wedgefill/array2.hpp"

namespace wedgefill {

/// Raised for invalid configuration (bad geometry, bad parameter values,
/// malformed config files). Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an iterative solver diverges or violates its descent
/// contract beyond tolerance. Maps to CLI exit code 3.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parallel-beam acquisition description. Angles are view angles in
/// degrees, strictly increasing within one 180-degree period; a
/// measurement at 180 degrees duplicates the one at 0.
struct ProjectionGeometry {
    std::vector<double> angles_deg;
    int detector_count = 0;
    double detector_spacing = 1.0;
    double detector_offset = 0.0;

    int angle_count() const { return static_cast<int>(angles_deg.size()); }
    double angle_rad(int i) const;
    /// Signed offset of detector bin center k from the rotation center.
    double bin_offset(int k) const { return (k - 0.5 * (detector_count - 1)) * detector_spacing + detector_offset; }
    void validate() const;
};

/// 2D scalar density field on a pixel grid, centered at the origin.
struct Image {
    int width = 0;
    int height = 0;
    double pixel_size = 1.0;
    Array2 values;  // rows = height, cols = width

    Image() = default;
    Image(int w, int h, double px = 1.0) : width(w), height(h), pixel_size(px), values(h, w) {}
    void validate() const;
};

/// Line integrals indexed by (angle, detector offset); rows = angles.
struct Sinogram {
    ProjectionGeometry geometry;
    Array2 values;

    Sinogram() = default;
    explicit Sinogram(const ProjectionGeometry& g) : geometry(g), values(g.angle_count(), g.detector_count) {}
    void validate() const;
};

/// Boolean field over the sinogram domain marking the acquired region.
struct SampleMask {
    ProjectionGeometry geometry;
    Array2 flags;  // 0 or 1

    SampleMask() = default;
    explicit SampleMask(const ProjectionGeometry& g) : geometry(g), flags(g.angle_count(), g.detector_count) {}
    void validate() const;
};

/// Evenly spaced view angles: start, start+step, ...
ProjectionGeometry uniform_geometry(int n_angles, double start_deg, double step_deg, int detector_count,
                                    double detector_spacing = 1.0);

/// Detector bin count sized to cover the grid diagonal with a small
/// margin; yields 287 bins for a 200x200 grid.
int default_detector_count(int width, int height);

}  // namespace wedgefill
