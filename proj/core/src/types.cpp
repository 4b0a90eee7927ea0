#include "wedgefill/types.hpp"

#include <cmath>

namespace wedgefill {

double ProjectionGeometry::angle_rad(int i) const { return angles_deg[i] * M_PI / 180.0; }

void ProjectionGeometry::validate() const {
    if (angles_deg.empty()) throw ConfigError("geometry: no angles");
    if (detector_count < 1) throw ConfigError("geometry: detector_count must be >= 1");
    if (detector_spacing <= 0.0) throw ConfigError("geometry: detector_spacing must be > 0");
    for (size_t i = 0; i < angles_deg.size(); ++i) {
        if (angles_deg[i] < 0.0 || angles_deg[i] >= 180.0)
            throw ConfigError("geometry: angles must lie in [0, 180)");
        if (i > 0 && angles_deg[i] <= angles_deg[i - 1])
            throw ConfigError("geometry: angles must be strictly increasing");
    }
}

void Image::validate() const {
    if (width < 1 || height < 1) throw ConfigError("image: width and height must be >= 1");
    if (values.rows != height || values.cols != width) throw ConfigError("image: value array shape mismatch");
    if (!values.all_finite()) throw ConfigError("image: non-finite values");
}

void Sinogram::validate() const {
    geometry.validate();
    if (values.rows != geometry.angle_count() || values.cols != geometry.detector_count)
        throw ConfigError("sinogram: value array shape mismatch");
    if (!values.all_finite()) throw ConfigError("sinogram: non-finite values");
}

void SampleMask::validate() const {
    geometry.validate();
    if (flags.rows != geometry.angle_count() || flags.cols != geometry.detector_count)
        throw ConfigError("mask: flag array shape mismatch");
    bool any = false;
    for (double f : flags.v) {
        if (f != 0.0 && f != 1.0) throw ConfigError("mask: flags must be 0 or 1");
        any = any || f == 1.0;
    }
    if (!any) throw ConfigError("mask: at least one entry must be set");
}

ProjectionGeometry uniform_geometry(int n_angles, double start_deg, double step_deg, int detector_count,
                                    double detector_spacing) {
    ProjectionGeometry g;
    g.angles_deg.resize(n_angles);
    for (int i = 0; i < n_angles; ++i) g.angles_deg[i] = start_deg + i * step_deg;
    g.detector_count = detector_count;
    g.detector_spacing = detector_spacing;
    g.validate();
    return g;
}

int default_detector_count(int width, int height) {
    return static_cast<int>(std::ceil(std::sqrt(2.0) * std::max(width, height))) + 4;
}

}  // namespace wedgefill
