#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace wedgefill {

/// Dense row-major 2D array of doubles. The workhorse container for
/// images, sinograms, masks and per-pixel tensor planes.
struct Array2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Array2() = default;
    Array2(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

    size_t size() const { return v.size(); }
    bool same_shape(const Array2& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }
};

inline double dot(const Array2& a, const Array2& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
}

inline double norm_sq(const Array2& a) { return dot(a, a); }
inline double norm(const Array2& a) { return std::sqrt(norm_sq(a)); }

inline double sum(const Array2& a) {
    double s = 0.0;
    for (double x : a.v) s += x;
    return s;
}

inline double max_abs(const Array2& a) {
    double m = 0.0;
    for (double x : a.v) m = std::max(m, std::fabs(x));
    return m;
}

inline double max_val(const Array2& a) {
    double m = -HUGE_VAL;
    for (double x : a.v) m = std::max(m, x);
    return m;
}

inline double min_val(const Array2& a) {
    double m = HUGE_VAL;
    for (double x : a.v) m = std::min(m, x);
    return m;
}

}  // namespace wedgefill
