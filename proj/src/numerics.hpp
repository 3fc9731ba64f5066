// Internal helpers shared by the translation units; not installed.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace chdis::detail {

// (1 - e^-d)/d: exact average of the exponential kernel across width d.
inline double kernel_avg(double d) {
    if (d < 1e-12) return 1.0 - 0.5 * d;
    return -std::expm1(-d) / d;
}

// Index i with xs[i] <= x < xs[i+1]; clamped to [0, n-2]. xs nondecreasing.
inline std::size_t cell_index(std::span<const double> xs, double x) {
    if (x <= xs.front()) return 0;
    if (x >= xs.back()) return xs.size() - 2;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    return static_cast<std::size_t>(it - xs.begin()) - 1;
}

// Piecewise-linear interpolation with constant extension outside the grid.
inline double interp_at(std::span<const double> xs, std::span<const double> ys,
                        double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const std::size_t i = cell_index(xs, x);
    const double dx = xs[i + 1] - xs[i];
    if (!(dx > 0.0)) return ys[i];
    return ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / dx;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    return v[m];
}

// Trapezoid mean of the squares of two nodal values; the discrete stand-in
// for U^2 on a cell, chosen so the compatibility identity is preserved
// exactly by the semi-discrete flow.
inline double cell_usq(double ul, double ur) {
    return 0.5 * (ul * ul + ur * ur);
}

}  // namespace chdis::detail
