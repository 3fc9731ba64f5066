#include "chdis/presets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chdis {

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (!(b > a) || n < 2)
        throw std::invalid_argument("preset grid needs b > a and n >= 2");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

// Moves the node nearest to `target` onto it. Kinks of the initial profile
// travel along characteristics, so a kink placed on a node stays on a node;
// resolving it here keeps interpolation second order for the whole run.
void snap_node(std::vector<double>& x, double target) {
    const auto it = std::min_element(x.begin(), x.end(), [target](double a, double b) {
        return std::abs(a - target) < std::abs(b - target);
    });
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0 || i + 1 == x.size()) return;
    if (target > x[i - 1] && target < x[i + 1]) x[i] = target;
}

}  // namespace

EulerianState make_zero(double a, double b, std::size_t n) {
    EulerianState s;
    s.x = linspace(a, b, n);
    s.u.assign(n, 0.0);
    return s;
}

EulerianState make_peakon(double c, double a, double b, std::size_t n) {
    EulerianState s;
    s.x = linspace(a, b, n);
    snap_node(s.x, 0.0);
    s.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.u[i] = c * std::exp(-std::abs(s.x[i]));
    return s;
}

EulerianState make_peakon_antipeakon(const PeakonAntipeakonParams& params,
                                     double a, double b, std::size_t n) {
    EulerianState s;
    s.x = linspace(a, b, n);
    snap_node(s.x, params.q0);
    snap_node(s.x, -params.q0);
    s.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.u[i] = exact_u(params, 0.0, s.x[i]);
    return s;
}

}  // namespace chdis
