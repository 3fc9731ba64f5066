#include "chdis/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chdis {

namespace {

void check_structure(const EulerianState& s) {
    if (s.x.size() < 2)
        throw std::invalid_argument("EulerianState: need at least two nodes");
    if (s.u.size() != s.x.size())
        throw std::invalid_argument("EulerianState: x and u length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.u[i]))
            throw std::invalid_argument("EulerianState: non-finite sample at node " +
                                        std::to_string(i));
        if (i > 0 && !(s.x[i] > s.x[i - 1]))
            throw std::invalid_argument("EulerianState: x not strictly increasing at node " +
                                        std::to_string(i));
    }
    for (const Atom& a : s.atoms) {
        if (!std::isfinite(a.pos) || !std::isfinite(a.mass) || a.mass <= 0.0)
            throw std::invalid_argument("EulerianState: atom must have finite position and positive mass");
    }
}

// Per-cell contributions of the ac energy density u^2 + u_x^2: trapezoid in
// u^2 plus the exact square of the constant cell slope.
double cell_energy(const EulerianState& s, std::size_t i) {
    const double dx = s.x[i + 1] - s.x[i];
    const double slope = (s.u[i + 1] - s.u[i]) / dx;
    return 0.5 * (s.u[i] * s.u[i] + s.u[i + 1] * s.u[i + 1]) * dx + slope * slope * dx;
}

// Midpoint value of 2u^2 + u_x^2 on cell i (integrand of the pressure kernel).
double cell_w(const EulerianState& s, std::size_t i) {
    const double dx = s.x[i + 1] - s.x[i];
    const double um = 0.5 * (s.u[i] + s.u[i + 1]);
    const double slope = (s.u[i + 1] - s.u[i]) / dx;
    return 2.0 * um * um + slope * slope;
}

// (1 - e^-d)/d, the exact kernel average across a cell of width d.
double kernel_avg(double d) {
    if (d < 1e-12) return 1.0 - 0.5 * d;
    return -std::expm1(-d) / d;
}

struct ExpScan {
    // A[j]: integral of e^{-(x_j - y)} w(y) over y < x_j;
    // B[j]: integral of e^{-(y - x_j)} w(y) over y > x_j.
    std::vector<double> A, B, w;
};

ExpScan build_scan(const EulerianState& s) {
    const std::size_t n = s.x.size();
    ExpScan scan;
    scan.A.assign(n, 0.0);
    scan.B.assign(n, 0.0);
    scan.w.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) scan.w[i] = cell_w(s, i);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dx = s.x[i + 1] - s.x[i];
        scan.A[i + 1] = scan.A[i] * std::exp(-dx) + scan.w[i] * dx * kernel_avg(dx);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        const double dx = s.x[i + 1] - s.x[i];
        scan.B[i] = scan.B[i + 1] * std::exp(-dx) + scan.w[i] * dx * kernel_avg(dx);
    }
    return scan;
}

}  // namespace

void check_valid(const EulerianState& state, const EulerianCheckOptions& opts) {
    check_structure(state);
    const double lo = std::abs(state.u.front());
    const double hi = std::abs(state.u.back());
    if (lo > opts.decay_tol || hi > opts.decay_tol)
        throw std::invalid_argument(
            "EulerianState: |u| at the boundary nodes exceeds the decay tolerance (" +
            std::to_string(std::max(lo, hi)) + " > " + std::to_string(opts.decay_tol) + ")");
}

double max_forward_slope(const EulerianState& state) {
    check_structure(state);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < state.x.size(); ++i)
        m = std::max(m, (state.u[i + 1] - state.u[i]) / (state.x[i + 1] - state.x[i]));
    return m;
}

std::vector<double> compute_F_at_nodes(const EulerianState& state) {
    check_structure(state);
    std::vector<double> F(state.x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < state.x.size(); ++i)
        F[i + 1] = F[i] + cell_energy(state, i);
    return F;
}

double compute_F(const EulerianState& state, double x) {
    check_structure(state);
    if (std::isnan(x)) throw std::invalid_argument("invalid query point");
    if (x <= state.x.front()) return 0.0;
    std::vector<double> F = compute_F_at_nodes(state);
    if (x >= state.x.back()) return F.back();
    const auto it = std::upper_bound(state.x.begin(), state.x.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - state.x.begin()) - 1;
    const double dx = state.x[i + 1] - state.x[i];
    const double s = (state.u[i + 1] - state.u[i]) / dx;
    const double dxi = x - state.x[i];
    const double u2l = state.u[i] * state.u[i];
    const double u2r = state.u[i + 1] * state.u[i + 1];
    const double u2x = u2l + (u2r - u2l) * dxi / dx;  // trapezoid: u^2 linear per cell
    return F[i] + 0.5 * (u2l + u2x) * dxi + s * s * dxi;
}

double h1_norm(const EulerianState& state) {
    return std::sqrt(compute_F_at_nodes(state).back());
}

double nu_total(const EulerianState& state) {
    double total = compute_F_at_nodes(state).back();
    for (const Atom& a : state.atoms) total += a.mass;
    return total;
}

void compute_p_px_at_nodes(const EulerianState& state,
                           std::span<double> p, std::span<double> px) {
    check_structure(state);
    const std::size_t n = state.x.size();
    if (p.size() != n || px.size() != n)
        throw std::invalid_argument("compute_p_px_at_nodes: output span size mismatch");
    const ExpScan scan = build_scan(state);
    for (std::size_t j = 0; j < n; ++j) {
        p[j] = 0.25 * (scan.A[j] + scan.B[j]);
        px[j] = 0.25 * (scan.B[j] - scan.A[j]);
    }
}

std::pair<double, double> compute_p_px(const EulerianState& state, double x) {
    check_structure(state);
    if (!std::isfinite(x)) throw std::invalid_argument("invalid query point");
    const ExpScan scan = build_scan(state);
    double A, B;
    if (x <= state.x.front()) {
        A = 0.0;
        B = scan.B.front() * std::exp(-(state.x.front() - x));
    } else if (x >= state.x.back()) {
        A = scan.A.back() * std::exp(-(x - state.x.back()));
        B = 0.0;
    } else {
        const auto it = std::upper_bound(state.x.begin(), state.x.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - state.x.begin()) - 1;
        const double dl = x - state.x[i];
        const double dr = state.x[i + 1] - x;
        A = scan.A[i] * std::exp(-dl) + scan.w[i] * dl * kernel_avg(dl);
        B = scan.B[i + 1] * std::exp(-dr) + scan.w[i] * dr * kernel_avg(dr);
    }
    return {0.25 * (A + B), 0.25 * (B - A)};
}

}  // namespace chdis
