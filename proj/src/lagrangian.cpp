#include "chdis/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "numerics.hpp"

namespace chdis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_structure(const LagrangianState& s) {
    const std::size_t n = s.xi.size();
    if (n < 2) throw std::invalid_argument("LagrangianState: need at least two nodes");
    if (s.y.size() != n || s.U.size() != n || s.V.size() != n || s.H.size() != n)
        throw std::invalid_argument("LagrangianState: nodal array length mismatch");
    const std::size_t c = n - 1;
    if (s.y_xi.size() != c || s.U_xi.size() != c || s.V_xi.size() != c ||
        s.H_xi.size() != c || s.tau.size() != c || s.broken.size() != c)
        throw std::invalid_argument("LagrangianState: cell array length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.xi[i]))
            throw std::invalid_argument("LagrangianState: non-finite label");
        if (i > 0 && !(s.xi[i] > s.xi[i - 1]))
            throw std::invalid_argument("LagrangianState: xi not strictly increasing at node " +
                                        std::to_string(i));
    }
}

void check_relabel_structure(const RelabelFunction& f) {
    if (f.xi.size() < 2 || f.f.size() != f.xi.size())
        throw std::invalid_argument("RelabelFunction: malformed sample arrays");
    for (std::size_t i = 0; i < f.xi.size(); ++i) {
        if (!std::isfinite(f.xi[i]) || !std::isfinite(f.f[i]))
            throw std::invalid_argument("RelabelFunction: non-finite sample");
        if (i > 0 && !(f.xi[i] > f.xi[i - 1]))
            throw std::invalid_argument("RelabelFunction: grid not strictly increasing");
    }
}

}  // namespace

DiagnosticsReport validate(const LagrangianState& s,
                           const LagrangianValidateOptions& opts) {
    check_structure(s);
    const std::size_t cells = s.cells();
    const double hscale = 1.0 + std::abs(s.H.back());
    DiagnosticsReport report;

    {
        CheckResult r{.name = "lag.y_xi_nonneg", .tolerance = opts.tol};
        for (std::size_t c = 0; c < cells; ++c) {
            const double v = -s.y_xi[c];
            if (v > r.residual) { r.residual = v; r.loc_x = s.xi[c]; }
        }
        r.pass = r.residual <= r.tolerance;
        report.add(std::move(r));
    }
    {
        // H_xi >= V_xi >= 0
        CheckResult r{.name = "lag.energy_order", .tolerance = opts.tol * hscale};
        for (std::size_t c = 0; c < cells; ++c) {
            const double v = std::max(-s.V_xi[c], s.V_xi[c] - s.H_xi[c]);
            if (v > r.residual) { r.residual = v; r.loc_x = s.xi[c]; }
        }
        r.pass = r.residual <= r.tolerance;
        report.add(std::move(r));
    }
    {
        CheckResult r{.name = "lag.c_floor", .tolerance = 0.0};
        double mn = kInf;
        for (std::size_t c = 0; c < cells; ++c) {
            const double v = s.y_xi[c] + s.H_xi[c];
            if (v < mn) { mn = v; r.loc_x = s.xi[c]; }
        }
        r.residual = std::max(0.0, opts.c_floor - mn);
        r.pass = r.residual <= 0.0;
        r.note = "min y_xi+H_xi = " + std::to_string(mn);
        report.add(std::move(r));
    }
    {
        // U^2 y_xi^2 + U_xi^2 = y_xi V_xi, residual scaled by 1 + y_xi H_xi.
        // U^2 on a cell is the trapezoid mean of the nodal squares.
        CheckResult r{.name = "lag.c2_identity", .tolerance = opts.tol};
        for (std::size_t c = 0; c < cells; ++c) {
            const double usq = detail::cell_usq(s.U[c], s.U[c + 1]);
            const double lhs = usq * s.y_xi[c] * s.y_xi[c] + s.U_xi[c] * s.U_xi[c];
            const double v = std::abs(lhs - s.y_xi[c] * s.V_xi[c]) /
                             (1.0 + s.y_xi[c] * s.H_xi[c]);
            if (v > r.residual) { r.residual = v; r.loc_x = s.xi[c]; }
        }
        r.pass = r.residual <= r.tolerance;
        report.add(std::move(r));
    }
    {
        // y_xi = 0 forces V_xi = 0
        CheckResult r{.name = "lag.vanishing_energy", .tolerance = opts.tol * hscale};
        for (std::size_t c = 0; c < cells; ++c) {
            if (s.y_xi[c] <= opts.tol && s.V_xi[c] > r.residual) {
                r.residual = s.V_xi[c];
                r.loc_x = s.xi[c];
            }
        }
        r.pass = r.residual <= r.tolerance;
        report.add(std::move(r));
    }
    {
        CheckResult r{.name = "lag.monotone_VH", .tolerance = opts.tol * hscale};
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double v = std::max(s.V[i] - s.V[i + 1], s.H[i] - s.H[i + 1]);
            if (v > r.residual) { r.residual = v; r.loc_x = s.xi[i]; }
        }
        r.pass = r.residual <= r.tolerance;
        report.add(std::move(r));
    }
    {
        CheckResult r{.name = "lag.left_boundary", .tolerance = opts.tol * hscale};
        r.residual = std::max(std::abs(s.V.front()), std::abs(s.H.front()));
        r.loc_x = s.xi.front();
        r.pass = r.residual <= r.tolerance;
        report.add(std::move(r));
    }
    return report;
}

bool is_relabeling(const RelabelFunction& f, double c_max) {
    check_relabel_structure(f);
    if (c_max < 1.0) c_max = 1.0;
    double dev_sq = 0.0;
    for (std::size_t i = 0; i + 1 < f.xi.size(); ++i) {
        const double dxi = f.xi[i + 1] - f.xi[i];
        const double slope = (f.f[i + 1] - f.f[i]) / dxi;
        if (!(slope >= 1.0 / c_max) || !(slope <= c_max)) return false;
        dev_sq += (slope - 1.0) * (slope - 1.0) * dxi;
    }
    if (!std::isfinite(dev_sq)) return false;
    for (std::size_t i = 0; i < f.xi.size(); ++i)
        if (!std::isfinite(f.f[i] - f.xi[i])) return false;
    return true;
}

RelabelFunction invert_relabeling(const RelabelFunction& f) {
    check_relabel_structure(f);
    // The inverse of an increasing piecewise-linear function is piecewise
    // linear with knots at the function values.
    return RelabelFunction{f.f, f.xi};
}

namespace {

// Composes state with the sampled monotone map zeta -> target(zeta).
// Outside the state's label range the fields are continued the way decayed
// data behaves there: y with slope one, U, V, H constant.
LagrangianState compose_with(const LagrangianState& s,
                             const std::vector<double>& zeta,
                             const std::vector<double>& target) {
    LagrangianState out;
    const std::size_t n = zeta.size();
    out.xi = zeta;
    out.y.resize(n); out.U.resize(n); out.V.resize(n); out.H.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = target[i];
        if (t < s.xi.front())
            out.y[i] = s.y.front() + (t - s.xi.front());
        else if (t > s.xi.back())
            out.y[i] = s.y.back() + (t - s.xi.back());
        else
            out.y[i] = detail::interp_at(s.xi, s.y, t);
        out.U[i] = detail::interp_at(s.xi, s.U, t);
        out.V[i] = detail::interp_at(s.xi, s.V, t);
        out.H[i] = detail::interp_at(s.xi, s.H, t);
    }
    const std::size_t cells = n - 1;
    out.y_xi.resize(cells); out.U_xi.resize(cells);
    out.V_xi.resize(cells); out.H_xi.resize(cells);
    out.tau.resize(cells); out.broken.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const double dz = zeta[c + 1] - zeta[c];
        out.y_xi[c] = (out.y[c + 1] - out.y[c]) / dz;
        out.U_xi[c] = (out.U[c + 1] - out.U[c]) / dz;
        out.V_xi[c] = (out.V[c + 1] - out.V[c]) / dz;
        out.H_xi[c] = (out.H[c + 1] - out.H[c]) / dz;
        const double mid = 0.5 * (target[c] + target[c + 1]);
        const std::size_t sc = detail::cell_index(s.xi, mid);
        out.tau[c] = s.tau[sc];
        out.broken[c] = s.broken[sc];
    }
    return out;
}

}  // namespace

LagrangianState relabel(const LagrangianState& s, const RelabelFunction& f) {
    check_structure(s);
    if (!is_relabeling(f))
        throw std::invalid_argument("relabel: f is not an admissible relabeling");

    // Refine f's grid with the preimages of the state's own nodes so the
    // composition of the two piecewise-linear objects is exact.
    std::vector<double> zeta = f.xi;
    const RelabelFunction finv = invert_relabeling(f);
    for (double xs : s.xi) {
        if (xs > f.f.front() && xs < f.f.back())
            zeta.push_back(detail::interp_at(finv.xi, finv.f, xs));
    }
    std::sort(zeta.begin(), zeta.end());
    const double tol = 1e-12 * std::max(1.0, std::abs(zeta.back() - zeta.front()));
    zeta.erase(std::unique(zeta.begin(), zeta.end(),
                           [tol](double a, double b) { return b - a <= tol; }),
               zeta.end());

    std::vector<double> target(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i)
        target[i] = detail::interp_at(f.xi, f.f, zeta[i]);
    return compose_with(s, zeta, target);
}

LagrangianState normalize_to_F0(const LagrangianState& s) {
    check_structure(s);
    const std::size_t n = s.size();
    LagrangianState out = s;
    for (std::size_t i = 0; i < n; ++i) out.xi[i] = s.y[i] + s.H[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(out.xi[i + 1] > out.xi[i]))
            throw std::invalid_argument("normalize_to_F0: y + H is not invertible");
    }
    // Only labels move; node values stay. Cell derivatives pick up the
    // chain-rule factor 1/(y_xi + H_xi), which makes y_xi + H_xi = 1 exact.
    for (std::size_t c = 0; c + 1 < n; ++c) {
        const double w = s.y_xi[c] + s.H_xi[c];
        if (!(w > 0.0))
            throw std::invalid_argument("normalize_to_F0: y_xi + H_xi vanishes on a cell");
        out.y_xi[c] = s.y_xi[c] / w;
        out.U_xi[c] = s.U_xi[c] / w;
        out.V_xi[c] = s.V_xi[c] / w;
        out.H_xi[c] = 1.0 - out.y_xi[c];  // bit-exact y_xi + H_xi = 1
    }
    return out;
}

}  // namespace chdis
