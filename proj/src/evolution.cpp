#include "chdis/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "numerics.hpp"

namespace chdis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cell_arrays(const LagrangianState& s) {
    const std::size_t n = s.size();
    if (n < 2) throw std::invalid_argument("LagrangianState: need at least two nodes");
    const std::size_t c = n - 1;
    if (s.y.size() != n || s.U.size() != n || s.H.size() != n ||
        s.y_xi.size() != c || s.U_xi.size() != c || s.H_xi.size() != c ||
        s.V_xi.size() != c || s.broken.size() != c || s.tau.size() != c)
        throw std::invalid_argument("LagrangianState: array length mismatch");
}

// P and Q from explicit integrand data; y must be nondecreasing up to
// tolerance, small violations are flattened.
void pq_scan(std::span<const double> xi, std::span<const double> y,
             std::span<const double> g, std::span<double> P, std::span<double> Q) {
    const std::size_t n = y.size();
    const double mono_tol = 1e-6 * std::max(1.0, std::abs(y.back() - y.front()));
    std::vector<double> tr(n - 1), contrib(n - 1);
    for (std::size_t c = 0; c + 1 < n; ++c) {
        double dy = y[c + 1] - y[c];
        if (dy < -mono_tol)
            throw std::invalid_argument("compute_PQ: y decreases beyond tolerance");
        if (dy < 0.0) dy = 0.0;
        tr[c] = std::exp(-dy);
        contrib[c] = g[c] * (xi[c + 1] - xi[c]) * detail::kernel_avg(dy);
    }
    double A = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) A = A * tr[j - 1] + contrib[j - 1];
        P[j] = A;  // left part; right part added below
    }
    double B = 0.0;
    for (std::size_t j = n; j-- > 0;) {
        if (j + 1 < n) B = B * tr[j] + contrib[j];
        const double left = P[j];
        P[j] = 0.25 * (left + B);
        Q[j] = 0.25 * (B - left);
    }
}

std::vector<double> integrand(const LagrangianState& s) {
    std::vector<double> g(s.cells());
    for (std::size_t c = 0; c < g.size(); ++c)
        g[c] = detail::cell_usq(s.U[c], s.U[c + 1]) * s.y_xi[c] + s.V_xi[c];
    return g;
}

// V_xi = (1 - broken) H_xi and V as its prefix integral, anchored at 0 on
// the left boundary. V is never integrated in time.
void refresh_V(LagrangianState& s) {
    const std::size_t cells = s.cells();
    s.V_xi.resize(cells);
    s.V.resize(s.size());
    s.V[0] = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        s.V_xi[c] = s.broken[c] ? 0.0 : s.H_xi[c];
        s.V[c + 1] = s.V[c] + s.V_xi[c] * (s.xi[c + 1] - s.xi[c]);
    }
}

void axpy_state(LagrangianState& out, const LagrangianState& base,
                const Derivatives& d, double h) {
    const std::size_t n = base.size(), cells = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        out.y[i] = base.y[i] + h * d.y[i];
        out.U[i] = base.U[i] + h * d.U[i];
        out.H[i] = base.H[i] + h * d.H[i];
    }
    for (std::size_t c = 0; c < cells; ++c) {
        out.y_xi[c] = base.y_xi[c] + h * d.y_xi[c];
        out.U_xi[c] = base.U_xi[c] + h * d.U_xi[c];
        out.H_xi[c] = base.H_xi[c] + h * d.H_xi[c];
    }
    refresh_V(out);
}

// Interior minimum of the cubic Hermite interpolant of (a0, m0) -> (a1, m1)
// over [0, dt]; returns {s, value} with s in (0, dt), or s < 0 if none.
std::pair<double, double> hermite_min(double a0, double m0, double a1, double m1,
                                      double dt) {
    const double c3 = 2.0 * a0 + m0 * dt - 2.0 * a1 + m1 * dt;
    const double c2 = -3.0 * a0 - 2.0 * m0 * dt + 3.0 * a1 - m1 * dt;
    const double c1 = m0 * dt;
    auto value = [&](double s) { return ((c3 * s + c2) * s + c1) * s + a0; };
    // roots of h'(s) = 3 c3 s^2 + 2 c2 s + c1
    if (std::abs(c3) < 1e-300) {
        if (c2 <= 0.0) return {-1.0, 0.0};
        const double s = -c1 / (2.0 * c2);
        return (s > 0.0 && s < 1.0) ? std::pair{s * dt, value(s)} : std::pair{-1.0, 0.0};
    }
    const double disc = 4.0 * c2 * c2 - 12.0 * c3 * c1;
    if (disc < 0.0) return {-1.0, 0.0};
    const double r = std::sqrt(disc);
    for (const double s : {(-2.0 * c2 - r) / (6.0 * c3), (-2.0 * c2 + r) / (6.0 * c3)}) {
        if (s > 0.0 && s < 1.0 && 6.0 * c3 * s + 2.0 * c2 > 0.0)
            return {s * dt, value(s)};
    }
    return {-1.0, 0.0};
}

}  // namespace

BlowUpError::BlowUpError(double t, const std::string& what)
    : std::runtime_error("blow-up at t = " + std::to_string(t) + ": " + what),
      time_(t) {}

PQField compute_PQ(const LagrangianState& s) {
    check_cell_arrays(s);
    PQField pq;
    pq.P.resize(s.size());
    pq.Q.resize(s.size());
    pq_scan(s.xi, s.y, integrand(s), pq.P, pq.Q);
    return pq;
}

Derivatives rhs(const LagrangianState& s, const PQField& pq) {
    const std::size_t n = s.size(), cells = n - 1;
    Derivatives d;
    d.y.resize(n); d.U.resize(n); d.H.resize(n);
    d.y_xi.resize(cells); d.U_xi.resize(cells); d.H_xi.resize(cells);
    for (std::size_t j = 0; j < n; ++j) {
        d.y[j] = s.U[j];
        d.U[j] = -pq.Q[j];
        d.H[j] = s.U[j] * s.U[j] * s.U[j] - 2.0 * pq.P[j] * s.U[j];
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (s.broken[c]) {
            d.y_xi[c] = d.U_xi[c] = d.H_xi[c] = 0.0;
            continue;
        }
        // Cell coefficients are trapezoid means of the nodal data; this
        // keeps the compatibility identity invariant under the
        // semi-discrete flow.
        const double usq = detail::cell_usq(s.U[c], s.U[c + 1]);
        const double pc = 0.5 * (pq.P[c] + pq.P[c + 1]);
        const double quc = 0.5 * (pq.Q[c] * s.U[c] + pq.Q[c + 1] * s.U[c + 1]);
        d.y_xi[c] = s.U_xi[c];
        d.U_xi[c] = 0.5 * (s.V_xi[c] + (usq - 2.0 * pc) * s.y_xi[c]);
        d.H_xi[c] = (3.0 * usq - 2.0 * pc) * s.U_xi[c] - 2.0 * quc * s.y_xi[c];
    }
    return d;
}

StepResult step(const LagrangianState& state, double t, double dt,
                double eps_break_abs) {
    check_cell_arrays(state);
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

    LagrangianState stage = state;
    const Derivatives k1 = rhs(state, compute_PQ(state));
    axpy_state(stage, state, k1, 0.5 * dt);
    const Derivatives k2 = rhs(stage, compute_PQ(stage));
    axpy_state(stage, state, k2, 0.5 * dt);
    const Derivatives k3 = rhs(stage, compute_PQ(stage));
    axpy_state(stage, state, k3, dt);
    const Derivatives k4 = rhs(stage, compute_PQ(stage));

    StepResult result;
    result.state = state;
    LagrangianState& out = result.state;
    const std::size_t n = state.size(), cells = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        out.y[i] += dt / 6.0 * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]);
        out.U[i] += dt / 6.0 * (k1.U[i] + 2.0 * k2.U[i] + 2.0 * k3.U[i] + k4.U[i]);
        out.H[i] += dt / 6.0 * (k1.H[i] + 2.0 * k2.H[i] + 2.0 * k3.H[i] + k4.H[i]);
    }
    for (std::size_t c = 0; c < cells; ++c) {
        out.y_xi[c] += dt / 6.0 * (k1.y_xi[c] + 2.0 * k2.y_xi[c] + 2.0 * k3.y_xi[c] + k4.y_xi[c]);
        out.U_xi[c] += dt / 6.0 * (k1.U_xi[c] + 2.0 * k2.U_xi[c] + 2.0 * k3.U_xi[c] + k4.U_xi[c]);
        out.H_xi[c] += dt / 6.0 * (k1.H_xi[c] + 2.0 * k2.H_xi[c] + 2.0 * k3.H_xi[c] + k4.H_xi[c]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(out.y[i]) || !std::isfinite(out.U[i]) || !std::isfinite(out.H[i]))
            throw BlowUpError(t + dt, "non-finite nodal field at node " + std::to_string(i));
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (!std::isfinite(out.y_xi[c]) || !std::isfinite(out.U_xi[c]) ||
            !std::isfinite(out.H_xi[c]))
            throw BlowUpError(t + dt, "non-finite cell field at cell " + std::to_string(c));
    }

    // Breaking: a cell breaks when y_xi reaches the threshold, either at the
    // step end or at an interior minimum (the touch is tangential when the
    // collision time falls between steps, so the endpoint check alone would
    // miss it).
    for (std::size_t c = 0; c < cells; ++c) {
        if (state.broken[c]) continue;
        const double a0 = state.y_xi[c], a1 = out.y_xi[c];
        const double m0 = state.U_xi[c], m1 = out.U_xi[c];
        double tau = -1.0;
        if (a1 < eps_break_abs) {
            const double denom = a0 - a1;
            double frac = denom > 0.0 ? (a0 - eps_break_abs) / denom : 1.0;
            frac = std::clamp(frac, 0.0, 1.0);
            tau = t + frac * dt;
        } else if (m0 < 0.0 && m1 > 0.0) {
            const auto [s_min, val] = hermite_min(a0, m0, a1, m1, dt);
            if (s_min >= 0.0 && val <= eps_break_abs) tau = t + s_min;
        }
        if (tau >= 0.0) {
            const double frac = std::clamp((tau - t) / dt, 0.0, 1.0);
            out.y_xi[c] = 0.0;
            out.U_xi[c] = 0.0;
            // H_xi pinned at its (interpolated) value at the breaking time
            out.H_xi[c] = state.H_xi[c] + frac * (out.H_xi[c] - state.H_xi[c]);
            out.tau[c] = tau;
            out.broken[c] = 1;
            result.events.push_back({c, tau});
        }
    }
    refresh_V(out);
    return result;
}

namespace {

void check_config(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(cfg.dt < cfg.t_end)) throw std::invalid_argument("dt must be smaller than t_end");
    if (!(cfg.eps_break > 0.0)) throw std::invalid_argument("eps_break must be positive");
    for (double to : cfg.output_times) {
        if (to < 0.0 || to > cfg.t_end + 0.5 * cfg.dt)
            throw std::invalid_argument("output times must lie in [0, t_end]");
    }
}

DiagnosticsReport snapshot_diagnostics(const LagrangianState& s,
                                       const SolverConfig& cfg) {
    LagrangianValidateOptions opts;
    opts.tol = cfg.validate_tol;
    opts.c_floor = cfg.c_floor;
    DiagnosticsReport report = validate(s, opts);
    const PQField pq = compute_PQ(s);
    CheckResult r{.name = "lag.pq_bound", .tolerance = 1e-12};
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double v = std::max(std::abs(pq.Q[j]) - pq.P[j], -pq.P[j]);
        if (v > r.residual) { r.residual = v; r.loc_x = s.xi[j]; }
    }
    r.pass = r.residual <= r.tolerance;
    report.add(std::move(r));
    return report;
}

Trajectory march(LagrangianState X, double t0, std::span<const double> x_grid,
                 const SolverConfig& cfg) {
    Trajectory traj;
    traj.x_grid.assign(x_grid.begin(), x_grid.end());
    traj.dt = cfg.dt;

    const double eps_abs = cfg.eps_break * detail::median(X.y_xi);
    traj.eps_break_abs = eps_abs;
    // Cells already at or below the threshold never had positive y_xi: they
    // break immediately.
    for (std::size_t c = 0; c < X.cells(); ++c) {
        if (!X.broken[c] && X.y_xi[c] <= eps_abs) {
            X.broken[c] = 1;
            X.tau[c] = t0;
            X.y_xi[c] = 0.0;
            X.U_xi[c] = 0.0;
        }
    }
    refresh_V(X);

    const long n_steps = std::lround((cfg.t_end - t0) / cfg.dt);
    std::vector<long> out_steps;
    for (double to : cfg.output_times)
        out_steps.push_back(std::clamp(std::lround((to - t0) / cfg.dt), 0L, n_steps));
    std::sort(out_steps.begin(), out_steps.end());
    out_steps.erase(std::unique(out_steps.begin(), out_steps.end()), out_steps.end());

    std::size_t next_out = 0;
    for (long k = 0; k <= n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * cfg.dt;
        if (next_out < out_steps.size() && out_steps[next_out] == k) {
            Snapshot snap;
            snap.t = t;
            snap.lagrangian = X;
            snap.eulerian = lag_to_eul(X, x_grid);
            snap.diagnostics = snapshot_diagnostics(X, cfg);
            traj.snapshots.push_back(std::move(snap));
            ++next_out;
        }
        if (k < n_steps) X = step(X, t, cfg.dt, eps_abs).state;
    }
    traj.final_state = std::move(X);
    traj.t_final = t0 + static_cast<double>(n_steps) * cfg.dt;
    return traj;
}

}  // namespace

Trajectory solve(const EulerianState& initial, const SolverConfig& config) {
    check_config(config);
    check_valid(initial);
    return march(eul_to_lag(initial), 0.0, initial.x, config);
}

Trajectory solve_from(const LagrangianState& checkpoint, double t0,
                      std::span<const double> x_grid, const SolverConfig& config) {
    check_config(config);
    if (!(t0 < config.t_end))
        throw std::invalid_argument("solve_from: t0 must precede t_end");
    return march(checkpoint, t0, x_grid, config);
}

BreakingProfile breaking_profile(const Trajectory& traj) {
    const LagrangianState& s = traj.final_state;
    BreakingProfile profile;
    profile.xi_mid.resize(s.cells());
    profile.tau = s.tau;
    for (std::size_t c = 0; c < s.cells(); ++c)
        profile.xi_mid[c] = 0.5 * (s.xi[c] + s.xi[c + 1]);
    return profile;
}

}  // namespace chdis
