#include "chdis/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "numerics.hpp"

namespace chdis {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double ac_energy(const EulerianState& s) {
    return compute_F_at_nodes(s).back();
}

void require_snapshots(const Trajectory& traj, std::size_t at_least = 1) {
    if (traj.snapshots.size() < at_least)
        throw std::invalid_argument("diagnostics: trajectory has too few snapshots");
}
}  // namespace

void DiagnosticsReport::add(CheckResult result) {
    auto it = std::lower_bound(checks_.begin(), checks_.end(), result.name,
                               [](const CheckResult& r, const std::string& n) {
                                   return r.name < n;
                               });
    if (it != checks_.end() && it->name == result.name) {
        // keep the worse outcome
        if ((it->pass && !result.pass) ||
            (it->pass == result.pass && result.residual > it->residual))
            *it = std::move(result);
        return;
    }
    checks_.insert(it, std::move(result));
}

void DiagnosticsReport::merge(const DiagnosticsReport& other) {
    for (const CheckResult& r : other.checks_) add(r);
}

bool DiagnosticsReport::all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const CheckResult& r) { return r.pass; });
}

const CheckResult* DiagnosticsReport::find(std::string_view name) const {
    for (const CheckResult& r : checks_)
        if (r.name == name) return &r;
    return nullptr;
}

CheckResult check_one_sided_lipschitz(const Trajectory& traj, double D_bound,
                                      double t_min, double margin) {
    require_snapshots(traj);
    CheckResult r{.name = "traj.one_sided_lipschitz", .tolerance = 0.0};
    r.residual = -kInf;
    const double h1_0 = h1_norm(traj.snapshots.front().eulerian);
    for (const Snapshot& snap : traj.snapshots) {
        if (snap.t < t_min) continue;
        const EulerianState& e = snap.eulerian;
        double worst_slope = -kInf, worst_x = 0.0;
        for (std::size_t i = 0; i + 1 < e.x.size(); ++i) {
            const double s = (e.u[i + 1] - e.u[i]) / (e.x[i + 1] - e.x[i]);
            if (s > worst_slope) { worst_slope = s; worst_x = e.x[i]; }
        }
        const double decay_bound = 2.0 / snap.t + std::sqrt(2.0) * h1_0 + margin;
        const double exceed = worst_slope - std::min(D_bound, decay_bound);
        if (exceed > r.residual) {
            r.residual = exceed;
            r.loc_t = snap.t;
            r.loc_x = worst_x;
        }
    }
    if (r.residual == -kInf) r.residual = 0.0;  // no snapshot past t_min
    r.pass = r.residual <= r.tolerance;
    r.note = "exceedance over min(D, 2/t + sqrt(2)||u0||_H1 + margin)";
    return r;
}

CheckResult check_energy(const Trajectory& traj, double mono_tol_per_step,
                         double nu_rel_tol) {
    require_snapshots(traj);
    CheckResult r{.name = "traj.energy", .tolerance = 1.0};
    const double nu0 = nu_total(traj.snapshots.front().eulerian);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const Snapshot& snap = traj.snapshots[k];
        const double nu_k = nu_total(snap.eulerian);
        const double rel = std::abs(nu_k - nu0) / std::max(nu0, 1e-300);
        if (rel / nu_rel_tol > worst) {
            worst = rel / nu_rel_tol;
            r.loc_t = snap.t;
            r.note = "nu_total drift " + std::to_string(rel);
        }
        if (k == 0) continue;
        const double steps = std::max(
            1.0, std::round((snap.t - traj.snapshots[k - 1].t) / std::max(traj.dt, 1e-300)));
        const double grow = (ac_energy(snap.eulerian) -
                             ac_energy(traj.snapshots[k - 1].eulerian)) / steps;
        if (grow / mono_tol_per_step > worst) {
            worst = grow / mono_tol_per_step;
            r.loc_t = snap.t;
            r.note = "F(+inf) grew by " + std::to_string(grow) + " per step";
        }
    }
    r.residual = worst;  // scaled so tolerance is 1
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_tv_p_along_characteristic(const Trajectory& traj,
                                            std::size_t node, double cap) {
    require_snapshots(traj, 2);
    if (node >= traj.snapshots.front().lagrangian.size())
        throw std::invalid_argument("check_tv_p: node index out of range");
    CheckResult r{.name = "traj.tv_p_along_characteristic"};
    double tv = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const PQField pq = compute_PQ(traj.snapshots[k].lagrangian);
        if (k > 0) tv += std::abs(pq.P[node] - prev);
        prev = pq.P[node];
    }
    r.residual = tv;
    r.tolerance = cap > 0.0 ? cap : kInf;
    r.pass = std::isfinite(tv) && tv <= r.tolerance;
    r.loc_x = traj.snapshots.front().lagrangian.xi[node];
    r.note = "total variation of P(t, xi) over snapshot times";
    return r;
}

CheckResult check_c2_identity(const Trajectory& traj, double tol) {
    require_snapshots(traj);
    CheckResult r{.name = "traj.c2_identity", .tolerance = tol};
    for (const Snapshot& snap : traj.snapshots) {
        const LagrangianState& s = snap.lagrangian;
        for (std::size_t c = 0; c < s.cells(); ++c) {
            if (s.broken[c]) continue;
            const double usq = detail::cell_usq(s.U[c], s.U[c + 1]);
            const double lhs = usq * s.y_xi[c] * s.y_xi[c] + s.U_xi[c] * s.U_xi[c];
            const double v = std::abs(lhs - s.y_xi[c] * s.V_xi[c]) /
                             (1.0 + s.y_xi[c] * s.H_xi[c]);
            if (v > r.residual) { r.residual = v; r.loc_t = snap.t; r.loc_x = s.xi[c]; }
        }
    }
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_broken_monotone(const Trajectory& traj) {
    require_snapshots(traj);
    CheckResult r{.name = "traj.broken_monotone", .tolerance = 0.0};
    std::size_t reverted = 0;
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
        const auto& prev = traj.snapshots[k - 1].lagrangian.broken;
        const auto& cur = traj.snapshots[k].lagrangian.broken;
        for (std::size_t c = 0; c < prev.size() && c < cur.size(); ++c) {
            if (prev[c] && !cur[c]) {
                ++reverted;
                r.loc_t = traj.snapshots[k].t;
                r.loc_x = traj.snapshots[k].lagrangian.xi[c];
            }
        }
    }
    r.residual = static_cast<double>(reverted);
    r.pass = reverted == 0;
    return r;
}

CheckResult check_pq_bound(const Trajectory& traj, double tol) {
    require_snapshots(traj);
    CheckResult r{.name = "traj.pq_bound", .tolerance = tol};
    for (const Snapshot& snap : traj.snapshots) {
        const PQField pq = compute_PQ(snap.lagrangian);
        for (std::size_t j = 0; j < pq.P.size(); ++j) {
            const double v = std::max(std::abs(pq.Q[j]) - pq.P[j], -pq.P[j]);
            if (v > r.residual) {
                r.residual = v;
                r.loc_t = snap.t;
                r.loc_x = snap.lagrangian.xi[j];
            }
        }
    }
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_holder_continuity(const Trajectory& traj, double constant) {
    require_snapshots(traj, 2);
    if (constant <= 0.0) {
        const double nu0 = nu_total(traj.snapshots.front().eulerian);
        constant = 10.0 * std::max(1.0, std::sqrt(nu0));
    }
    CheckResult r{.name = "traj.holder_time_half", .tolerance = constant};
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
        const Snapshot& a = traj.snapshots[k - 1];
        const Snapshot& b = traj.snapshots[k];
        const double dt_snap = b.t - a.t;
        if (!(dt_snap > 0.0)) continue;
        for (std::size_t i = 0; i < a.eulerian.u.size(); ++i) {
            const double q = std::abs(b.eulerian.u[i] - a.eulerian.u[i]) /
                             std::sqrt(dt_snap);
            if (q > r.residual) { r.residual = q; r.loc_t = b.t; r.loc_x = a.eulerian.x[i]; }
        }
    }
    r.pass = r.residual <= r.tolerance;
    r.note = "max |u(s,x)-u(t,x)| / sqrt(s-t) over snapshot pairs";
    return r;
}

CheckResult check_slope_ceiling(const Trajectory& traj, double margin) {
    require_snapshots(traj);
    const LagrangianState& s0 = traj.snapshots.front().lagrangian;
    double alpha0 = -kInf;
    for (std::size_t c = 0; c < s0.cells(); ++c) {
        if (s0.y_xi[c] > 0.0)
            alpha0 = std::max(alpha0, s0.U_xi[c] / s0.y_xi[c]);
    }
    const double C = nu_total(traj.snapshots.front().eulerian);
    const double ceiling = std::max(alpha0, 2.0 * std::sqrt(std::max(C, 0.0))) + margin;
    CheckResult r{.name = "traj.slope_ceiling", .tolerance = 0.0};
    r.residual = -kInf;
    for (const Snapshot& snap : traj.snapshots) {
        const LagrangianState& s = snap.lagrangian;
        for (std::size_t c = 0; c < s.cells(); ++c) {
            if (s.broken[c] || !(s.y_xi[c] > 0.0)) continue;
            const double alpha = s.U_xi[c] / s.y_xi[c];
            if (alpha - ceiling > r.residual) {
                r.residual = alpha - ceiling;
                r.loc_t = snap.t;
                r.loc_x = s.xi[c];
            }
        }
    }
    if (r.residual == -kInf) r.residual = 0.0;
    r.pass = r.residual <= 0.0;
    r.note = "exceedance of U_xi/y_xi over max(alpha(0), 2 sqrt(nu(0))) + margin";
    return r;
}

CheckResult check_nu_time_continuity(const Trajectory& traj, double quotient_cap) {
    require_snapshots(traj, 2);
    const double nu0 = nu_total(traj.snapshots.front().eulerian);
    if (quotient_cap <= 0.0) quotient_cap = 20.0 * std::max(1.0, nu0);
    CheckResult r{.name = "traj.nu_time_continuity", .tolerance = quotient_cap};

    // G(t, x) = F(t, x) + atom mass strictly left of x, probed at fixed
    // sample points between snapshots.
    const std::vector<double>& xg = traj.x_grid;
    std::vector<double> samples;
    for (int i = 1; i < 8; ++i)
        samples.push_back(xg.front() + (xg.back() - xg.front()) * i / 8.0);
    auto G = [](const EulerianState& e, double x) {
        double g = compute_F(e, x);
        for (const Atom& a : e.atoms)
            if (a.pos < x) g += a.mass;
        return g;
    };
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
        const Snapshot& a = traj.snapshots[k - 1];
        const Snapshot& b = traj.snapshots[k];
        const double dt_snap = b.t - a.t;
        if (!(dt_snap > 0.0)) continue;
        const double qn = std::abs(nu_total(b.eulerian) - nu_total(a.eulerian)) /
                          std::sqrt(dt_snap);
        if (qn > r.residual) { r.residual = qn; r.loc_t = b.t; }
        for (double xs : samples) {
            const double q = std::abs(G(b.eulerian, xs) - G(a.eulerian, xs)) /
                             std::sqrt(dt_snap);
            if (q > r.residual) { r.residual = q; r.loc_t = b.t; r.loc_x = xs; }
        }
    }
    r.pass = r.residual <= r.tolerance;
    r.note = "max change of nu_total and G(t,x) per sqrt(t) between snapshots";
    return r;
}

CheckResult check_nu_independence(const EulerianState& u0,
                                  const std::vector<Atom>& atoms,
                                  const SolverConfig& config, double tol) {
    EulerianState plain = u0;
    plain.atoms.clear();
    EulerianState dressed = plain;
    dressed.atoms = atoms;

    const Trajectory ta = solve(plain, config);
    const Trajectory tb = solve(dressed, config);
    CheckResult r{.name = "traj.nu_independence", .tolerance = tol};
    for (std::size_t k = 0; k < ta.snapshots.size() && k < tb.snapshots.size(); ++k) {
        const auto& ua = ta.snapshots[k].eulerian.u;
        const auto& ub = tb.snapshots[k].eulerian.u;
        for (std::size_t i = 0; i < ua.size() && i < ub.size(); ++i) {
            const double v = std::abs(ua[i] - ub[i]);
            if (v > r.residual) {
                r.residual = v;
                r.loc_t = ta.snapshots[k].t;
                r.loc_x = ta.snapshots[k].eulerian.x[i];
            }
        }
    }
    r.pass = r.residual <= r.tolerance;
    r.note = "sup |u_ac_only - u_with_atoms| over snapshots";
    return r;
}

DiagnosticsReport run_all_checks(const Trajectory& traj) {
    DiagnosticsReport report;
    const LagrangianState& s0 = traj.snapshots.front().lagrangian;
    double alpha0 = 0.0;
    for (std::size_t c = 0; c < s0.cells(); ++c)
        if (s0.y_xi[c] > 0.0) alpha0 = std::max(alpha0, s0.U_xi[c] / s0.y_xi[c]);
    const double nu0 = nu_total(traj.snapshots.front().eulerian);
    const double D_bound = std::max(alpha0, 2.0 * std::sqrt(nu0)) + 0.1;

    report.add(check_one_sided_lipschitz(traj, D_bound));
    report.add(check_energy(traj));
    report.add(check_c2_identity(traj));
    report.add(check_broken_monotone(traj));
    report.add(check_pq_bound(traj));
    report.add(check_holder_continuity(traj));
    report.add(check_slope_ceiling(traj));
    if (traj.snapshots.size() >= 2) {
        report.add(check_nu_time_continuity(traj));
        // characteristic through the middle of the label range
        const auto& xi = s0.xi;
        const double mid = 0.5 * (xi.front() + xi.back());
        const std::size_t node = detail::cell_index(xi, mid);
        report.add(check_tv_p_along_characteristic(traj, node));
    }
    return report;
}

}  // namespace chdis
