// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Thresholds are fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>
#include <vector>

#include "chdis/diagnostics.hpp"
#include "chdis/evolution.hpp"
#include "chdis/oracle.hpp"
#include "chdis/presets.hpp"
#include "chdis/transform.hpp"

using namespace chdis;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %-28s %s\n", pass ? "PASS" : "FAIL",
                criterion, label.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double sup_err_vs_exact(const Snapshot& snap, const PeakonAntipeakonParams& pp) {
    double sup = 0.0;
    for (std::size_t i = 0; i < snap.eulerian.x.size(); ++i)
        sup = std::max(sup, std::abs(snap.eulerian.u[i] -
                                     exact_u(pp, snap.t, snap.eulerian.x[i])));
    return sup;
}

const Snapshot& at_time(const Trajectory& traj, double t) {
    for (const Snapshot& s : traj.snapshots)
        if (std::abs(s.t - t) < 1e-9) return s;
    std::fprintf(stderr, "missing snapshot at t = %g\n", t);
    std::exit(1);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace

int main() {
    const PeakonAntipeakonParams pp = params_from_Dtstar(1.0, 1.0);

    // ---- main collision run: N = 4096 on [-20, 20], dt = 1e-3 ------------
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    cfg.output_times = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.1, 1.25, 1.5, 2.0};
    const EulerianState pap0 = make_peakon_antipeakon(pp, -20.0, 20.0, 4096);

    const auto wall0 = std::chrono::steady_clock::now();
    const Trajectory pap = solve(pap0, cfg);
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - wall0).count();

    // ---- criterion 1: oracle agreement -----------------------------------
    {
        double worst = 0.0;
        for (double t : {0.25, 0.5, 0.9, 1.5})
            worst = std::max(worst, sup_err_vs_exact(at_time(pap, t), pp));
        const bool pass = worst <= 0.02 && wall <= 120.0;
        report(1, "oracle agreement",
               pass, fmt("sup err %.3e (tol 2e-2), runtime %.1fs (tol 120s)", worst, wall));
    }

    // ---- criterion 2: energy drop of 4 D^2 and breaking time -------------
    {
        double pre_dev = 0.0, post = 0.0;
        for (const Snapshot& s : pap.snapshots) {
            const double F_inf = compute_F(s.eulerian, 1e18);
            if (s.t <= 0.9) pre_dev = std::max(pre_dev, std::abs(F_inf - 4.0));
            if (s.t >= 1.1) post = std::max(post, F_inf);
        }
        double min_tau = std::numeric_limits<double>::infinity();
        for (double tau : breaking_profile(pap).tau)
            min_tau = std::min(min_tau, tau);
        const bool pass = pre_dev <= 0.02 && post <= 0.2 && std::abs(min_tau - 1.0) <= 0.02;
        report(2, "energy drop 4D^2", pass,
               fmt("pre |F-4| %.3e (2e-2), post F %.3e (2e-1), min tau dev %.3e (2e-2)",
                   pre_dev, post, std::abs(min_tau - 1.0)));
    }

    // ---- peakon run (shared by criteria 3 and 7) --------------------------
    SolverConfig pcfg = cfg;
    pcfg.output_times = {0.0, 0.5, 1.0, 1.5, 2.0};
    const Trajectory peakon = solve(make_peakon(1.0, -20.0, 20.0, 4096), pcfg);

    // ---- criterion 3: nu conservation on both runs ------------------------
    {
        double worst = 0.0;
        for (const Trajectory* traj : {&pap, &peakon}) {
            const double nu0 = nu_total(traj->snapshots.front().eulerian);
            for (const Snapshot& s : traj->snapshots)
                worst = std::max(worst, std::abs(nu_total(s.eulerian) - nu0) / nu0);
        }
        report(3, "nu conservation", worst <= 1e-3,
               fmt("worst relative drift %.3e (tol 1e-3)", worst));
    }

    // ---- criterion 4: spatial convergence at t = 0.5 ----------------------
    {
        std::vector<double> errs;
        for (std::size_t n : {512, 1024, 2048, 4096}) {
            SolverConfig scfg;
            scfg.dt = 1e-3;
            scfg.t_end = 0.5;
            scfg.output_times = {0.5};
            const Trajectory t = solve(make_peakon_antipeakon(pp, -20.0, 20.0, n), scfg);
            errs.push_back(sup_err_vs_exact(t.snapshots.back(), pp));
        }
        bool monotone = true;
        double min_order = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < errs.size(); ++k) {
            monotone = monotone && errs[k] < errs[k - 1];
            min_order = std::min(min_order, std::log2(errs[k - 1] / errs[k]));
        }
        report(4, "grid convergence", monotone && min_order >= 1.0,
               fmt("errors %.2e -> %.2e, min observed order %.2f (tol 1.0)",
                   errs.front(), errs.back(), min_order));
    }

    // ---- criterion 5: round trip through Lagrangian coordinates -----------
    {
        const EulerianState pk = make_peakon(1.0, -20.0, 20.0, 4096);
        const EulerianState pk_back = lag_to_eul(eul_to_lag(pk), pk.x);
        double u_err = 0.0;
        for (std::size_t i = 0; i < pk.u.size(); ++i)
            u_err = std::max(u_err, std::abs(pk_back.u[i] - pk.u[i]));

        EulerianState delta = make_zero(-20.0, 20.0, 4096);
        delta.atoms.push_back({0.37, 1.0});
        const EulerianState delta_back = lag_to_eul(eul_to_lag(delta), delta.x);
        double atom_err = std::numeric_limits<double>::infinity();
        if (delta_back.atoms.size() == 1)
            atom_err = std::max(std::abs(delta_back.atoms[0].pos - 0.37),
                                std::abs(delta_back.atoms[0].mass - 1.0));
        const bool pass = u_err <= 1e-8 && atom_err <= 1e-8;
        report(5, "round trip", pass,
               fmt("u err %.3e, atom err %.3e (tol 1e-8)", u_err, atom_err));
    }

    // ---- criterion 6: u does not see the dummy part of nu ------------------
    {
        SolverConfig icfg = cfg;
        icfg.output_times = {0.0, 0.5, 1.0, 1.5, 2.0};
        const CheckResult r = check_nu_independence(make_peakon(1.0, -20.0, 20.0, 4096),
                                                    {{3.0, 0.5}}, icfg, 1e-3);
        report(6, "nu independence", r.pass,
               fmt("sup snapshot difference %.3e (tol 1e-3)", r.residual));
    }

    // ---- criterion 7: invariant suite --------------------------------------
    {
        const CheckResult c2 = check_c2_identity(peakon, 1e-6);
        // checked against 2/t + sqrt(2)||u0||_H1 + 0.1 with ||u0||_H1 ~ 2
        const CheckResult lip = check_one_sided_lipschitz(
            pap, std::numeric_limits<double>::infinity(), 0.1, 0.1);
        const CheckResult mono = check_broken_monotone(pap);
        const CheckResult pq_a = check_pq_bound(pap);
        const CheckResult pq_b = check_pq_bound(peakon);
        const bool pass = c2.pass && lip.pass && mono.pass && pq_a.pass && pq_b.pass;
        report(7, "invariant suite", pass,
               fmt("c2 %.3e (1e-6), slope exceedance %.3e (<=0), |Q|-P %.3e (<=1e-12)",
                   c2.residual, lip.residual, std::max(pq_a.residual, pq_b.residual)) +
                   (mono.pass ? "" : ", broken flags reverted"));
    }

    // ---- criterion 8: reference field data behind the three figures --------
    {
        namespace fs = std::filesystem;
        const fs::path dir = "acceptance_out";
        fs::create_directories(dir);
        std::ofstream csv(dir / "exact_fields.csv");
        csv << "t,x,u,F,p,p_x\n";
        csv << std::setprecision(17);
        bool finite = true, zero_after = true, jump_seen = false;
        std::size_t rows = 0;
        for (int it = 0; it <= 30; ++it) {
            const double t = 1.5 * it / 30.0;
            for (int ix = 0; ix <= 200; ++ix) {
                const double x = -5.0 + 10.0 * ix / 200.0;
                const double u = exact_u(pp, t, x);
                const double F = exact_F(pp, t, x);
                const auto [p, px] = exact_p_px(pp, t, x);
                csv << t << ',' << x << ',' << u << ',' << F << ',' << p << ',' << px << '\n';
                ++rows;
                finite = finite && std::isfinite(u) && std::isfinite(F) &&
                         std::isfinite(p) && std::isfinite(px);
                if (t > 1.0 + 1e-9) zero_after = zero_after && u == 0.0 && F == 0.0 && p == 0.0;
            }
        }
        // the F jump across t*: 4 D^2 on the right half-line
        jump_seen = std::abs(exact_F(pp, 0.999999, 5.0) - 4.0) < 1e-3 &&
                    exact_F(pp, 1.000001, 5.0) == 0.0;
        // spot values tied to the run: F(0, 0) = 2 D^2 and u(0, q0) = D^2/p0
        const bool spots =
            std::abs(exact_F(pp, 0.0, 0.0) - 2.0) < 1e-12 &&
            std::abs(exact_u(pp, 0.0, pp.q0) - pp.D * pp.D / pp.p0) < 1e-12;
        const bool pass = finite && zero_after && jump_seen && spots && rows == 31 * 201;
        report(8, "figure data", pass,
               fmt("%.0f rows, finite fields, zero past t*, F jump 4D^2",
                   static_cast<double>(rows)));
    }

    std::printf("%s\n", g_failures == 0 ? "acceptance: all criteria passed"
                                        : "acceptance: FAILURES present");
    return g_failures == 0 ? 0 : 1;
}
