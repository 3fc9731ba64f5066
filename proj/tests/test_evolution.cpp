#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chdis/evolution.hpp"
#include "chdis/oracle.hpp"
#include "chdis/presets.hpp"
#include "testutil.hpp"

using namespace chdis;

namespace {

double c2_worst(const LagrangianState& s) {
    double worst = 0.0;
    for (std::size_t c = 0; c < s.cells(); ++c) {
        if (s.broken[c]) continue;
        const double usq = 0.5 * (s.U[c] * s.U[c] + s.U[c + 1] * s.U[c + 1]);
        const double lhs = usq * s.y_xi[c] * s.y_xi[c] + s.U_xi[c] * s.U_xi[c];
        worst = std::max(worst, std::abs(lhs - s.y_xi[c] * s.V_xi[c]) /
                                    (1.0 + s.y_xi[c] * s.H_xi[c]));
    }
    return worst;
}

LagrangianState advance(LagrangianState X, double t0, double dt, int n,
                        double eps_abs = 1e-12) {
    for (int k = 0; k < n; ++k) X = step(X, t0 + k * dt, dt, eps_abs).state;
    return X;
}

}  // namespace

TEST_CASE("compute_PQ vanishes on zero data") {
    const LagrangianState X = eul_to_lag(make_zero(-10, 10, 101));
    const PQField pq = compute_PQ(X);
    for (std::size_t j = 0; j < X.size(); ++j) {
        CHECK(pq.P[j] == 0.0);
        CHECK(pq.Q[j] == 0.0);
    }
}

TEST_CASE("compute_PQ at the peakon crest matches the Eulerian pressure") {
    const LagrangianState X = eul_to_lag(make_peakon(1.0, -25, 25, 4001));
    const PQField pq = compute_PQ(X);
    std::size_t crest = 0;
    for (std::size_t j = 0; j < X.size(); ++j)
        if (std::abs(X.y[j]) < std::abs(X.y[crest])) crest = j;
    CHECK(X.y[crest] == 0.0);
    CHECK(pq.P[crest] == doctest::Approx(0.5).epsilon(2e-4));
    CHECK(std::abs(pq.Q[crest]) < 1e-12);
}

TEST_CASE("compute_PQ scan agrees with the direct double sum") {
    EulerianState e = make_peakon(1.3, -25, 25, 513);
    e.atoms.push_back({2.0, 0.4});
    const LagrangianState X = eul_to_lag(e);
    const PQField pq = compute_PQ(X);
    const double scale = 1.0 + X.H.back();
    for (std::size_t j = 0; j < X.size(); ++j) {
        const auto [pd, qd] = test::direct_PQ_at_node(X, j);
        CHECK(std::abs(pq.P[j] - pd) <= 1e-12 * scale);
        CHECK(std::abs(pq.Q[j] - qd) <= 1e-12 * scale);
    }
}

TEST_CASE("compute_PQ scan matches the double sum at N = 4096") {
    const PeakonAntipeakonParams pp = params_from_Dtstar(1.0, 1.0);
    const LagrangianState X = eul_to_lag(make_peakon_antipeakon(pp, -20, 20, 4096));
    const PQField pq = compute_PQ(X);
    const double scale = 1.0 + X.H.back();
    for (std::size_t j = 0; j < X.size(); j += 131) {
        const auto [pd, qd] = test::direct_PQ_at_node(X, j);
        CHECK(std::abs(pq.P[j] - pd) <= 1e-12 * scale);
        CHECK(std::abs(pq.Q[j] - qd) <= 1e-12 * scale);
    }
}

TEST_CASE("|Q| <= P everywhere") {
    EulerianState e = make_peakon_antipeakon(params_from_Dtstar(1.0, 1.0), -20, 20, 1024);
    const LagrangianState X = eul_to_lag(e);
    const PQField pq = compute_PQ(X);
    for (std::size_t j = 0; j < X.size(); ++j) {
        CHECK(pq.P[j] >= 0.0);
        CHECK(std::abs(pq.Q[j]) <= pq.P[j] + 1e-15);
    }
}

TEST_CASE("compute_PQ rejects grossly decreasing y") {
    LagrangianState X = eul_to_lag(make_peakon(1.0, -10, 10, 101));
    X.y[50] = X.y[49] - 2.0;
    CHECK_THROWS_AS(compute_PQ(X), std::invalid_argument);
}

TEST_CASE("rhs on the zero state vanishes") {
    const LagrangianState X = eul_to_lag(make_zero(-10, 10, 101));
    const Derivatives d = rhs(X, compute_PQ(X));
    for (double v : d.y) CHECK(v == 0.0);
    for (double v : d.U) CHECK(v == 0.0);
    for (double v : d.H) CHECK(v == 0.0);
    for (double v : d.U_xi) CHECK(v == 0.0);
}

TEST_CASE("crest characteristic moves with the wave speed") {
    const LagrangianState X = eul_to_lag(make_peakon(1.0, -25, 25, 2001));
    const Derivatives d = rhs(X, compute_PQ(X));
    std::size_t crest = 0;
    for (std::size_t j = 0; j < X.size(); ++j)
        if (std::abs(X.y[j]) < std::abs(X.y[crest])) crest = j;
    CHECK(d.y[crest] == 1.0);  // y_t = U = u(0) = c
}

TEST_CASE("broken cells are frozen by the rhs") {
    EulerianState e = make_zero(-10, 10, 101);
    e.atoms.push_back({0.0, 1.0});
    LagrangianState X = eul_to_lag(e);
    const Derivatives d = rhs(X, compute_PQ(X));
    const auto runs = find_plateaus(X);
    REQUIRE(runs.size() == 1);
    const std::size_t p = runs[0].first_cell;
    CHECK(d.y_xi[p] == 0.0);
    CHECK(d.U_xi[p] == 0.0);
    CHECK(d.H_xi[p] == 0.0);
}

TEST_CASE("step leaves the zero state alone") {
    const LagrangianState X = eul_to_lag(make_zero(-10, 10, 101));
    const StepResult r = step(X, 0.0, 1e-3, 1e-12);
    CHECK(r.events.empty());
    CHECK(test::sup_diff(r.state.y, X.y) == 0.0);
    CHECK(test::sup_diff(r.state.U, X.U) == 0.0);
}

TEST_CASE("an atom without flow is stationary") {
    EulerianState e = make_zero(-10, 10, 101);
    e.atoms.push_back({0.0, 1.0});
    LagrangianState X = eul_to_lag(e);
    const LagrangianState Y = advance(X, 0.0, 1e-2, 50);
    const auto runs = find_plateaus(Y);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].pos == doctest::Approx(0.0));
    CHECK(runs[0].mass == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("single peakon keeps the compatibility identity at rounding level") {
    // the identity is invariant under the semi-discrete flow; only the time
    // discretization perturbs it, far below any dt^3 envelope
    LagrangianState X = eul_to_lag(make_peakon(1.0, -25, 25, 1025));
    CHECK(c2_worst(X) < 1e-14);
    for (double dt : {2e-3, 1e-3}) {
        const LagrangianState Y = advance(X, 0.0, dt, static_cast<int>(0.1 / dt));
        CHECK(c2_worst(Y) < 1e-11);
    }
}

TEST_CASE("step reports a blow-up with a time stamp") {
    LagrangianState X = eul_to_lag(make_peakon(1.0, -10, 10, 101));
    X.U[50] = 1e200;  // drives H_t = U^3 - 2PU out of range
    CHECK_THROWS_AS(step(X, 0.25, 1e-3, 1e-12), BlowUpError);
    try {
        step(X, 0.25, 1e-3, 1e-12);
    } catch (const BlowUpError& e) {
        CHECK(e.time() == doctest::Approx(0.251));
    }
}

TEST_CASE("solve on zero data returns zero snapshots") {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    cfg.output_times = {0.0, 0.02, 0.05};
    const Trajectory traj = solve(make_zero(-10, 10, 101), cfg);
    REQUIRE(traj.snapshots.size() == 3);
    for (const auto& snap : traj.snapshots) {
        for (double v : snap.eulerian.u) CHECK(v == 0.0);
        CHECK(snap.diagnostics.all_pass());
    }
}

TEST_CASE("solve validates its configuration") {
    const EulerianState e = make_zero(-10, 10, 101);
    SolverConfig cfg;
    cfg.dt = -1.0;
    cfg.t_end = 1.0;
    CHECK_THROWS_WITH_AS(solve(e, cfg), "dt must be positive", std::invalid_argument);
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.output_times = {2.0};
    CHECK_THROWS_AS(solve(e, cfg), std::invalid_argument);
}

TEST_CASE("single peakon travels at unit speed") {
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 1.0;
    cfg.output_times = {0.0, 1.0};
    const Trajectory traj = solve(make_peakon(1.0, -20, 20, 1024), cfg);
    const Snapshot& last = traj.snapshots.back();
    double sup = 0.0;
    for (std::size_t i = 0; i < last.eulerian.x.size(); ++i)
        sup = std::max(sup, std::abs(last.eulerian.u[i] -
                                     std::exp(-std::abs(last.eulerian.x[i] - 1.0))));
    CHECK(sup <= 0.01);
    // no wave breaking along a single peakon
    for (double tau : traj.final_state.tau) CHECK(tau == std::numeric_limits<double>::infinity());
    const double nu0 = nu_total(traj.snapshots.front().eulerian);
    const double nu1 = nu_total(last.eulerian);
    CHECK(std::abs(nu1 - nu0) / nu0 <= 1e-3);
}

TEST_CASE("peakon-antipeakon collision dissipates at the breaking time") {
    const PeakonAntipeakonParams pp = params_from_Dtstar(1.0, 1.0);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 1.4;
    cfg.output_times = {0.0, 1.4};
    const Trajectory traj = solve(make_peakon_antipeakon(pp, -20, 20, 512), cfg);

    const BreakingProfile profile = breaking_profile(traj);
    double min_tau = std::numeric_limits<double>::infinity();
    std::size_t broken_cells = 0;
    for (double tau : profile.tau) {
        if (std::isfinite(tau)) {
            ++broken_cells;
            min_tau = std::min(min_tau, tau);
        }
    }
    CHECK(broken_cells > 0);
    CHECK(min_tau == doctest::Approx(1.0).epsilon(0.03));

    const Snapshot& last = traj.snapshots.back();
    double sup = 0.0;
    for (double v : last.eulerian.u) sup = std::max(sup, std::abs(v));
    CHECK(sup <= 0.05);  // exact solution is identically zero past t*
    CHECK(compute_F(last.eulerian, 1e9) <= 1.0);  // ac energy has collapsed
    const double nu0 = nu_total(traj.snapshots.front().eulerian);
    CHECK(std::abs(nu_total(last.eulerian) - nu0) / nu0 <= 5e-3);
    // breaking is permanent
    for (std::size_t c = 0; c < traj.final_state.cells(); ++c) {
        if (traj.final_state.broken[c]) CHECK(traj.final_state.tau[c] <= traj.t_final);
    }
}

TEST_CASE("initial atoms break at time zero") {
    EulerianState e = make_peakon(1.0, -20, 20, 512);
    e.atoms.push_back({3.0, 0.5});
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.01;
    cfg.output_times = {0.01};
    const Trajectory traj = solve(e, cfg);
    const BreakingProfile profile = breaking_profile(traj);
    double min_tau = std::numeric_limits<double>::infinity();
    for (double tau : profile.tau) min_tau = std::min(min_tau, tau);
    CHECK(min_tau == 0.0);
}

TEST_CASE("resuming from a checkpoint continues the same trajectory") {
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 0.5;
    cfg.output_times = {0.5};
    const EulerianState e = make_peakon(1.0, -20, 20, 512);
    const Trajectory first = solve(e, cfg);

    SolverConfig cfg2 = cfg;
    cfg2.t_end = 1.0;
    cfg2.output_times = {1.0};
    const Trajectory resumed = solve_from(first.final_state, 0.5, e.x, cfg2);

    SolverConfig direct_cfg = cfg;
    direct_cfg.t_end = 1.0;
    direct_cfg.output_times = {1.0};
    const Trajectory direct = solve(e, direct_cfg);
    CHECK(test::sup_diff(resumed.snapshots.back().eulerian.u,
                         direct.snapshots.back().eulerian.u) <= 1e-12);
}

TEST_CASE("output times snap to step boundaries") {
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 0.1;
    cfg.output_times = {0.0, 0.0501, 0.1};
    const Trajectory traj = solve(make_zero(-5, 5, 64), cfg);
    REQUIRE(traj.snapshots.size() == 3);
    CHECK(traj.snapshots[1].t == doctest::Approx(0.05).epsilon(1e-12));
}
