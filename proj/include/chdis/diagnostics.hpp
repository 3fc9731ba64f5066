#pragma once

#include "chdis/evolution.hpp"
#include "chdis/report.hpp"

namespace chdis {

/// Largest forward-difference slope of u over all snapshots with t >= t_min,
/// checked against both the run-level bound D_bound and the a-priori decay
/// curve 2/t + sqrt(2) ||u0||_H1 (+ margin).
CheckResult check_one_sided_lipschitz(const Trajectory& traj, double D_bound,
                                      double t_min = 0.1, double margin = 0.1);

/// F(t, +inf) non-increasing across snapshots (tolerance per step) and
/// nu_total constant in relative terms.
CheckResult check_energy(const Trajectory& traj,
                         double mono_tol_per_step = 1e-6,
                         double nu_rel_tol = 1e-4);

/// Total variation of P(t, xi_node) over the snapshot times at a fixed node;
/// reports the value and fails only if it is non-finite or exceeds the
/// given cap (cap <= 0 means no cap).
CheckResult check_tv_p_along_characteristic(const Trajectory& traj,
                                            std::size_t node,
                                            double cap = 0.0);

/// Worst relative residual of U^2 y_xi^2 + U_xi^2 = y_xi V_xi over unbroken
/// cells of every snapshot.
CheckResult check_c2_identity(const Trajectory& traj, double tol = 1e-6);

/// Broken flags never revert across snapshots.
CheckResult check_broken_monotone(const Trajectory& traj);

/// |Q| <= P at every node of every snapshot, and P >= 0.
CheckResult check_pq_bound(const Trajectory& traj, double tol = 1e-12);

/// Discrete Hoelder-1/2 quotient in time, |u(s,x) - u(t,x)| / sqrt(s - t),
/// over consecutive snapshot pairs. constant <= 0 picks the default
/// 10 * max(1, sqrt(nu_total(0))).
CheckResult check_holder_continuity(const Trajectory& traj,
                                    double constant = 0.0);

/// Lagrangian slope bound: max cell U_xi / y_xi over unbroken cells stays
/// below max(alpha(0), 2 sqrt(C)) + margin with C = nu_total(0).
CheckResult check_slope_ceiling(const Trajectory& traj, double margin = 0.1);

/// Weak-time-continuity proxies: nu_total and G(t, x) = F + atom mass left
/// of x move by a bounded amount between consecutive snapshots at sample
/// points of x.
CheckResult check_nu_time_continuity(const Trajectory& traj,
                                     double quotient_cap = 0.0);

/// Runs solve twice from the same u0, with nu0 = ac only and with the extra
/// atoms, and compares u snapshots on the common grid.
CheckResult check_nu_independence(const EulerianState& u0,
                                  const std::vector<Atom>& atoms,
                                  const SolverConfig& config,
                                  double tol = 1e-3);

/// The full trajectory-level suite (everything above except
/// check_nu_independence, which needs a second run).
DiagnosticsReport run_all_checks(const Trajectory& traj);

}  // namespace chdis
