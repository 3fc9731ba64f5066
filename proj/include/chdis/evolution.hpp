#pragma once

#include <stdexcept>
#include <vector>

#include "chdis/eulerian.hpp"
#include "chdis/lagrangian.hpp"
#include "chdis/transform.hpp"

namespace chdis {

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    // Breaking threshold relative to the median initial cell y_xi.
    double eps_break = 1e-8;
    std::vector<double> output_times;
    double c_floor = 1e-10;       // validator constant
    double validate_tol = 1e-6;   // per-snapshot validation tolerance
};

/// Nonlocal pressure and its derivative pulled back to the label grid.
struct PQField {
    std::vector<double> P;
    std::vector<double> Q;
};

/// P and Q at every node via left/right exponential prefix recursions in the
/// (nondecreasing) y variable; flat runs of y are transparent to the kernel.
/// O(N). Throws if nodal y decreases beyond tolerance.
PQField compute_PQ(const LagrangianState& state);

/// Time derivatives of the evolved fields. Broken cells contribute zero
/// rates for y_xi, U_xi, H_xi.
struct Derivatives {
    std::vector<double> y, U, H;        // nodal
    std::vector<double> y_xi, U_xi, H_xi;  // per cell
};

Derivatives rhs(const LagrangianState& state, const PQField& pq);

struct BreakEvent {
    std::size_t cell = 0;
    double tau = 0.0;
};

struct StepResult {
    LagrangianState state;
    std::vector<BreakEvent> events;
};

/// One classical RK4 step of the coupled nodal/cell system. After the step,
/// cells whose y_xi crossed the breaking threshold -- at the step end or at
/// an interior minimum of the Hermite interpolant of y_xi -- are frozen:
/// tau recorded, y_xi and U_xi set to zero, H_xi pinned at its value at tau.
/// V is rebuilt as the prefix integral of (1 - broken) * H_xi. Throws
/// BlowUpError if any field becomes non-finite.
StepResult step(const LagrangianState& state, double t, double dt,
                double eps_break_abs);

class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(double t, const std::string& what);
    double time() const { return time_; }

  private:
    double time_;
};

struct Snapshot {
    double t = 0.0;
    EulerianState eulerian;
    LagrangianState lagrangian;
    DiagnosticsReport diagnostics;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    LagrangianState final_state;
    double t_final = 0.0;
    double dt = 0.0;
    double eps_break_abs = 0.0;
    std::vector<double> x_grid;  // Eulerian grid used for snapshots
};

/// Integrates the initial data to t_end, emitting snapshots (mapped back to
/// the initial Eulerian grid) at the configured output times. Output times
/// are rounded to the nearest step boundary.
Trajectory solve(const EulerianState& initial, const SolverConfig& config);

/// Continues integration from a Lagrangian checkpoint taken at time t0.
Trajectory solve_from(const LagrangianState& checkpoint, double t0,
                      std::span<const double> x_grid,
                      const SolverConfig& config);

/// Per-cell breaking times of the completed run, indexed by cell midpoint
/// label; tau = +inf where no breaking occurred.
struct BreakingProfile {
    std::vector<double> xi_mid;
    std::vector<double> tau;
};

BreakingProfile breaking_profile(const Trajectory& trajectory);

}  // namespace chdis
