#pragma once

#include <cstdint>
#include <vector>

#include "chdis/report.hpp"

namespace chdis {

/// Lagrangian data on a strictly increasing label grid xi. The primal fields
/// y (characteristic position), U (velocity), V (surviving cumulative
/// energy), and H (total cumulative energy) are nodal; their derivatives
/// y_xi, U_xi, V_xi, H_xi live on cells, as do the breaking time tau
/// (+inf if the cell never breaks) and the broken flag.
struct LagrangianState {
    std::vector<double> xi;
    std::vector<double> y, U, V, H;
    std::vector<double> y_xi, U_xi, V_xi, H_xi;
    std::vector<double> tau;
    std::vector<std::uint8_t> broken;

    std::size_t size() const { return xi.size(); }
    std::size_t cells() const { return xi.empty() ? 0 : xi.size() - 1; }
};

struct LagrangianValidateOptions {
    double tol = 1e-9;      // residual tolerance, scaled where stated
    double c_floor = 1e-10; // lower bound required of y_xi + H_xi
};

/// Checks the defining constraints of admissible Lagrangian states:
/// y_xi >= 0, H_xi >= V_xi >= 0, y_xi + H_xi >= c, the compatibility
/// identity U^2 y_xi^2 + U_xi^2 = y_xi V_xi (residual scaled by
/// 1 + y_xi H_xi), V_xi = 0 wherever y_xi = 0, monotone V and H, and
/// V, H ~ 0 at the left boundary. Structural problems (wrong array
/// lengths, non-increasing xi) throw std::invalid_argument.
DiagnosticsReport validate(const LagrangianState& state,
                           const LagrangianValidateOptions& opts = {});

/// A sampled label change: new label f as a function of the old one.
struct RelabelFunction {
    std::vector<double> xi;
    std::vector<double> f;
};

/// Sufficient discrete test for an admissible relabeling: every cell slope
/// of f within [1/c_max, c_max], f - id bounded, and the squared deviation
/// of slope from 1 summable.
bool is_relabeling(const RelabelFunction& f, double c_max = 1e4);

/// Composes all fields with f by monotone piecewise-linear interpolation.
/// The output grid is f's grid refined by the preimages of the state's own
/// nodes, so the composition is exact for piecewise-linear data; cell
/// derivatives are recomputed by the chain rule. Throws if !is_relabeling(f).
LagrangianState relabel(const LagrangianState& state, const RelabelFunction& f);

/// Canonical representative with y + H = id: relabels by the inverse of
/// y + H. Node values are preserved, only labels move, so y_xi + H_xi = 1
/// holds exactly on every cell afterwards. Requires y + H strictly
/// increasing (guaranteed when y_xi + H_xi >= c > 0).
LagrangianState normalize_to_F0(const LagrangianState& state);

/// Monotone inverse of f, sampled on f's value range.
RelabelFunction invert_relabeling(const RelabelFunction& f);

}  // namespace chdis
