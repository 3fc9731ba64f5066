#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace chdis {

/// Point mass of the singular energy part.
struct Atom {
    double pos = 0.0;
    double mass = 0.0;
};

/// Eulerian data: a sampled wave profile u on a strictly increasing grid plus
/// the singular part of the energy measure as a list of atoms. The absolutely
/// continuous part of the measure is always (u^2 + u_x^2) dx for the
/// piecewise-linear interpolant of u; it is never stored separately.
/// Outside the grid u is extended by zero.
struct EulerianState {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<Atom> atoms;

    std::size_t size() const { return x.size(); }
};

struct EulerianCheckOptions {
    double decay_tol = 1e-8;  // required |u| at both boundary nodes
};

/// Throws std::invalid_argument if the state is structurally invalid
/// (non-increasing grid, non-finite samples, non-positive atom masses) or if
/// u has not decayed below decay_tol at the boundary nodes.
void check_valid(const EulerianState& state, const EulerianCheckOptions& opts = {});

/// Largest forward-difference slope of u; the discrete proxy for the
/// one-sided slope bound required of admissible profiles.
double max_forward_slope(const EulerianState& state);

/// Cumulative energy of the absolutely continuous part up to x:
/// trapezoid quadrature of u^2 plus exact integration of the squared cell
/// slope. Nondecreasing in x; atoms are not included.
double compute_F(const EulerianState& state, double x);

/// F at every grid node, in one O(N) pass. F(x[0]) = 0 by the zero extension.
std::vector<double> compute_F_at_nodes(const EulerianState& state);

/// Nonlocal pressure term p and its derivative p_x at the query point,
/// from the exponential-kernel quadrature of 2u^2 + u_x^2. Guarantees
/// p >= 0 and |p_x| <= p.
std::pair<double, double> compute_p_px(const EulerianState& state, double x);

/// p and p_x at every grid node via left/right exponential prefix
/// recursions; O(N) total, not O(N^2).
void compute_p_px_at_nodes(const EulerianState& state,
                           std::span<double> p, std::span<double> px);

/// sqrt of the total ac energy, same quadrature as compute_F.
double h1_norm(const EulerianState& state);

/// Total measure: F(+inf) plus the sum of atom masses.
double nu_total(const EulerianState& state);

}  // namespace chdis
