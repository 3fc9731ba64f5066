#pragma once

#include <span>

#include "chdis/eulerian.hpp"
#include "chdis/lagrangian.hpp"

namespace chdis {

/// Change of variables from Eulerian to Lagrangian coordinates. The label
/// grid is the image of the Eulerian nodes under x + G(x), where
/// G(x) = nu((-inf, x)), augmented with both plateau endpoints per atom;
/// each atom becomes an exact plateau cell with y_xi = V_xi = 0, H_xi = 1
/// and tau = 0. The output satisfies y + H = id at every node.
LagrangianState eul_to_lag(const EulerianState& state);

/// Same map followed by relabeling with g, constructed directly on g's grid
/// (augmented with the preimages of plateau endpoints so atoms stay
/// resolved). Throws if !is_relabeling(g).
LagrangianState eul_to_lag_with_label(const EulerianState& state,
                                      const RelabelFunction& g);

/// Change of variables back to Eulerian coordinates: u(x) = U at the label
/// where y = x, atoms from maximal runs of cells with y_xi below the plateau
/// threshold (mass = integral of H_xi over the run). u is evaluated on the
/// given query grid; outside the range of y it is zero.
EulerianState lag_to_eul(const LagrangianState& state,
                         std::span<const double> x_grid);

/// As above with the query grid taken from the y values themselves
/// (plateau runs collapsed to a single node).
EulerianState lag_to_eul(const LagrangianState& state);

struct PlateauRun {
    std::size_t first_cell = 0;
    std::size_t last_cell = 0;  // inclusive
    double pos = 0.0;
    double mass = 0.0;
};

/// Maximal runs of cells with y_xi < threshold. The default threshold
/// (threshold < 0) is 1e-9 times the median cell y_xi.
std::vector<PlateauRun> find_plateaus(const LagrangianState& state,
                                      double threshold = -1.0);

}  // namespace chdis
