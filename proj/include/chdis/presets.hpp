#pragma once

#include <cstddef>

#include "chdis/eulerian.hpp"
#include "chdis/oracle.hpp"

namespace chdis {

/// u = 0 on n uniform nodes over [a, b].
EulerianState make_zero(double a, double b, std::size_t n);

/// Single peakon c e^{-|x|} on n near-uniform nodes over [a, b]; the node
/// nearest the crest is snapped onto it so the kink sits on the grid.
EulerianState make_peakon(double c, double a, double b, std::size_t n);

/// Initial peakon-antipeakon profile for the given parameters, with the
/// nodes nearest +-q0 snapped onto the kinks.
EulerianState make_peakon_antipeakon(const PeakonAntipeakonParams& params,
                                     double a, double b, std::size_t n);

}  // namespace chdis
