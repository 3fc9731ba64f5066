#pragma once

#include <utility>

namespace chdis {

/// Parameters of the closed-form symmetric peakon-antipeakon solution.
/// The initial profile is p0 (e^{-|x-q0|} - e^{-|x+q0|}) with p0 > 0 and
/// q0 < 0; D and t_star are derived:
///   D^2 = p0^2 (1 - e^{2 q0}),   t_star = ln((p0+D)/(p0-D)) / (2D).
/// All energy concentrates at the origin at t_star and is then removed.
struct PeakonAntipeakonParams {
    double p0 = 0.0;
    double q0 = 0.0;
    double D = 0.0;
    double t_star = 0.0;
};

PeakonAntipeakonParams params_from_p0q0(double p0, double q0);
PeakonAntipeakonParams params_from_Dtstar(double D, double t_star);

/// Momentum p(t) and position q(t) of the right peak for t < t_star,
/// in the cancellation-free forms D / tanh(D (t_star - t)) and
/// -ln cosh(D (t_star - t)).
double momentum_p(const PeakonAntipeakonParams& params, double t);
double position_q(const PeakonAntipeakonParams& params, double t);

/// Exact wave profile; identically zero for t past t_star. Queries within
/// 1e-12 of t_star are evaluated on the pre-breaking branch at the window
/// edge (the discontinuity set has measure zero).
double exact_u(const PeakonAntipeakonParams& params, double t, double x);

/// Exact cumulative ac energy F(t, x); drops from 4 D^2 to 0 across t_star.
double exact_F(const PeakonAntipeakonParams& params, double t, double x);

/// Exact (p, p_x)(t, x); (0, 0) for t past t_star. Left limits at t_star are
/// D^2 e^{-|x|} and -sign(x) D^2 e^{-|x|}.
std::pair<double, double> exact_p_px(const PeakonAntipeakonParams& params,
                                     double t, double x);

}  // namespace chdis
