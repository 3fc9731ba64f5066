#include "chdis/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace chdis {

namespace {

// Evaluation window around t_star: the pre-breaking branch is used up to
// t_star + window and clamped at distance >= window from t_star.
constexpr double kTStarWindow = 1e-12;

double log_cosh(double z) {
    z = std::abs(z);
    return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
}

// 1/sinh(z)^2 without overflow for large z.
double csch2(double z) {
    const double e = 2.0 * std::exp(-z) / (-std::expm1(-2.0 * z));
    return e * e;
}

bool past_break(const PeakonAntipeakonParams& pp, double t) {
    return t >= pp.t_star + kTStarWindow;
}

double time_to_break(const PeakonAntipeakonParams& pp, double t) {
    return std::max(pp.t_star - t, kTStarWindow);
}

}  // namespace

PeakonAntipeakonParams params_from_p0q0(double p0, double q0) {
    if (!(p0 > 0.0) || !(q0 < 0.0))
        throw std::invalid_argument("peakon-antipeakon parameters need p0 > 0 and q0 < 0");
    PeakonAntipeakonParams pp;
    pp.p0 = p0;
    pp.q0 = q0;
    pp.D = p0 * std::sqrt(-std::expm1(2.0 * q0));
    pp.t_star = std::log((p0 + pp.D) / (p0 - pp.D)) / (2.0 * pp.D);
    return pp;
}

PeakonAntipeakonParams params_from_Dtstar(double D, double t_star) {
    if (!(D > 0.0) || !(t_star > 0.0))
        throw std::invalid_argument("peakon-antipeakon parameters need D > 0 and t_star > 0");
    PeakonAntipeakonParams pp;
    pp.D = D;
    pp.t_star = t_star;
    pp.p0 = D / std::tanh(D * t_star);
    pp.q0 = -log_cosh(D * t_star);
    return pp;
}

double momentum_p(const PeakonAntipeakonParams& pp, double t) {
    return pp.D / std::tanh(pp.D * time_to_break(pp, t));
}

double position_q(const PeakonAntipeakonParams& pp, double t) {
    return -log_cosh(pp.D * time_to_break(pp, t));
}

double exact_u(const PeakonAntipeakonParams& pp, double t, double x) {
    if (past_break(pp, t)) return 0.0;
    const double p = momentum_p(pp, t);
    const double q = position_q(pp, t);
    return p * (std::exp(-std::abs(x - q)) - std::exp(-std::abs(x + q)));
}

double exact_F(const PeakonAntipeakonParams& pp, double t, double x) {
    if (past_break(pp, t)) return 0.0;
    const double s = time_to_break(pp, t);
    const double q = -log_cosh(pp.D * s);
    const double D2 = pp.D * pp.D;
    const double one_m_e2q = -std::expm1(2.0 * q);
    if (x < q) return D2 * one_m_e2q * std::exp(2.0 * (x - q));
    if (x > -q) return 4.0 * D2 - D2 * one_m_e2q * std::exp(-2.0 * (x + q));
    const double p = pp.D / std::tanh(pp.D * s);
    return 2.0 * D2 + 2.0 * p * p * std::exp(2.0 * q) * std::sinh(2.0 * x);
}

std::pair<double, double> exact_p_px(const PeakonAntipeakonParams& pp,
                                     double t, double x) {
    if (past_break(pp, t)) return {0.0, 0.0};
    const double s = time_to_break(pp, t);
    const double q = -log_cosh(pp.D * s);
    const double D2 = pp.D * pp.D;
    const double th = std::tanh(pp.D * s);
    const double A = 0.25 * D2 * th * th;        // D^4 / (4 p(t)^2)
    const double B = 0.5 * D2 * csch2(pp.D * s); // (p(t)^2 - D^2) / 2

    if (x < q) {
        const double shq = std::sinh(q) + std::sinh(3.0 * q);
        const double p = A * (std::exp(x + q) - 2.0 * std::exp(2.0 * (x - q)) +
                              3.0 * std::exp(x - q)) -
                         B * std::exp(x) * shq;
        const double px = A * (std::exp(x + q) - 4.0 * std::exp(2.0 * (x - q)) +
                               3.0 * std::exp(x - q)) -
                          B * std::exp(x) * shq;
        return {p, px};
    }
    if (x > -q) {
        const double shq = std::sinh(q) + std::sinh(3.0 * q);
        const double p = A * (std::exp(-x + q) - 2.0 * std::exp(-2.0 * (x + q)) +
                              3.0 * std::exp(-(x + q))) -
                         B * std::exp(-x) * shq;
        const double px = A * (-std::exp(-x + q) + 4.0 * std::exp(-2.0 * (x + q)) -
                               3.0 * std::exp(-(x + q))) +
                          B * std::exp(-x) * shq;
        return {p, px};
    }
    // Middle branch. The combination 3e^-q + 2e^q - e^3q - 4 cancels
    // catastrophically near t_star when formed from bare exponentials, so it
    // is assembled from expm1 terms instead; same for 4cosh(x) - 2cosh(2x) - 2.
    const double f = 3.0 * std::expm1(-q) + 2.0 * std::expm1(q) - std::expm1(3.0 * q);
    const double sh2 = std::sinh(0.5 * x);
    const double p = A * (std::exp(q - x) + std::exp(x + q)) +
                     B * std::cosh(x) * (f - 8.0 * sh2 * sh2);
    const double px = A * (std::exp(x + q) - std::exp(q - x)) +
                      B * std::sinh(x) * (f + 4.0 * (1.0 - 2.0 * std::cosh(x)));
    return {p, px};
}

}  // namespace chdis
