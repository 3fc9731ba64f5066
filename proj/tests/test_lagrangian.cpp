#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chdis/lagrangian.hpp"
#include "chdis/transform.hpp"
#include "testutil.hpp"

using namespace chdis;
using test::linspace;

namespace {

// image of u = 0, nu = 0: y = xi, everything else zero
LagrangianState trivial_state(std::size_t n) {
    LagrangianState s;
    s.xi = linspace(-10.0, 10.0, n);
    s.y = s.xi;
    s.U.assign(n, 0.0);
    s.V.assign(n, 0.0);
    s.H.assign(n, 0.0);
    s.y_xi.assign(n - 1, 1.0);
    s.U_xi.assign(n - 1, 0.0);
    s.V_xi.assign(n - 1, 0.0);
    s.H_xi.assign(n - 1, 0.0);
    s.tau.assign(n - 1, std::numeric_limits<double>::infinity());
    s.broken.assign(n - 1, 0);
    return s;
}

double peakon(double x) { return std::exp(-std::abs(x)); }

LagrangianState peakon_image(std::size_t n = 2001) {
    return eul_to_lag(test::sample_profile(-25, 25, n, peakon));
}

RelabelFunction arctan_map(double a, double b, std::size_t n) {
    RelabelFunction f;
    f.xi = linspace(a, b, n);
    f.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.f[i] = f.xi[i] + std::atan(f.xi[i]);
    return f;
}

}  // namespace

TEST_CASE("validate accepts the trivial state with zero residuals") {
    const DiagnosticsReport report = validate(trivial_state(101));
    CHECK(report.all_pass());
    for (const auto& r : report.checks()) CHECK(r.residual <= 0.0);
}

TEST_CASE("validate flags a negative y_xi") {
    LagrangianState s = trivial_state(101);
    s.y_xi[50] = -0.1;
    const DiagnosticsReport report = validate(s);
    CHECK_FALSE(report.all_pass());
    const CheckResult* r = report.find("lag.y_xi_nonneg");
    REQUIRE(r != nullptr);
    CHECK_FALSE(r->pass);
    CHECK(r->residual == doctest::Approx(0.1));
}

TEST_CASE("validate flags energy ordering and boundary violations") {
    LagrangianState s = trivial_state(64);
    SUBCASE("V_xi above H_xi") {
        s.V_xi[10] = 0.5;  // H_xi is 0 there
        CHECK_FALSE(validate(s).find("lag.energy_order")->pass);
    }
    SUBCASE("V_xi nonzero where y_xi = 0") {
        s.y_xi[10] = 0.0;
        s.V_xi[10] = 0.5;
        s.H_xi[10] = 1.0;
        CHECK_FALSE(validate(s).find("lag.vanishing_energy")->pass);
    }
    SUBCASE("left boundary energy") {
        for (std::size_t i = 0; i < s.size(); ++i) s.H[i] = 1.0;
        CHECK_FALSE(validate(s).find("lag.left_boundary")->pass);
    }
    SUBCASE("c floor") {
        s.y_xi[5] = 0.0;  // H_xi is 0: y_xi + H_xi = 0 < c
        CHECK_FALSE(validate(s).find("lag.c_floor")->pass);
    }
}

TEST_CASE("validate rejects malformed grids") {
    LagrangianState s = trivial_state(32);
    s.xi[5] = s.xi[4];
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    LagrangianState short_arrays = trivial_state(32);
    short_arrays.U_xi.pop_back();
    CHECK_THROWS_AS(validate(short_arrays), std::invalid_argument);
}

TEST_CASE("peakon image passes validation with tiny identity residual") {
    const LagrangianState X = peakon_image();
    const DiagnosticsReport report = validate(X);
    CHECK(report.all_pass());
    const CheckResult* c2 = report.find("lag.c2_identity");
    REQUIRE(c2 != nullptr);
    CHECK(c2->residual <= 1e-10 * (1.0 + X.H.back()));
}

TEST_CASE("is_relabeling on the identity") {
    RelabelFunction f;
    f.xi = linspace(-5, 5, 101);
    f.f = f.xi;
    CHECK(is_relabeling(f));
}

TEST_CASE("is_relabeling accepts xi + arctan(xi)") {
    // slope in [1, 2], bounded deviation
    CHECK(is_relabeling(arctan_map(-8, 8, 401)));
}

TEST_CASE("is_relabeling rejects a cubic flat at the origin") {
    RelabelFunction f;
    f.xi = linspace(-2.0, 2.0, 4001);
    f.f.resize(f.xi.size());
    for (std::size_t i = 0; i < f.xi.size(); ++i) {
        const double z = f.xi[i];
        f.f[i] = std::abs(z) <= 1.0 ? z * z * z : z;
    }
    CHECK_FALSE(is_relabeling(f));
}

TEST_CASE("relabel with the identity returns the state unchanged") {
    const LagrangianState X = peakon_image(501);
    RelabelFunction id;
    id.xi = X.xi;
    id.f = X.xi;
    const LagrangianState Y = relabel(X, id);
    REQUIRE(Y.size() == X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        CHECK(Y.y[i] == doctest::Approx(X.y[i]).epsilon(1e-14));
        CHECK(Y.U[i] == doctest::Approx(X.U[i]).epsilon(1e-14));
        CHECK(Y.H[i] == doctest::Approx(X.H[i]).epsilon(1e-14));
    }
}

TEST_CASE("relabel inverts exactly through the sampled inverse") {
    const LagrangianState X = peakon_image(501);
    const RelabelFunction f = arctan_map(-30, 30, 1501);
    const LagrangianState Y = relabel(X, f);
    const LagrangianState Z = relabel(Y, invert_relabeling(f));
    // compare on the original nodes by interpolation
    for (std::size_t i = 0; i < X.size(); i += 7) {
        const double xi = X.xi[i];
        if (xi <= Z.xi.front() || xi >= Z.xi.back()) continue;
        auto at = [&](const std::vector<double>& field) {
            std::size_t j = 0;
            while (j + 2 < Z.xi.size() && Z.xi[j + 1] <= xi) ++j;
            const double w = (xi - Z.xi[j]) / (Z.xi[j + 1] - Z.xi[j]);
            return field[j] + w * (field[j + 1] - field[j]);
        };
        CHECK(at(Z.y) == doctest::Approx(X.y[i]).epsilon(1e-12));
        CHECK(at(Z.U) == doctest::Approx(X.U[i]).epsilon(1e-12));
        CHECK(at(Z.V) == doctest::Approx(X.V[i]).epsilon(1e-12));
    }
}

TEST_CASE("relabel preserves the validation invariants") {
    const LagrangianState X = peakon_image(801);
    const LagrangianState Y = relabel(X, arctan_map(-30, 30, 901));
    CHECK(validate(Y).all_pass());
}

TEST_CASE("relabel keeps the Eulerian image") {
    const LagrangianState X = peakon_image(801);
    const LagrangianState Y = relabel(X, arctan_map(-30, 30, 901));
    const std::vector<double> grid = linspace(-20, 20, 501);
    const EulerianState a = lag_to_eul(X, grid);
    const EulerianState b = lag_to_eul(Y, grid);
    CHECK(test::sup_diff(a.u, b.u) < 1e-12);
}

TEST_CASE("relabel rejects a non-relabeling") {
    RelabelFunction f;
    f.xi = linspace(-1, 1, 11);
    f.f.assign(11, 0.0);  // constant, slope 0
    CHECK_THROWS_AS(relabel(trivial_state(32), f), std::invalid_argument);
}

TEST_CASE("normalize_to_F0 leaves canonical states alone") {
    const LagrangianState X = peakon_image(501);  // y + H = id by construction
    const LagrangianState Y = normalize_to_F0(X);
    for (std::size_t i = 0; i < X.size(); ++i)
        CHECK(Y.xi[i] == doctest::Approx(X.xi[i]).epsilon(1e-14));
    for (std::size_t c = 0; c < X.cells(); ++c)
        CHECK(Y.y_xi[c] + Y.H_xi[c] == 1.0);
}

TEST_CASE("normalize_to_F0 undoes a relabeling") {
    const LagrangianState X = peakon_image(501);
    const LagrangianState Y = relabel(X, arctan_map(-30, 30, 1401));
    const LagrangianState Z = normalize_to_F0(Y);
    CHECK(validate(Z).all_pass());
    for (std::size_t c = 0; c < Z.cells(); ++c)
        CHECK(Z.y_xi[c] + Z.H_xi[c] == 1.0);
    // same Eulerian image as the original
    const std::vector<double> grid = linspace(-20, 20, 501);
    CHECK(test::sup_diff(lag_to_eul(Z, grid).u, lag_to_eul(X, grid).u) < 1e-10);
}

TEST_CASE("normalize_to_F0 applied to the atom image is the identity") {
    EulerianState e = test::sample_profile(-10, 10, 201, [](double) { return 0.0; });
    e.atoms.push_back({0.0, 1.0});
    const LagrangianState X = eul_to_lag(e);
    const LagrangianState Y = normalize_to_F0(X);
    for (std::size_t i = 0; i < X.size(); ++i)
        CHECK(Y.xi[i] == doctest::Approx(X.xi[i]).epsilon(1e-14));
}

TEST_CASE("normalize_to_F0 rejects a collapsed label map") {
    LagrangianState s = trivial_state(16);
    // make y + H locally constant
    s.y[7] = s.y[6];
    s.H[7] = s.H[6];
    CHECK_THROWS_AS(normalize_to_F0(s), std::invalid_argument);
}
