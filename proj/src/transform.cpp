#include "chdis/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "numerics.hpp"

namespace chdis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AugmentedNode {
    double x;
    double u;
    double atom_mass;  // 0 when the node carries no atom
};

// Eulerian nodes merged with atom positions; an atom exactly on a grid node
// stays on that node, atoms outside the grid extend it with u = 0.
std::vector<AugmentedNode> augment_with_atoms(const EulerianState& s) {
    std::vector<Atom> atoms = s.atoms;
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
    std::vector<AugmentedNode> nodes;
    nodes.reserve(s.x.size() + atoms.size());
    for (std::size_t i = 0; i < s.x.size(); ++i)
        nodes.push_back({s.x[i], s.u[i], 0.0});
    for (const Atom& a : atoms) {
        const auto it = std::lower_bound(
            nodes.begin(), nodes.end(), a.pos,
            [](const AugmentedNode& n, double p) { return n.x < p; });
        if (it != nodes.end() && it->x == a.pos) {
            it->atom_mass += a.mass;
        } else {
            const double u = (a.pos < s.x.front() || a.pos > s.x.back())
                                 ? 0.0
                                 : detail::interp_at(s.x, s.u, a.pos);
            nodes.insert(it, {a.pos, u, a.mass});
        }
    }
    return nodes;
}

}  // namespace

LagrangianState eul_to_lag(const EulerianState& s) {
    check_valid(s);
    const std::vector<AugmentedNode> nodes = augment_with_atoms(s);
    const std::size_t m = nodes.size();

    // Cumulative ac energy on the augmented grid, one quadrature rule for
    // the whole image.
    std::vector<double> F(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double dx = nodes[i + 1].x - nodes[i].x;
        const double slope = (nodes[i + 1].u - nodes[i].u) / dx;
        F[i + 1] = F[i] + 0.5 * (nodes[i].u * nodes[i].u +
                                 nodes[i + 1].u * nodes[i + 1].u) * dx +
                   slope * slope * dx;
    }

    LagrangianState out;
    out.xi.reserve(m + s.atoms.size());
    double atom_mass_left = 0.0;  // G uses the open interval: mass strictly left
    std::vector<std::size_t> plateau_start;  // node index where a plateau begins
    for (std::size_t i = 0; i < m; ++i) {
        const double xi_left = nodes[i].x + F[i] + atom_mass_left;
        out.xi.push_back(xi_left);
        out.y.push_back(nodes[i].x);
        out.U.push_back(nodes[i].u);
        out.V.push_back(F[i]);
        if (nodes[i].atom_mass > 0.0) {
            plateau_start.push_back(out.xi.size() - 1);
            out.xi.push_back(xi_left + nodes[i].atom_mass);
            out.y.push_back(nodes[i].x);
            out.U.push_back(nodes[i].u);
            out.V.push_back(F[i]);
            atom_mass_left += nodes[i].atom_mass;
        }
    }
    const std::size_t n = out.xi.size();
    out.H.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.H[i] = out.xi[i] - out.y[i];

    const std::size_t cells = n - 1;
    out.y_xi.assign(cells, 0.0);
    out.U_xi.assign(cells, 0.0);
    out.V_xi.assign(cells, 0.0);
    out.H_xi.assign(cells, 0.0);
    out.tau.assign(cells, kInf);
    out.broken.assign(cells, 0);
    for (std::size_t c = 0; c < cells; ++c) {
        const double dxi = out.xi[c + 1] - out.xi[c];
        out.y_xi[c] = (out.y[c + 1] - out.y[c]) / dxi;
        out.U_xi[c] = (out.U[c + 1] - out.U[c]) / dxi;
        // y_xi + H_xi = 1 bit-exactly on every cell, and V_xi = H_xi off
        // the plateaus (nothing has broken at construction time)
        out.H_xi[c] = 1.0 - out.y_xi[c];
        out.V_xi[c] = out.H_xi[c];
    }
    for (std::size_t p : plateau_start) {
        out.y_xi[p] = 0.0;
        out.U_xi[p] = 0.0;
        out.V_xi[p] = 0.0;
        out.H_xi[p] = 1.0;
        out.tau[p] = 0.0;
        out.broken[p] = 1;
    }
    return out;
}

std::vector<PlateauRun> find_plateaus(const LagrangianState& s, double threshold) {
    const std::size_t cells = s.cells();
    if (threshold < 0.0) threshold = 1e-9 * detail::median(s.y_xi);
    std::vector<PlateauRun> runs;
    std::size_t c = 0;
    while (c < cells) {
        if (s.y_xi[c] <= threshold) {
            PlateauRun run;
            run.first_cell = c;
            double mass = 0.0;
            while (c < cells && s.y_xi[c] <= threshold) {
                mass += s.H_xi[c] * (s.xi[c + 1] - s.xi[c]);
                ++c;
            }
            run.last_cell = c - 1;
            run.pos = 0.5 * (s.y[run.first_cell] + s.y[run.last_cell + 1]);
            run.mass = mass;
            runs.push_back(run);
        } else {
            ++c;
        }
    }
    return runs;
}

EulerianState lag_to_eul(const LagrangianState& s, std::span<const double> x_grid) {
    if (x_grid.size() < 2)
        throw std::invalid_argument("lag_to_eul: need at least two query nodes");
    const double mono_tol = 1e-6 * std::max(1.0, std::abs(s.y.back() - s.y.front()));
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s.y[i + 1] - s.y[i] < -mono_tol)
            throw std::invalid_argument("invalid Lagrangian state: y decreases");
    }

    EulerianState out;
    out.x.assign(x_grid.begin(), x_grid.end());
    out.u.resize(x_grid.size());
    for (std::size_t q = 0; q < x_grid.size(); ++q) {
        const double x = x_grid[q];
        if (x < s.y.front() || x > s.y.back()) {
            out.u[q] = 0.0;  // zero extension outside the characteristics
            continue;
        }
        auto it = std::upper_bound(s.y.begin(), s.y.end(), x);
        std::size_t j = (it == s.y.begin())
                            ? 0
                            : static_cast<std::size_t>(it - s.y.begin()) - 1;
        if (j + 1 >= s.size()) {
            out.u[q] = s.U.back();
            continue;
        }
        const double dy = s.y[j + 1] - s.y[j];
        out.u[q] = (dy > 0.0) ? s.U[j] + (s.U[j + 1] - s.U[j]) * (x - s.y[j]) / dy
                              : s.U[j];
    }
    for (const PlateauRun& run : find_plateaus(s)) {
        if (run.mass > 0.0) out.atoms.push_back({run.pos, run.mass});
    }
    return out;
}

EulerianState lag_to_eul(const LagrangianState& s) {
    std::vector<double> grid;
    grid.reserve(s.size());
    for (double v : s.y) {
        if (grid.empty() || v > grid.back()) grid.push_back(v);
    }
    if (grid.size() < 2)
        throw std::invalid_argument("lag_to_eul: y image degenerates to a point");
    return lag_to_eul(s, grid);
}

LagrangianState eul_to_lag_with_label(const EulerianState& s,
                                      const RelabelFunction& g) {
    if (!is_relabeling(g))
        throw std::invalid_argument("eul_to_lag_with_label: g is not an admissible relabeling");
    // relabel composes exactly on g's grid refined by the preimages of the
    // image nodes, so atom plateaus (whose endpoints are image nodes) stay
    // resolved instead of being smeared across g's cells.
    return relabel(eul_to_lag(s), g);
}

}  // namespace chdis
