#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "chdis/diagnostics.hpp"
#include "chdis/evolution.hpp"
#include "chdis/io.hpp"
#include "chdis/oracle.hpp"
#include "chdis/presets.hpp"
#include "chdis/transform.hpp"

namespace py = pybind11;
using namespace chdis;

PYBIND11_MODULE(_chdis, m) {
    m.doc() = "dissipative Camassa-Holm solver in Lagrangian coordinates";
    m.attr("__version__") = version_string();

    py::class_<Atom>(m, "Atom")
        .def(py::init<double, double>(), py::arg("pos"), py::arg("mass"))
        .def_readwrite("pos", &Atom::pos)
        .def_readwrite("mass", &Atom::mass)
        .def("__repr__", [](const Atom& a) {
            return "Atom(pos=" + std::to_string(a.pos) + ", mass=" + std::to_string(a.mass) + ")";
        });

    py::class_<EulerianState>(m, "EulerianState")
        .def(py::init<>())
        .def(py::init([](std::vector<double> x, std::vector<double> u,
                         std::vector<std::pair<double, double>> atoms) {
                 EulerianState s;
                 s.x = std::move(x);
                 s.u = std::move(u);
                 for (auto [p, mss] : atoms) s.atoms.push_back({p, mss});
                 return s;
             }),
             py::arg("x"), py::arg("u"),
             py::arg("atoms") = std::vector<std::pair<double, double>>{})
        .def_readwrite("x", &EulerianState::x)
        .def_readwrite("u", &EulerianState::u)
        .def_readwrite("atoms", &EulerianState::atoms)
        .def("__len__", &EulerianState::size);

    py::class_<LagrangianState>(m, "LagrangianState")
        .def(py::init<>())
        .def_readwrite("xi", &LagrangianState::xi)
        .def_readwrite("y", &LagrangianState::y)
        .def_readwrite("U", &LagrangianState::U)
        .def_readwrite("V", &LagrangianState::V)
        .def_readwrite("H", &LagrangianState::H)
        .def_readwrite("y_xi", &LagrangianState::y_xi)
        .def_readwrite("U_xi", &LagrangianState::U_xi)
        .def_readwrite("V_xi", &LagrangianState::V_xi)
        .def_readwrite("H_xi", &LagrangianState::H_xi)
        .def_readwrite("tau", &LagrangianState::tau)
        .def_readwrite("broken", &LagrangianState::broken)
        .def("__len__", &LagrangianState::size)
        .def("cells", &LagrangianState::cells);

    py::class_<RelabelFunction>(m, "RelabelFunction")
        .def(py::init([](std::vector<double> xi, std::vector<double> f) {
                 return RelabelFunction{std::move(xi), std::move(f)};
             }),
             py::arg("xi"), py::arg("f"))
        .def_readwrite("xi", &RelabelFunction::xi)
        .def_readwrite("f", &RelabelFunction::f);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("residual", &CheckResult::residual)
        .def_readonly("tolerance", &CheckResult::tolerance)
        .def_readonly("pass_", &CheckResult::pass)
        .def_readonly("loc_t", &CheckResult::loc_t)
        .def_readonly("loc_x", &CheckResult::loc_x)
        .def_readonly("note", &CheckResult::note)
        .def("__repr__", [](const CheckResult& r) {
            return "CheckResult(" + r.name + (r.pass ? ", PASS" : ", FAIL") + ")";
        });

    py::class_<DiagnosticsReport>(m, "DiagnosticsReport")
        .def("all_pass", &DiagnosticsReport::all_pass)
        .def("checks", &DiagnosticsReport::checks)
        .def("find", [](const DiagnosticsReport& r, const std::string& name) {
            const CheckResult* c = r.find(name);
            return c ? std::optional<CheckResult>(*c) : std::nullopt;
        });

    // Eulerian operations
    m.def("check_valid",
          [](const EulerianState& s, double decay_tol) {
              check_valid(s, {.decay_tol = decay_tol});
          },
          py::arg("state"), py::arg("decay_tol") = 1e-8);
    m.def("compute_F", &compute_F, py::arg("state"), py::arg("x"));
    m.def("compute_F_at_nodes", &compute_F_at_nodes);
    m.def("compute_p_px", &compute_p_px, py::arg("state"), py::arg("x"));
    m.def("compute_p_px_at_nodes", [](const EulerianState& s) {
        std::vector<double> p(s.size()), px(s.size());
        compute_p_px_at_nodes(s, p, px);
        return std::make_pair(std::move(p), std::move(px));
    });
    m.def("h1_norm", &h1_norm);
    m.def("nu_total", &nu_total);
    m.def("max_forward_slope", &max_forward_slope);

    // Lagrangian operations
    m.def("validate",
          [](const LagrangianState& s, double tol, double c_floor) {
              return validate(s, {.tol = tol, .c_floor = c_floor});
          },
          py::arg("state"), py::arg("tol") = 1e-9, py::arg("c_floor") = 1e-10);
    m.def("is_relabeling", &is_relabeling, py::arg("f"), py::arg("c_max") = 1e4);
    m.def("relabel", &relabel);
    m.def("normalize_to_F0", &normalize_to_F0);
    m.def("invert_relabeling", &invert_relabeling);

    // transforms
    m.def("eul_to_lag", &eul_to_lag);
    m.def("lag_to_eul",
          [](const LagrangianState& s, std::optional<std::vector<double>> grid) {
              return grid ? lag_to_eul(s, *grid) : lag_to_eul(s);
          },
          py::arg("state"), py::arg("x_grid") = std::nullopt);
    m.def("eul_to_lag_with_label", &eul_to_lag_with_label);

    // evolution
    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("t_end", &SolverConfig::t_end)
        .def_readwrite("eps_break", &SolverConfig::eps_break)
        .def_readwrite("output_times", &SolverConfig::output_times)
        .def_readwrite("c_floor", &SolverConfig::c_floor)
        .def_readwrite("validate_tol", &SolverConfig::validate_tol);

    py::class_<PQField>(m, "PQField")
        .def_readonly("P", &PQField::P)
        .def_readonly("Q", &PQField::Q);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("t", &Snapshot::t)
        .def_readonly("eulerian", &Snapshot::eulerian)
        .def_readonly("lagrangian", &Snapshot::lagrangian)
        .def_readonly("diagnostics", &Snapshot::diagnostics);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("snapshots", &Trajectory::snapshots)
        .def_readonly("final_state", &Trajectory::final_state)
        .def_readonly("t_final", &Trajectory::t_final)
        .def_readonly("dt", &Trajectory::dt)
        .def_readonly("x_grid", &Trajectory::x_grid);

    py::class_<BreakingProfile>(m, "BreakingProfile")
        .def_readonly("xi_mid", &BreakingProfile::xi_mid)
        .def_readonly("tau", &BreakingProfile::tau);

    m.def("compute_PQ", &compute_PQ);
    m.def("solve", &solve, py::arg("initial"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("breaking_profile", &breaking_profile);

    // exact reference solution
    py::class_<PeakonAntipeakonParams>(m, "PeakonAntipeakonParams")
        .def_readonly("p0", &PeakonAntipeakonParams::p0)
        .def_readonly("q0", &PeakonAntipeakonParams::q0)
        .def_readonly("D", &PeakonAntipeakonParams::D)
        .def_readonly("t_star", &PeakonAntipeakonParams::t_star);
    m.def("params_from_p0q0", &params_from_p0q0, py::arg("p0"), py::arg("q0"));
    m.def("params_from_Dtstar", &params_from_Dtstar, py::arg("D"), py::arg("t_star"));
    m.def("momentum_p", &momentum_p);
    m.def("position_q", &position_q);
    m.def("exact_u", &exact_u, py::arg("params"), py::arg("t"), py::arg("x"));
    m.def("exact_F", &exact_F, py::arg("params"), py::arg("t"), py::arg("x"));
    m.def("exact_p_px", &exact_p_px, py::arg("params"), py::arg("t"), py::arg("x"));

    // presets
    m.def("make_zero", &make_zero, py::arg("a"), py::arg("b"), py::arg("n"));
    m.def("make_peakon", &make_peakon, py::arg("c"), py::arg("a"), py::arg("b"), py::arg("n"));
    m.def("make_peakon_antipeakon", &make_peakon_antipeakon,
          py::arg("params"), py::arg("a"), py::arg("b"), py::arg("n"));

    // diagnostics
    m.def("check_one_sided_lipschitz", &check_one_sided_lipschitz,
          py::arg("traj"), py::arg("D_bound"), py::arg("t_min") = 0.1,
          py::arg("margin") = 0.1);
    m.def("check_energy", &check_energy, py::arg("traj"),
          py::arg("mono_tol_per_step") = 1e-6, py::arg("nu_rel_tol") = 1e-4);
    m.def("check_tv_p_along_characteristic", &check_tv_p_along_characteristic,
          py::arg("traj"), py::arg("node"), py::arg("cap") = 0.0);
    m.def("check_c2_identity", &check_c2_identity, py::arg("traj"), py::arg("tol") = 1e-6);
    m.def("check_broken_monotone", &check_broken_monotone);
    m.def("check_pq_bound", &check_pq_bound, py::arg("traj"), py::arg("tol") = 1e-12);
    m.def("check_holder_continuity", &check_holder_continuity,
          py::arg("traj"), py::arg("constant") = 0.0);
    m.def("check_slope_ceiling", &check_slope_ceiling, py::arg("traj"),
          py::arg("margin") = 0.1);
    m.def("check_nu_independence",
          [](const EulerianState& u0, std::vector<std::pair<double, double>> atoms,
             const SolverConfig& cfg, double tol) {
              std::vector<Atom> as;
              for (auto [p, mss] : atoms) as.push_back({p, mss});
              return check_nu_independence(u0, as, cfg, tol);
          },
          py::arg("u0"), py::arg("atoms"), py::arg("config"), py::arg("tol") = 1e-3,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_all_checks", &run_all_checks);

    // JSON bridges
    m.def("eulerian_to_json", [](const EulerianState& s) { return to_json(s).dump(); });
    m.def("eulerian_from_json",
          [](const std::string& text) { return eulerian_from_json(nlohmann::json::parse(text)); });
    m.def("lagrangian_to_json", [](const LagrangianState& s) { return to_json(s).dump(); });
    m.def("lagrangian_from_json", [](const std::string& text) {
        return lagrangian_from_json(nlohmann::json::parse(text));
    });
    m.def("report_to_json", [](const DiagnosticsReport& r) { return to_json(r).dump(); });
}
