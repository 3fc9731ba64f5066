// chdis: global weak dissipative solutions of the Camassa-Holm equation
// in Lagrangian coordinates, with the exact peakon-antipeakon solution as
// reference and a diagnostics suite over the defining solution properties.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chdis/diagnostics.hpp"
#include "chdis/evolution.hpp"
#include "chdis/io.hpp"
#include "chdis/oracle.hpp"
#include "chdis/presets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int log_level() {
    const char* env = std::getenv("CH_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[chdis] " << msg << "\n";
}

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string meta_line(const std::string& hash) {
    return "chdis " + chdis::version_string() + " config_hash=" + hash;
}

struct RunSetup {
    chdis::EulerianState initial;
    chdis::SolverConfig solver;
    fs::path out_dir;
    bool csv = true;
    bool json_out = true;
    json config;
};

RunSetup parse_run_config(const json& cfg, const fs::path& config_dir) {
    RunSetup setup;
    setup.config = cfg;

    if (!cfg.contains("solver")) throw std::runtime_error("config: missing 'solver' section");
    const json& sv = cfg.at("solver");
    const double dt = sv.value("dt", 1e-3);
    if (!(dt > 0.0)) throw std::runtime_error("dt must be positive");
    setup.solver.dt = dt;
    setup.solver.t_end = sv.value("t_end", 1.0);
    setup.solver.eps_break = sv.value("eps_break", 1e-8);
    const std::size_t n = sv.value("N", std::size_t{4096});
    double a = -20.0, b = 20.0;
    if (sv.contains("xi_domain")) {
        const auto& dom = sv.at("xi_domain");
        if (!dom.is_array() || dom.size() != 2)
            throw std::runtime_error("config: solver.xi_domain must be [a, b]");
        a = dom[0].get<double>();
        b = dom[1].get<double>();
    }
    if (sv.contains("c_floor")) setup.solver.c_floor = sv.at("c_floor").get<double>();

    if (!cfg.contains("initial")) throw std::runtime_error("config: missing 'initial' section");
    const json& ini = cfg.at("initial");
    const std::string preset = ini.value("preset", "zero");
    if (preset == "zero") {
        setup.initial = chdis::make_zero(a, b, n);
    } else if (preset == "peakon") {
        setup.initial = chdis::make_peakon(ini.value("c", 1.0), a, b, n);
    } else if (preset == "peakon_antipeakon") {
        chdis::PeakonAntipeakonParams pp;
        if (ini.contains("p0") || ini.contains("q0"))
            pp = chdis::params_from_p0q0(ini.at("p0").get<double>(), ini.at("q0").get<double>());
        else
            pp = chdis::params_from_Dtstar(ini.value("D", 1.0), ini.value("t_star", 1.0));
        setup.initial = chdis::make_peakon_antipeakon(pp, a, b, n);
    } else if (preset == "file") {
        fs::path path = ini.at("path").get<std::string>();
        if (path.is_relative()) path = config_dir / path;
        setup.initial = chdis::eulerian_from_json(load_json_file(path));
    } else {
        throw std::runtime_error("config: unknown initial preset '" + preset + "'");
    }

    if (cfg.contains("atoms")) {
        for (const auto& at : cfg.at("atoms")) {
            if (!at.is_array() || at.size() != 2)
                throw std::runtime_error("config: atoms entries must be [pos, mass]");
            setup.initial.atoms.push_back({at[0].get<double>(), at[1].get<double>()});
        }
    }

    if (cfg.contains("output")) {
        const json& out = cfg.at("output");
        if (out.contains("times"))
            setup.solver.output_times = out.at("times").get<std::vector<double>>();
        if (out.contains("directory"))
            setup.out_dir = out.at("directory").get<std::string>();
        if (out.contains("formats")) {
            setup.csv = setup.json_out = false;
            for (const auto& f : out.at("formats")) {
                const std::string fmt = f.get<std::string>();
                if (fmt == "csv") setup.csv = true;
                else if (fmt == "json") setup.json_out = true;
                else throw std::runtime_error("config: unknown output format '" + fmt + "'");
            }
        }
    }
    if (setup.solver.output_times.empty()) {
        setup.solver.output_times = {0.0, setup.solver.t_end};
    }
    return setup;
}

void print_report(const chdis::DiagnosticsReport& report) {
    std::printf("%-32s %12s %12s  %s\n", "check", "residual", "tolerance", "status");
    for (const auto& r : report.checks()) {
        std::printf("%-32s %12.4e %12.4e  %s\n", r.name.c_str(), r.residual,
                    r.tolerance, r.pass ? "PASS" : "FAIL");
    }
}

std::string plot_script_for_run() {
    return R"(# gnuplot script: wave profile snapshots from snapshots.csv
set datafile separator ','
set key autotitle columnheader
set xlabel 'x'
set ylabel 'u'
plot 'snapshots.csv' using 2:($3) every ::1 with dots title 'u(t,x)'
)";
}

std::string plot_script_for_oracle(const std::string& csv_name) {
    std::ostringstream os;
    os << "# gnuplot script: exact peakon-antipeakon fields from " << csv_name << "\n"
       << "set datafile separator ','\n"
       << "set xlabel 'x'\n"
       << "splot '" << csv_name << "' using 2:1:3 with points title 'u', \\\n"
       << "      '" << csv_name << "' using 2:1:4 with points title 'F', \\\n"
       << "      '" << csv_name << "' using 2:1:5 with points title 'p'\n";
    return os.str();
}

int cmd_run(const fs::path& config_path, std::optional<std::string> out_override,
            std::optional<std::string> format_override,
            std::optional<std::string> resume_path) {
    json cfg;
    try {
        cfg = load_json_file(config_path);
    } catch (const json::exception& e) {
        std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
        return 1;
    }
    RunSetup setup = parse_run_config(cfg, config_path.parent_path());
    if (out_override) setup.out_dir = *out_override;
    if (format_override) {
        setup.csv = (*format_override == "csv" || *format_override == "both");
        setup.json_out = (*format_override == "json" || *format_override == "both");
    }
    if (setup.out_dir.empty()) setup.out_dir = "chdis_out";
    fs::create_directories(setup.out_dir);

    const std::string hash = chdis::config_hash(setup.config);
    log_info("run: config hash " + hash);

    chdis::Trajectory traj;
    if (resume_path) {
        const json snap = load_json_file(*resume_path);
        const double t0 = snap.at("t").get<double>();
        chdis::LagrangianState X = chdis::lagrangian_from_json(snap.at("lagrangian"));
        traj = chdis::solve_from(X, t0, setup.initial.x, setup.solver);
    } else {
        traj = chdis::solve(setup.initial, setup.solver);
    }

    json cfg_out = setup.config;
    cfg_out["config_hash"] = hash;
    cfg_out["version"] = chdis::version_string();
    write_text_file(setup.out_dir / "config.json", cfg_out.dump(2) + "\n");

    if (setup.csv) {
        std::ofstream csv(setup.out_dir / "snapshots.csv");
        csv << "# " << meta_line(hash) << "\n";
        csv << "t,x,u,F,p,p_x\n";
        for (const auto& snap : traj.snapshots)
            chdis::write_snapshot_rows(csv, snap.t, snap.eulerian);
        write_text_file(setup.out_dir / "plot.gp", plot_script_for_run());
    }
    if (setup.json_out) {
        int idx = 0;
        for (const auto& snap : traj.snapshots) {
            json j;
            j["version"] = chdis::version_string();
            j["config_hash"] = hash;
            j["t"] = snap.t;
            j["eulerian"] = chdis::to_json(snap.eulerian);
            j["lagrangian"] = chdis::to_json(snap.lagrangian);
            j["diagnostics"] = chdis::to_json(snap.diagnostics);
            char name[32];
            std::snprintf(name, sizeof(name), "snapshot_%03d.json", idx++);
            write_text_file(setup.out_dir / name, j.dump(2) + "\n");
        }
    }

    chdis::DiagnosticsReport report = chdis::run_all_checks(traj);
    for (const auto& snap : traj.snapshots) report.merge(snap.diagnostics);
    json report_json;
    report_json["version"] = chdis::version_string();
    report_json["config_hash"] = hash;
    report_json["checks"] = chdis::to_json(report);
    write_text_file(setup.out_dir / "report.json", report_json.dump(2) + "\n");
    print_report(report);
    return report.all_pass() ? 0 : 2;
}

int cmd_oracle(double D, double t_star, const std::vector<double>& times,
               double x_min, double x_max, std::size_t nx, const fs::path& out_path) {
    const chdis::PeakonAntipeakonParams pp = chdis::params_from_Dtstar(D, t_star);
    json cfg;
    cfg["oracle"] = {{"D", D}, {"t_star", t_star}, {"times", times},
                     {"x", {x_min, x_max, nx}}};
    const std::string hash = chdis::config_hash(cfg);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path.string());
    out << "# " << meta_line(hash) << "\n";
    out << "t,x,u,F,p,p_x\n";
    out << std::setprecision(17);
    for (double t : times) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = x_min + (x_max - x_min) * static_cast<double>(i) /
                                         static_cast<double>(nx - 1);
            const auto [p, px] = chdis::exact_p_px(pp, t, x);
            out << t << ',' << x << ',' << chdis::exact_u(pp, t, x) << ','
                << chdis::exact_F(pp, t, x) << ',' << p << ',' << px << '\n';
        }
    }
    const fs::path plot_path = out_path.parent_path() / "oracle_plot.gp";
    write_text_file(plot_path, plot_script_for_oracle(out_path.filename().string()));
    log_info("oracle: wrote " + out_path.string());
    return 0;
}

int cmd_verify(const fs::path& run_dir) {
    if (!fs::is_directory(run_dir)) {
        std::cerr << "error: " << run_dir << " is not a directory\n";
        return 1;
    }
    std::vector<fs::path> snaps;
    for (const auto& e : fs::directory_iterator(run_dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("snapshot_", 0) == 0 && e.path().extension() == ".json")
            snaps.push_back(e.path());
    }
    std::sort(snaps.begin(), snaps.end());
    if (snaps.empty()) {
        std::cerr << "error: no snapshot_*.json in " << run_dir << "\n";
        return 1;
    }

    chdis::Trajectory traj;
    const json cfg = load_json_file(run_dir / "config.json");
    traj.dt = cfg.contains("solver") ? cfg.at("solver").value("dt", 1e-3) : 1e-3;
    for (const auto& path : snaps) {
        const json j = load_json_file(path);
        chdis::Snapshot snap;
        snap.t = j.at("t").get<double>();
        snap.eulerian = chdis::eulerian_from_json(j.at("eulerian"));
        snap.lagrangian = chdis::lagrangian_from_json(j.at("lagrangian"));
        traj.snapshots.push_back(std::move(snap));
    }
    traj.final_state = traj.snapshots.back().lagrangian;
    traj.t_final = traj.snapshots.back().t;
    traj.x_grid = traj.snapshots.front().eulerian.x;

    // re-run the per-snapshot structural checks as well
    chdis::DiagnosticsReport report = chdis::run_all_checks(traj);
    for (const auto& snap : traj.snapshots)
        report.merge(chdis::validate(snap.lagrangian, {.tol = 1e-6}));
    json report_json;
    report_json["checks"] = chdis::to_json(report);
    write_text_file(run_dir / "report_verify.json", report_json.dump(2) + "\n");
    print_report(report);
    return report.all_pass() ? 0 : 2;
}

int cmd_transform(const std::string& direction, const fs::path& in_path,
                  const fs::path& out_path) {
    json j;
    try {
        j = load_json_file(in_path);
    } catch (const json::exception& e) {
        std::cerr << "error: input is not valid JSON: " << e.what() << "\n";
        return 1;
    }
    json out;
    if (direction == "to-lagrangian") {
        out = chdis::to_json(chdis::eul_to_lag(chdis::eulerian_from_json(j)));
    } else {
        out = chdis::to_json(chdis::lag_to_eul(chdis::lagrangian_from_json(j)));
    }
    write_text_file(out_path, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative Camassa-Holm solver in Lagrangian coordinates"};
    app.set_version_flag("--version", std::string("chdis ") + chdis::version_string());
    app.require_subcommand(1);

    std::string config_path, out_dir, format, resume, run_dir, in_path, out_path;

    CLI::App* run = app.add_subcommand("run", "integrate a configured initial state");
    run->add_option("--config", config_path, "run configuration (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--format", format, "csv|json|both (overrides config)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    run->add_option("--resume", resume, "snapshot JSON to continue from");

    double D = 1.0, t_star = 1.0, x_min = -5.0, x_max = 5.0;
    std::size_t nx = 201;
    std::vector<double> times{0.0, 0.5, 0.99, 1.5};
    CLI::App* oracle = app.add_subcommand("oracle", "emit the exact peakon-antipeakon fields");
    oracle->add_option("--D", D, "peakon strength D > 0");
    oracle->add_option("--t-star", t_star, "breaking time t* > 0");
    oracle->add_option("--times", times, "output times")->delimiter(',');
    oracle->add_option("--x-min", x_min, "left edge of the x grid");
    oracle->add_option("--x-max", x_max, "right edge of the x grid");
    oracle->add_option("--nx", nx, "number of x samples");
    oracle->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* verify = app.add_subcommand("verify", "re-check a finished run directory");
    verify->add_option("dir", run_dir, "run output directory")->required();

    CLI::App* transform = app.add_subcommand("transform", "map states between coordinates");
    transform->require_subcommand(1);
    CLI::App* to_lag = transform->add_subcommand("to-lagrangian", "Eulerian JSON -> Lagrangian JSON");
    CLI::App* to_eul = transform->add_subcommand("to-eulerian", "Lagrangian JSON -> Eulerian JSON");
    for (CLI::App* t : {to_lag, to_eul}) {
        t->add_option("--in", in_path, "input JSON file")->required();
        t->add_option("--out", out_path, "output JSON file")->required();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path,
                           out_dir.empty() ? std::nullopt : std::optional(out_dir),
                           format.empty() ? std::nullopt : std::optional(format),
                           resume.empty() ? std::nullopt : std::optional(resume));
        }
        if (oracle->parsed()) {
            if (times.size() < 1 || nx < 2) {
                std::cerr << "error: oracle needs at least one time and two x samples\n";
                return 1;
            }
            return cmd_oracle(D, t_star, times, x_min, x_max, nx, out_path);
        }
        if (verify->parsed()) return cmd_verify(run_dir);
        if (to_lag->parsed()) return cmd_transform("to-lagrangian", in_path, out_path);
        if (to_eul->parsed()) return cmd_transform("to-eulerian", in_path, out_path);
    } catch (const chdis::BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
