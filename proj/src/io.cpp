#include "chdis/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>

namespace chdis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json array_json(const std::vector<double>& v) {
    return nlohmann::json(v);
}

std::vector<double> array_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw std::invalid_argument(std::string("missing or non-array field '") + key + "'");
    return j.at(key).get<std::vector<double>>();
}

}  // namespace

nlohmann::json to_json(const EulerianState& s) {
    nlohmann::json j;
    j["x"] = array_json(s.x);
    j["u"] = array_json(s.u);
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : s.atoms) atoms.push_back({a.pos, a.mass});
    j["atoms"] = std::move(atoms);
    return j;
}

EulerianState eulerian_from_json(const nlohmann::json& j) {
    EulerianState s;
    s.x = array_from(j, "x");
    s.u = array_from(j, "u");
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            if (!a.is_array() || a.size() != 2)
                throw std::invalid_argument("atom entries must be [pos, mass] pairs");
            s.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
    }
    return s;
}

nlohmann::json to_json(const LagrangianState& s) {
    nlohmann::json j;
    j["xi"] = array_json(s.xi);
    j["y"] = array_json(s.y);
    j["U"] = array_json(s.U);
    j["V"] = array_json(s.V);
    j["H"] = array_json(s.H);
    j["y_xi"] = array_json(s.y_xi);
    j["U_xi"] = array_json(s.U_xi);
    j["V_xi"] = array_json(s.V_xi);
    j["H_xi"] = array_json(s.H_xi);
    nlohmann::json tau = nlohmann::json::array();
    for (double t : s.tau) {
        if (std::isfinite(t)) tau.push_back(t);
        else tau.push_back(nullptr);  // +inf: never broken
    }
    j["tau"] = std::move(tau);
    return j;
}

LagrangianState lagrangian_from_json(const nlohmann::json& j) {
    LagrangianState s;
    s.xi = array_from(j, "xi");
    s.y = array_from(j, "y");
    s.U = array_from(j, "U");
    s.V = array_from(j, "V");
    s.H = array_from(j, "H");
    s.y_xi = array_from(j, "y_xi");
    s.U_xi = array_from(j, "U_xi");
    s.V_xi = array_from(j, "V_xi");
    s.H_xi = array_from(j, "H_xi");
    if (!j.contains("tau") || !j.at("tau").is_array())
        throw std::invalid_argument("missing or non-array field 'tau'");
    for (const auto& t : j.at("tau"))
        s.tau.push_back(t.is_null() ? kInf : t.get<double>());
    s.broken.resize(s.tau.size(), 0);
    // broken flags are derived: tau has been reached at (or before) time 0
    // unless the caller re-derives them against a later time
    if (j.contains("t")) {
        const double t = j.at("t").get<double>();
        for (std::size_t c = 0; c < s.tau.size(); ++c)
            s.broken[c] = s.tau[c] <= t ? 1 : 0;
    } else {
        for (std::size_t c = 0; c < s.tau.size(); ++c)
            s.broken[c] = std::isfinite(s.tau[c]) ? 1 : 0;
    }
    return s;
}

nlohmann::json to_json(const CheckResult& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["residual"] = r.residual;
    j["tolerance"] = std::isfinite(r.tolerance) ? nlohmann::json(r.tolerance)
                                                : nlohmann::json(nullptr);
    j["pass"] = r.pass;
    if (std::isfinite(r.loc_t)) j["t"] = r.loc_t;
    if (std::isfinite(r.loc_x)) j["x"] = r.loc_x;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

nlohmann::json to_json(const DiagnosticsReport& report) {
    nlohmann::json j = nlohmann::json::array();
    for (const CheckResult& r : report.checks()) j.push_back(to_json(r));
    return j;
}

DiagnosticsReport report_from_json(const nlohmann::json& j) {
    DiagnosticsReport report;
    for (const auto& e : j) {
        CheckResult r;
        r.name = e.at("name").get<std::string>();
        r.residual = e.at("residual").get<double>();
        r.tolerance = e.at("tolerance").is_null() ? kInf : e.at("tolerance").get<double>();
        r.pass = e.at("pass").get<bool>();
        if (e.contains("t")) r.loc_t = e.at("t").get<double>();
        if (e.contains("x")) r.loc_x = e.at("x").get<double>();
        if (e.contains("note")) r.note = e.at("note").get<std::string>();
        report.add(std::move(r));
    }
    return report;
}

void write_eulerian_csv(std::ostream& os, const EulerianState& s,
                        const std::string& meta) {
    if (!meta.empty()) os << "# " << meta << "\n";
    os << "x,u,F,p,p_x\n";
    os << std::setprecision(17);
    const std::vector<double> F = compute_F_at_nodes(s);
    std::vector<double> p(s.size()), px(s.size());
    compute_p_px_at_nodes(s, p, px);
    for (std::size_t i = 0; i < s.size(); ++i)
        os << s.x[i] << ',' << s.u[i] << ',' << F[i] << ',' << p[i] << ',' << px[i] << '\n';
}

void write_snapshot_rows(std::ostream& os, double t, const EulerianState& s) {
    os << std::setprecision(17);
    const std::vector<double> F = compute_F_at_nodes(s);
    std::vector<double> p(s.size()), px(s.size());
    compute_p_px_at_nodes(s, p, px);
    for (std::size_t i = 0; i < s.size(); ++i)
        os << t << ',' << s.x[i] << ',' << s.u[i] << ',' << F[i] << ',' << p[i]
           << ',' << px[i] << '\n';
}

std::string config_hash(const nlohmann::json& config) {
    const std::string dump = config.dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string version_string() {
#ifdef CHDIS_VERSION
    return CHDIS_VERSION;
#else
    return "0.0.0";
#endif
}

}  // namespace chdis
