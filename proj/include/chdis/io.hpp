#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "chdis/diagnostics.hpp"
#include "chdis/evolution.hpp"

namespace chdis {

// JSON layouts:
//   Eulerian:   {"x": [...], "u": [...], "atoms": [[pos, mass], ...]}
//   Lagrangian: {"xi", "y", "U", "V", "H", "y_xi", "U_xi", "V_xi", "H_xi",
//                "tau"} -- tau entries of +inf serialize as null.

nlohmann::json to_json(const EulerianState& state);
EulerianState eulerian_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LagrangianState& state);
LagrangianState lagrangian_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CheckResult& r);
nlohmann::json to_json(const DiagnosticsReport& report);
DiagnosticsReport report_from_json(const nlohmann::json& j);

/// (x, u, F, p, p_x) rows with a one-line header; metadata goes in a
/// leading comment line when `meta` is nonempty.
void write_eulerian_csv(std::ostream& os, const EulerianState& state,
                        const std::string& meta = {});

/// (t, x, u, F, p, p_x) rows for one snapshot, appended without a header.
void write_snapshot_rows(std::ostream& os, double t, const EulerianState& state);

/// FNV-1a hash of the canonical (sorted-key, compact) serialization; used to
/// stamp every output file so runs are traceable to their configuration.
std::string config_hash(const nlohmann::json& config);

std::string version_string();

}  // namespace chdis
