#pragma once

#include "ringswarm/spectral.hpp"
#include "ringswarm/types.hpp"

#include "ringswarm/frames.hpp"

#include <json.hpp>
#include <iosfwd>

namespace ringswarm {

using nlohmann::json;

/// Parse a scenario document. Field names: system, n, positions, velocities,
/// angles, center, spin, t_end, dt_init, abs_tol, rel_tol, monitors, seed.
/// Throws std::invalid_argument naming the offending field.
Scenario parse_scenario(const json& doc);
Scenario load_scenario(const std::string& path);
json scenario_to_json(const Scenario& sc);

/// FNV-1a hash of the canonical (sorted-key) serialization; stable across
/// re-serialization of the same scenario.
std::uint64_t scenario_hash(const Scenario& sc);

/// CSV with header "t,<state components>,<monitor channels>", 17 significant
/// digits. State component names are supplied by the caller.
void write_csv(std::ostream& os, const Trajectory& traj,
               const std::vector<std::string>& state_names);
void write_csv_file(const std::string& path, const Trajectory& traj,
                    const std::vector<std::string>& state_names);

/// JSONL: one record per sample {"t":..., "state":[...], "monitors":{...}}.
void write_jsonl(std::ostream& os, const Trajectory& traj);
void write_jsonl_file(const std::string& path, const Trajectory& traj);

/// Column names for each system's flat state layout.
std::vector<std::string> state_names_swarm(int n);
std::vector<std::string> state_names_abuw(int n);
std::vector<std::string> state_names_lowdim(SystemKind kind);

json spectral_report_to_json(const SpectralReport& r);

/// Debug dump of the degenerate basis matrices, row-major.
json basis_to_json(const BasisPack& b);

struct RunManifest {
    std::uint64_t scenario_hash = 0;
    std::string tool_version;
    std::uint64_t seed = 0;
    double wall_seconds = 0;
    std::vector<std::string> outputs;
};
json manifest_to_json(const RunManifest& m);

}  // namespace ringswarm
