// JSON and CSV formats for states, reports and Husimi grids.
#pragma once

#include "oats/decomposition.hpp"
#include "oats/husimi.hpp"
#include "oats/oracle.hpp"
#include "oats/protocols.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace oats::io {

using nlohmann::json;

// {"n_atoms": N, "amplitudes": [[re, im], ...]} in ascending m.
json to_json(const SpinState& state);
SpinState spin_state_from_json(const json& j);

// {"n_control": N', "n_target": N, "amplitudes": [[re, im], ...]} row-major over (m~, m).
json to_json(const Bipartite& state);
Bipartite bipartite_from_json(const json& j);

json to_json(const ProtocolReport& report, bool include_state = false);
json to_json(const Decomposition& decomposition);
json to_json(const oracle::CheckSummary& summary);

// Header row: empty cell then phi values; each following row: theta then Q values.
void write_husimi_csv(std::ostream& out, const Husimi& grid);

// Metadata for plotting: grid shape, scale, atom count, perimeter circles.
json husimi_sidecar(const Husimi& grid, const std::vector<PerimeterCircle<double>>& circles, const json& state_metadata);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace oats::io
