#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "quantdyn/analysis.hpp"
#include "quantdyn/dynamics.hpp"

namespace quantdyn {

/// Shortest round-trip decimal representation of a double, so re-running a
/// manifest reproduces CSV files byte for byte.
std::string format_double(double value);

/// Strict double parse; throws ParseError on trailing garbage.
double parse_double(const std::string& text);

/// Comma-separated vector literal like "2,1,0.1".
RealVector parse_vector(const std::string& text);

// ----------------------------------------------------------------------------
// CSV
// ----------------------------------------------------------------------------

/// Header t,eta,y_1..y_n,w_1..w_n,delta; one row per record.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Parse a trajectory CSV. The mode is external context (it is not stored in
/// the CSV); every row's quantized state is re-checked against
/// normalized_project(y, mode).
Trajectory read_trajectory_csv(std::istream& in, QuantizationMode mode);

/// Sign matrix rows, no header, entries in {-1, 0, 1}.
void write_sign_matrix_csv(std::ostream& out,
                           const std::vector<std::vector<std::int8_t>>& matrix);

// ----------------------------------------------------------------------------
// JSON configs, manifests, and reports
// ----------------------------------------------------------------------------

nlohmann::json config_to_json(const ExperimentConfig& config);

/// Parse a config document. Accepts either a bare config object or a
/// manifest wrapper holding one under "config". Teacher/v/y0 entries given
/// as {"seed": ...} specs are resolved into concrete values here, so the
/// returned config is fully deterministic. Errors carry field paths.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Manifest written next to every run: tool info plus the fully resolved
/// config. Re-running with the manifest reproduces identical artifacts.
nlohmann::json manifest_for(const ExperimentConfig& resolved_config);

nlohmann::json to_json(const QuantizedWeight& w);
nlohmann::json to_json(const RecurrenceReport& report);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const RegionEntryTimes& times);
nlohmann::json to_json(const std::vector<CoordinateOscillation>& report);
nlohmann::json to_json(const std::vector<VertexVisitStats>& stats);

}  // namespace quantdyn
