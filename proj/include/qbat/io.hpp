// io.hpp — CSV and JSON writers for trajectories and sweep grids
//
// CSV dialect: comma separated, '.' decimal point, 17 significant digits,
// '#'-prefixed metadata lines ahead of a single header row. No timestamps are
// written, so fixed inputs give byte-identical files.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qbat/propagator.hpp"
#include "qbat/sweep.hpp"

namespace qbat {

inline constexpr const char* kToolName = "qbat";
inline constexpr const char* kToolVersion = "1.0.0";

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Round-trip formatting: 17 significant digits, "inf" for infinite width.
std::string format_real(double value);

/// Tool name, version and units, followed by `extra`.
Metadata base_metadata(std::string_view quantity, const Metadata& extra = {});

void write_trajectory_csv(std::ostream& out, const ChargingTrajectory& traj, const Metadata& meta);
nlohmann::json trajectory_to_json(const ChargingTrajectory& traj, const Metadata& meta);

/// Grid layout: first header cell is the axis pair, remaining header cells are
/// lambda/Omega values; each row starts with its gamma/Omega value. Flagged
/// cells are listed in metadata lines.
void write_sweep_csv(std::ostream& out, const SweepResult& result, const Metadata& meta);
nlohmann::json sweep_to_json(const SweepResult& result, const Metadata& meta);

/// Inverse of sweep_to_json. Throws std::invalid_argument on malformed input.
SweepResult sweep_from_json(const nlohmann::json& doc);

/// Long format, one row per (gamma, lambda, Omega tau).
void write_trajectories_csv(std::ostream& out, const std::vector<LabeledTrajectory>& curves,
                            const Metadata& meta);
nlohmann::json trajectories_to_json(const std::vector<LabeledTrajectory>& curves, const Metadata& meta);

}  // namespace qbat
