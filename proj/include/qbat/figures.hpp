// figures.hpp — Data bundles for re-plotting each published figure
//
// A bundle is one or more CSV datasets plus a plotter-agnostic manifest naming
// axes, series and annotation lines. No rendering happens here.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qbat {

struct Dataset {
    std::string file;
    std::string contents;
};

struct FigureBundle {
    std::string name;
    std::vector<Dataset> datasets;
    nlohmann::json manifest;
};

/// Reference optima for the memoryless reservoir at gamma = 0.1 Omega, drawn
/// as dotted guide lines on fig7a.
inline constexpr double kMemorylessStoredEnergyRef = 0.925;
inline constexpr double kMemorylessErgotropyRef = 0.851;

std::span<const std::string_view> figure_names() noexcept;
bool is_figure(std::string_view name) noexcept;

/// Throws std::invalid_argument for unknown names.
FigureBundle build_figure(std::string_view name, unsigned workers = 0);

/// Writes every dataset and `<name>.manifest.json` into `dir` (created if needed).
void write_bundle(const FigureBundle& bundle, const std::filesystem::path& dir);

}  // namespace qbat
