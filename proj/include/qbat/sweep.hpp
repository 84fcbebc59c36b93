// sweep.hpp — Parameter grids over (gamma / Omega, lambda / Omega)
//
// Every cell is an independent task evaluated with Omega = 1; results land in a
// preallocated grid, so the output does not depend on the worker count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbat/propagator.hpp"

namespace qbat {

enum class Quantity { stored_energy_max, ergotropy_max, nonmarkovianity, trajectory };

std::string_view to_string(Quantity q) noexcept;
std::optional<Quantity> parse_quantity(std::string_view text) noexcept;

enum class CellFlag : std::uint8_t { none, divergent, truncated, boundary };

std::string_view to_string(CellFlag f) noexcept;
std::optional<CellFlag> parse_cell_flag(std::string_view text) noexcept;

struct SweepSpec {
    std::vector<double> gamma_over_omega;
    std::vector<double> lambda_over_omega;  // kInfiniteWidth selects the memoryless engine
    Quantity quantity{Quantity::stored_energy_max};
    std::optional<double> tmax;        // Omega tau; 50 for maxima, 200 for N, 25 for curves
    std::optional<std::size_t> grid;   // BLP scan points or trajectory steps
    double omega0{1.0};
};

double effective_tmax(const SweepSpec& spec) noexcept;
std::size_t effective_grid(const SweepSpec& spec) noexcept;

/// Throws std::invalid_argument on empty axes or out-of-range ratios.
void validate(const SweepSpec& spec);

struct SweepResult {
    SweepSpec spec;
    std::vector<double> values;  // row-major: gamma index major, lambda index minor
    std::vector<CellFlag> flags;

    std::size_t rows() const noexcept { return spec.gamma_over_omega.size(); }
    std::size_t cols() const noexcept { return spec.lambda_over_omega.size(); }
    double at(std::size_t gamma_index, std::size_t lambda_index) const {
        return values.at(gamma_index * cols() + lambda_index);
    }
    CellFlag flag_at(std::size_t gamma_index, std::size_t lambda_index) const {
        return flags.at(gamma_index * cols() + lambda_index);
    }
};

/// Scalar quantities only. `workers == 0` uses the hardware concurrency.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0);

struct LabeledTrajectory {
    double gamma_over_omega;
    double lambda_over_omega;
    ChargingTrajectory trajectory;
};

/// One empty-battery trajectory per cell, in row-major order.
std::vector<LabeledTrajectory> run_trajectory_sweep(const SweepSpec& spec, unsigned workers = 0);

/// "start:stop:count[:lin|log]" or a comma list such as "0.1,1,inf".
/// Throws std::invalid_argument on malformed input.
std::vector<double> parse_axis(std::string_view text);

/// Accepts a decimal number or "inf".
double parse_ratio(std::string_view text);

}  // namespace qbat
