#include "qbat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qbat/metrics.hpp"

namespace qbat {
namespace {

template <class Task>
void parallel_for(std::size_t count, unsigned workers, Task&& task) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (std::size_t i = next++; i < count; i = next++) task(i);
    };
    if (workers <= 1) {
        drain();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
}

ModelParams cell_params(const SweepSpec& spec, double gamma, double lambda) {
    return make_params(spec.omega0, 1.0, gamma, lambda);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto hit = s.find(sep, pos);
        parts.push_back(s.substr(pos, hit == std::string_view::npos ? std::string_view::npos : hit - pos));
        if (hit == std::string_view::npos) break;
        pos = hit + 1;
    }
    return parts;
}

}  // namespace

std::string_view to_string(Quantity q) noexcept {
    switch (q) {
        case Quantity::stored_energy_max: return "stored_energy_max";
        case Quantity::ergotropy_max: return "ergotropy_max";
        case Quantity::nonmarkovianity: return "nonmarkovianity";
        case Quantity::trajectory: return "trajectory";
    }
    return "unknown";
}

std::optional<Quantity> parse_quantity(std::string_view text) noexcept {
    for (auto q : {Quantity::stored_energy_max, Quantity::ergotropy_max, Quantity::nonmarkovianity,
                   Quantity::trajectory})
        if (to_string(q) == text) return q;
    return std::nullopt;
}

std::string_view to_string(CellFlag f) noexcept {
    switch (f) {
        case CellFlag::none: return "none";
        case CellFlag::divergent: return "divergent";
        case CellFlag::truncated: return "truncated";
        case CellFlag::boundary: return "boundary";
    }
    return "unknown";
}

std::optional<CellFlag> parse_cell_flag(std::string_view text) noexcept {
    for (auto f : {CellFlag::none, CellFlag::divergent, CellFlag::truncated, CellFlag::boundary})
        if (to_string(f) == text) return f;
    return std::nullopt;
}

double effective_tmax(const SweepSpec& spec) noexcept {
    if (spec.tmax) return *spec.tmax;
    switch (spec.quantity) {
        case Quantity::nonmarkovianity: return 200.0;
        case Quantity::trajectory: return 25.0;
        default: return 50.0;
    }
}

std::size_t effective_grid(const SweepSpec& spec) noexcept {
    if (spec.grid) return *spec.grid;
    if (spec.quantity == Quantity::trajectory) return 1001;
    // 1e-3 / Omega spacing for the BLP scan
    return static_cast<std::size_t>(std::llround(effective_tmax(spec) * 1000.0)) + 1;
}

void validate(const SweepSpec& spec) {
    if (spec.gamma_over_omega.empty() || spec.lambda_over_omega.empty())
        throw std::invalid_argument("sweep axes must be non-empty");
    for (double g : spec.gamma_over_omega)
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma/Omega must be finite and >= 0");
    for (double l : spec.lambda_over_omega)
        if (!(l > 0.0)) throw std::invalid_argument("lambda/Omega must be positive or inf");
    if (!(effective_tmax(spec) > 0.0) || !std::isfinite(effective_tmax(spec)))
        throw std::invalid_argument("tmax must be positive");
    if (effective_grid(spec) < 2) throw std::invalid_argument("grid needs at least two points");
    if (!(spec.omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
    validate(spec);
    if (spec.quantity == Quantity::trajectory)
        throw std::invalid_argument("trajectory sweeps produce curves; use run_trajectory_sweep");

    SweepResult result{spec, {}, {}};
    const std::size_t cols = spec.lambda_over_omega.size();
    const std::size_t cells = spec.gamma_over_omega.size() * cols;
    result.values.assign(cells, 0.0);
    result.flags.assign(cells, CellFlag::none);
    const double tmax = effective_tmax(spec);
    const std::size_t grid = effective_grid(spec);

    parallel_for(cells, workers, [&](std::size_t i) {
        const auto params = cell_params(spec, spec.gamma_over_omega[i / cols], spec.lambda_over_omega[i % cols]);
        if (spec.quantity == Quantity::nonmarkovianity) {
            const auto report = blp_nonmarkovianity(params, BlpOptions{tmax, grid});
            result.values[i] = report.measure;
            if (report.divergent)
                result.flags[i] = CellFlag::divergent;
            else if (report.truncated)
                result.flags[i] = CellFlag::truncated;
            return;
        }
        const auto report = maximize_over_tau(params, empty_battery_state(), tmax);
        result.values[i] = spec.quantity == Quantity::stored_energy_max ? report.delta_e_max : report.w_max;
        if (report.at_boundary) result.flags[i] = CellFlag::boundary;
    });
    return result;
}

std::vector<LabeledTrajectory> run_trajectory_sweep(const SweepSpec& spec, unsigned workers) {
    validate(spec);
    const std::size_t cols = spec.lambda_over_omega.size();
    const std::size_t cells = spec.gamma_over_omega.size() * cols;
    std::vector<LabeledTrajectory> out(cells);
    const double tmax = effective_tmax(spec);
    const std::size_t steps = effective_grid(spec);
    parallel_for(cells, workers, [&](std::size_t i) {
        const double g = spec.gamma_over_omega[i / cols];
        const double l = spec.lambda_over_omega[i % cols];
        out[i] = {g, l, trajectory(cell_params(spec, g, l), empty_battery_state(), tmax, steps)};
    });
    return out;
}

double parse_ratio(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "Inf" || text == "infinity") return kInfiniteWidth;
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

std::vector<double> parse_axis(std::string_view text) {
    text = trim(text);
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() < 3 || parts.size() > 4)
            throw std::invalid_argument("axis range must be start:stop:count[:lin|log]");
        const double start = parse_ratio(parts[0]);
        const double stop = parse_ratio(parts[1]);
        const double count_real = parse_ratio(parts[2]);
        const auto count = static_cast<std::size_t>(count_real);
        if (!std::isfinite(start) || !std::isfinite(stop) || count < 1 ||
            static_cast<double>(count) != count_real)
            throw std::invalid_argument("axis range needs finite bounds and a positive integer count");
        const std::string_view scale = parts.size() == 4 ? trim(parts[3]) : "lin";
        if (scale != "lin" && scale != "log") throw std::invalid_argument("axis scale must be lin or log");
        if (scale == "log" && !(start > 0.0 && stop > 0.0))
            throw std::invalid_argument("log axis needs positive bounds");
        if (count == 1) return {start};
        std::vector<double> axis(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(count - 1);
            axis[i] = scale == "log" ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                                     : start + f * (stop - start);
        }
        axis.front() = start;
        axis.back() = stop;
        return axis;
    }
    std::vector<double> axis;
    for (auto part : split(text, ',')) axis.push_back(parse_ratio(part));
    return axis;
}

}  // namespace qbat
