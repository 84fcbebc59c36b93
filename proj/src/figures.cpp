#include "qbat/figures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qbat/io.hpp"
#include "qbat/sweep.hpp"

namespace qbat {
namespace {

constexpr std::array<std::string_view, 11> kNames = {"fig2",  "fig3a", "fig3b", "fig4a", "fig4b", "fig5a",
                                                     "fig5b", "fig6a", "fig6b", "fig7a", "fig7b"};

constexpr const char* kGridAxis = "0.1:10:21:log";

nlohmann::json ratio_list(const std::vector<double>& v) {
    auto out = nlohmann::json::array();
    for (double x : v) out.push_back(std::isinf(x) ? nlohmann::json("inf") : nlohmann::json(x));
    return out;
}

nlohmann::json base_manifest(std::string_view name, std::string_view title) {
    return {{"figure", std::string(name)},
            {"title", std::string(title)},
            {"tool", kToolName},
            {"version", kToolVersion},
            {"units", {{"energy", "omega0"}, {"time", "Omega*tau"}}},
            {"annotations", nlohmann::json::array()}};
}

FigureBundle grid_figure(std::string_view name, Quantity q, std::string_view title, std::string_view label,
                         unsigned workers) {
    SweepSpec spec;
    spec.gamma_over_omega = parse_axis(kGridAxis);
    spec.lambda_over_omega = parse_axis(kGridAxis);
    spec.quantity = q;
    const auto result = run_sweep(spec, workers);

    const std::string file = std::string(name) + ".csv";
    std::ostringstream csv;
    write_sweep_csv(csv, result,
                    base_metadata(to_string(q), {{"figure", std::string(name)}, {"axes", "log [0.1, 10] x 21"}}));

    auto manifest = base_manifest(name, title);
    manifest["datasets"] = nlohmann::json::array(
        {{{"file", file},
          {"layout", "grid"},
          {"x", {{"column", "lambda_over_Omega"}, {"label", "lambda/Omega"}, {"scale", "log"}}},
          {"y", {{"column", "gamma_over_Omega"}, {"label", "gamma/Omega"}, {"scale", "log"}}},
          {"z", {{"label", std::string(label)}, {"quantity", std::string(to_string(q))}}},
          {"tmax", effective_tmax(spec)}}});
    return {std::string(name), {{file, csv.str()}}, manifest};
}

FigureBundle curve_figure(std::string_view name, std::vector<double> gammas, std::vector<double> lambdas,
                          std::string_view column, std::string_view title, std::string_view label,
                          std::string_view legend_key, unsigned workers) {
    SweepSpec spec;
    spec.gamma_over_omega = std::move(gammas);
    spec.lambda_over_omega = std::move(lambdas);
    spec.quantity = Quantity::trajectory;
    spec.tmax = 25.0;
    spec.grid = 1001;
    const auto curves = run_trajectory_sweep(spec, workers);

    const std::string file = std::string(name) + ".csv";
    std::ostringstream csv;
    write_trajectories_csv(csv, curves, base_metadata("trajectory", {{"figure", std::string(name)}}));

    auto legend = nlohmann::json::array();
    for (const auto& c : curves) {
        legend.push_back({{"gamma_over_Omega", c.gamma_over_omega},
                          {"lambda_over_Omega", std::isinf(c.lambda_over_omega) ? nlohmann::json("inf")
                                                                                : nlohmann::json(c.lambda_over_omega)}});
    }
    auto manifest = base_manifest(name, title);
    manifest["datasets"] = nlohmann::json::array(
        {{{"file", file},
          {"layout", "long"},
          {"x", {{"column", "Omega_tau"}, {"label", "Omega tau"}, {"scale", "linear"}}},
          {"y", {{"column", std::string(column)}, {"label", std::string(label)}, {"scale", "linear"}}},
          {"series_by", std::string(legend_key)},
          {"series", legend}}});
    return {std::string(name), {{file, csv.str()}}, manifest};
}

// delta_e_max and w_max along one axis for the with-memory and memoryless reservoirs
FigureBundle comparison_figure(std::string_view name, bool vary_lambda, unsigned workers) {
    SweepSpec energy;
    if (vary_lambda) {
        energy.gamma_over_omega = {0.1};
        energy.lambda_over_omega = parse_axis("0.1:1000:41:log");
        energy.lambda_over_omega.push_back(kInfiniteWidth);
    } else {
        energy.gamma_over_omega = parse_axis("0.1:3.9:39:lin");
        energy.lambda_over_omega = {0.1, kInfiniteWidth};
    }
    energy.quantity = Quantity::stored_energy_max;
    SweepSpec work = energy;
    work.quantity = Quantity::ergotropy_max;
    const auto e = run_sweep(energy, workers);
    const auto w = run_sweep(work, workers);

    const std::string file = std::string(name) + ".csv";
    std::ostringstream csv;
    auto meta = base_metadata("stored_energy_max,ergotropy_max", {{"figure", std::string(name)}});
    for (const auto& [k, v] : meta) csv << "# " << k << '=' << v << '\n';

    auto manifest = base_manifest(name, vary_lambda ? "Optimal charging versus spectral width, gamma = 0.1 Omega"
                                                    : "Optimal charging versus reservoir coupling");
    if (vary_lambda) {
        // last column is the memoryless reference
        const std::size_t inf_col = e.cols() - 1;
        csv << "lambda_over_Omega,delta_e_max,w_max\n";
        for (std::size_t c = 0; c < inf_col; ++c)
            csv << format_real(e.spec.lambda_over_omega[c]) << ',' << format_real(e.at(0, c)) << ','
                << format_real(w.at(0, c)) << '\n';
        manifest["parameters"] = {{"gamma_over_Omega", 0.1}};
        manifest["datasets"] = nlohmann::json::array(
            {{{"file", file},
              {"layout", "columns"},
              {"x", {{"column", "lambda_over_Omega"}, {"label", "lambda/Omega"}, {"scale", "log"}}},
              {"series",
               {{{"column", "delta_e_max"}, {"label", "Delta E_B^max (with memory)"}, {"style", "solid"}},
                {{"column", "w_max"}, {"label", "W_max (with memory)"}, {"style", "dashed"}}}}}});
        manifest["annotations"] = nlohmann::json::array(
            {{{"type", "hline"}, {"y", kMemorylessStoredEnergyRef}, {"style", "dotted"},
              {"label", "memoryless Delta E_B^max (reference)"}, {"computed", e.at(0, inf_col)}},
             {{"type", "hline"}, {"y", kMemorylessErgotropyRef}, {"style", "dotted"},
              {"label", "memoryless W_max (reference)"}, {"computed", w.at(0, inf_col)}}});
    } else {
        csv << "gamma_over_Omega,delta_e_max_memory,w_max_memory,delta_e_max_memoryless,w_max_memoryless\n";
        for (std::size_t r = 0; r < e.rows(); ++r)
            csv << format_real(e.spec.gamma_over_omega[r]) << ',' << format_real(e.at(r, 0)) << ','
                << format_real(w.at(r, 0)) << ',' << format_real(e.at(r, 1)) << ',' << format_real(w.at(r, 1))
                << '\n';
        manifest["parameters"] = {{"lambda_over_Omega", ratio_list({0.1, kInfiniteWidth})}};
        manifest["datasets"] = nlohmann::json::array(
            {{{"file", file},
              {"layout", "columns"},
              {"x", {{"column", "gamma_over_Omega"}, {"label", "gamma/Omega"}, {"scale", "linear"}}},
              {"series",
               {{{"column", "delta_e_max_memory"}, {"label", "Delta E_B^max, lambda = 0.1 Omega"}},
                {{"column", "w_max_memory"}, {"label", "W_max, lambda = 0.1 Omega"}},
                {{"column", "delta_e_max_memoryless"}, {"label", "Delta E_B^max, lambda -> inf"}},
                {{"column", "w_max_memoryless"}, {"label", "W_max, lambda -> inf"}}}}}});
    }
    return {std::string(name), {{file, csv.str()}}, manifest};
}

}  // namespace

std::span<const std::string_view> figure_names() noexcept { return kNames; }

bool is_figure(std::string_view name) noexcept {
    return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

FigureBundle build_figure(std::string_view name, unsigned workers) {
    const std::vector<double> fig3_gammas{0.1, 0.5, 1.0, 5.0};
    const std::vector<double> fig5_gammas{0.1, 0.5, 1.0, 2.0, 3.5};
    const std::vector<double> fig6_lambdas{0.1, 1.0, kInfiniteWidth};

    if (name == "fig2")
        return grid_figure(name, Quantity::nonmarkovianity, "Non-Markovianity over the coupling plane", "N",
                           workers);
    if (name == "fig3a")
        return curve_figure(name, fig3_gammas, {0.1}, "stored_energy", "Stored energy, lambda = 0.1 Omega",
                            "Delta E_B", "gamma_over_Omega", workers);
    if (name == "fig3b")
        return curve_figure(name, fig3_gammas, {0.1}, "ergotropy", "Ergotropy, lambda = 0.1 Omega", "W",
                            "gamma_over_Omega", workers);
    if (name == "fig4a")
        return grid_figure(name, Quantity::stored_energy_max, "Maximum stored energy", "Delta E_B^max", workers);
    if (name == "fig4b")
        return grid_figure(name, Quantity::ergotropy_max, "Maximum ergotropy", "W_max", workers);
    if (name == "fig5a")
        return curve_figure(name, fig5_gammas, {kInfiniteWidth}, "stored_energy",
                            "Stored energy, memoryless reservoir", "Delta E_B", "gamma_over_Omega", workers);
    if (name == "fig5b")
        return curve_figure(name, fig5_gammas, {kInfiniteWidth}, "ergotropy", "Ergotropy, memoryless reservoir",
                            "W", "gamma_over_Omega", workers);
    if (name == "fig6a")
        return curve_figure(name, {0.1}, fig6_lambdas, "stored_energy", "Stored energy, gamma = 0.1 Omega",
                            "Delta E_B", "lambda_over_Omega", workers);
    if (name == "fig6b")
        return curve_figure(name, {0.1}, fig6_lambdas, "ergotropy", "Ergotropy, gamma = 0.1 Omega", "W",
                            "lambda_over_Omega", workers);
    if (name == "fig7a") return comparison_figure(name, true, workers);
    if (name == "fig7b") return comparison_figure(name, false, workers);
    throw std::invalid_argument("unknown figure '" + std::string(name) + "'");
}

void write_bundle(const FigureBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& d : bundle.datasets) {
        std::ofstream out(dir / d.file, std::ios::binary);
        out << d.contents;
        if (!out) throw std::runtime_error("cannot write " + (dir / d.file).string());
    }
    std::ofstream out(dir / (bundle.name + ".manifest.json"), std::ios::binary);
    out << bundle.manifest.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write manifest for " + bundle.name);
}

}  // namespace qbat
