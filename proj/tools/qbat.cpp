// qbat — command-line front end: evolve, maxima, nonmarkov, sweep, figure
//
// Exit codes: 0 ok, 2 usage error, 3 I/O error, 4 numerical guard triggered.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qbat/figures.hpp"
#include "qbat/io.hpp"
#include "qbat/metrics.hpp"
#include "qbat/propagator.hpp"
#include "qbat/sweep.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kGuard = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointOptions {
    double omega0{1.0};
    double Omega{1.0};
    double gamma{0.0};
    std::string lambda{"inf"};
    std::string format{"csv"};
    std::string out{"-"};
};

void add_point_options(CLI::App& cmd, PointOptions& opt) {
    cmd.add_option("--omega0", opt.omega0, "Qubit transition frequency (energy unit)")->capture_default_str();
    cmd.add_option("--Omega", opt.Omega, "Qubit-cavity coupling")->capture_default_str();
    cmd.add_option("--gamma", opt.gamma, "Cavity-environment coupling")->required();
    cmd.add_option("--lambda", opt.lambda, "Lorentzian width, or 'inf' for the memoryless reservoir")->required();
    cmd.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd.add_option("--out", opt.out, "Output path, '-' for stdout")->capture_default_str();
}

qbat::ModelParams point_params(const PointOptions& opt) {
    return qbat::make_params(opt.omega0, opt.Omega, opt.gamma, qbat::parse_ratio(opt.lambda));
}

qbat::Metadata point_metadata(const PointOptions& opt) {
    return {{"omega0", qbat::format_real(opt.omega0)},
            {"Omega", qbat::format_real(opt.Omega)},
            {"gamma", qbat::format_real(opt.gamma)},
            {"lambda", qbat::format_real(qbat::parse_ratio(opt.lambda))}};
}

void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

int run_evolve(const PointOptions& opt, double tmax, std::size_t steps) {
    const auto params = point_params(opt);
    const auto traj = qbat::trajectory(params, qbat::empty_battery_state(), tmax, steps);
    auto meta = qbat::base_metadata("trajectory", point_metadata(opt));
    meta.emplace_back("tmax", qbat::format_real(tmax));
    meta.emplace_back("steps", std::to_string(steps));
    std::ostringstream text;
    if (opt.format == "json")
        text << qbat::trajectory_to_json(traj, meta).dump(2) << '\n';
    else
        qbat::write_trajectory_csv(text, traj, meta);
    emit(opt.out, text.str());
    return 0;
}

int run_maxima(const PointOptions& opt, double tmax) {
    const auto params = point_params(opt);
    const auto r = qbat::maximize_over_tau(params, qbat::empty_battery_state(), tmax);
    auto meta = qbat::base_metadata("maxima", point_metadata(opt));
    meta.emplace_back("tmax", qbat::format_real(tmax));
    std::ostringstream text;
    if (opt.format == "json") {
        nlohmann::json doc = qbat::trajectory_to_json({}, meta);
        doc.erase("columns");
        doc["delta_e_max"] = r.delta_e_max;
        doc["w_max"] = r.w_max;
        doc["tau_at_e_max"] = r.tau_at_e_max;
        doc["tau_at_w_max"] = r.tau_at_w_max;
        doc["at_boundary"] = r.at_boundary;
        text << doc.dump(2) << '\n';
    } else {
        for (const auto& [k, v] : meta) text << "# " << k << '=' << v << '\n';
        text << "delta_e_max,w_max,tau_at_e_max,tau_at_w_max,at_boundary\n"
             << qbat::format_real(r.delta_e_max) << ',' << qbat::format_real(r.w_max) << ','
             << qbat::format_real(r.tau_at_e_max) << ',' << qbat::format_real(r.tau_at_w_max) << ','
             << yes_no(r.at_boundary) << '\n';
    }
    emit(opt.out, text.str());
    if (r.at_boundary) {
        std::cerr << "warning: optimum lies at tmax; increase --tmax\n";
        return kGuard;
    }
    return 0;
}

int run_nonmarkov(const PointOptions& opt, double tmax, std::size_t grid) {
    const auto params = point_params(opt);
    const auto r = qbat::blp_nonmarkovianity(params, {tmax, grid});
    auto meta = qbat::base_metadata("nonmarkovianity", point_metadata(opt));
    meta.emplace_back("tmax", qbat::format_real(tmax));
    meta.emplace_back("grid", std::to_string(grid));
    std::ostringstream text;
    if (opt.format == "json") {
        nlohmann::json doc = qbat::trajectory_to_json({}, meta);
        doc.erase("columns");
        doc["measure"] = r.measure;
        doc["final_distance"] = r.final_distance;
        doc["truncated"] = r.truncated;
        doc["divergent"] = r.divergent;
        auto intervals = nlohmann::json::array();
        for (const auto& iv : r.backflow_intervals) intervals.push_back({iv.start, iv.end});
        doc["backflow_intervals"] = intervals;
        text << doc.dump(2) << '\n';
    } else {
        for (const auto& [k, v] : meta) text << "# " << k << '=' << v << '\n';
        text << "measure,intervals,final_distance,truncated,divergent\n"
             << qbat::format_real(r.measure) << ',' << r.backflow_intervals.size() << ','
             << qbat::format_real(r.final_distance) << ',' << yes_no(r.truncated) << ',' << yes_no(r.divergent)
             << '\n';
    }
    emit(opt.out, text.str());
    if (r.divergent) {
        std::cerr << "warning: gamma = 0 never relaxes; the measure grows without bound with tmax\n";
        return kGuard;
    }
    if (r.truncated) {
        std::cerr << "warning: trace distance still above 1e-6 at tmax; later backflow is not counted\n";
        return kGuard;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-mediated quantum battery charging in a Lorentzian reservoir"};
    app.set_version_flag("--version", std::string(qbat::kToolVersion));
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    PointOptions evolve_opt;
    double evolve_tmax = 25.0;
    std::size_t evolve_steps = 1001;
    auto* evolve = app.add_subcommand("evolve", "Charging trajectory on a uniform Omega*tau grid");
    add_point_options(*evolve, evolve_opt);
    evolve->add_option("--tmax", evolve_tmax, "End of the window in Omega*tau")->capture_default_str()->check(CLI::PositiveNumber);
    evolve->add_option("--steps", evolve_steps, "Grid points")->capture_default_str()->check(CLI::Range(2ul, 100000000ul));

    PointOptions maxima_opt;
    double maxima_tmax = 50.0;
    auto* maxima = app.add_subcommand("maxima", "Optimal stored energy and ergotropy over the charging time");
    add_point_options(*maxima, maxima_opt);
    maxima->add_option("--tmax", maxima_tmax, "Search window in Omega*tau")->capture_default_str()->check(CLI::PositiveNumber);

    PointOptions nm_opt;
    double nm_tmax = 200.0;
    std::size_t nm_grid = 200001;
    auto* nonmarkov = app.add_subcommand("nonmarkov", "BLP non-Markovianity for the |e>,|g> pair");
    add_point_options(*nonmarkov, nm_opt);
    nonmarkov->add_option("--tmax", nm_tmax, "Integration window in Omega*tau")->capture_default_str()->check(CLI::PositiveNumber);
    nonmarkov->add_option("--grid", nm_grid, "Scan points for slope sign changes")->capture_default_str()->check(CLI::Range(2ul, 1000000000ul));

    std::string gamma_axis = "0.1:10:21:log";
    std::string lambda_axis = "0.1:10:21:log";
    std::string quantity = "stored_energy_max";
    std::optional<double> sweep_tmax;
    std::optional<std::size_t> sweep_grid;
    double sweep_omega0 = 1.0;
    unsigned threads = 0;
    std::string sweep_format = "csv";
    std::string sweep_out = "-";
    auto* sweep = app.add_subcommand("sweep", "Evaluate a quantity over a (gamma/Omega, lambda/Omega) grid");
    sweep->add_option("--gamma-axis", gamma_axis, "start:stop:count[:lin|log] or comma list")->capture_default_str();
    sweep->add_option("--lambda-axis", lambda_axis, "start:stop:count[:lin|log] or comma list ('inf' allowed)")->capture_default_str();
    sweep->add_option("--quantity", quantity, "stored_energy_max | ergotropy_max | nonmarkovianity | trajectory")
        ->check(CLI::IsMember({"stored_energy_max", "ergotropy_max", "nonmarkovianity", "trajectory"}))
        ->capture_default_str();
    sweep->add_option("--tmax", sweep_tmax, "Window in Omega*tau (default depends on quantity)")->check(CLI::PositiveNumber);
    sweep->add_option("--grid", sweep_grid, "BLP scan points or trajectory steps")->check(CLI::Range(2ul, 1000000000ul));
    sweep->add_option("--omega0", sweep_omega0, "Energy unit")->capture_default_str();
    sweep->add_option("--threads", threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();
    sweep->add_option("--format", sweep_format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sweep->add_option("--out", sweep_out, "Output path, '-' for stdout")->capture_default_str();

    std::string figure_name;
    std::string figure_dir = "figures";
    unsigned figure_threads = 0;
    auto* figure = app.add_subcommand("figure", "Write the datasets and manifest behind one figure");
    figure->add_option("name", figure_name, "Figure name")->required();
    figure->add_option("--out", figure_dir, "Output directory")->capture_default_str();
    figure->add_option("--threads", figure_threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*evolve) return run_evolve(evolve_opt, evolve_tmax, evolve_steps);
        if (*maxima) return run_maxima(maxima_opt, maxima_tmax);
        if (*nonmarkov) return run_nonmarkov(nm_opt, nm_tmax, nm_grid);
        if (*sweep) {
            qbat::SweepSpec spec;
            spec.gamma_over_omega = qbat::parse_axis(gamma_axis);
            spec.lambda_over_omega = qbat::parse_axis(lambda_axis);
            spec.quantity = *qbat::parse_quantity(quantity);
            spec.tmax = sweep_tmax;
            spec.grid = sweep_grid;
            spec.omega0 = sweep_omega0;
            qbat::validate(spec);
            auto meta = qbat::base_metadata(quantity, {{"omega0", qbat::format_real(spec.omega0)},
                                                       {"gamma_axis", gamma_axis},
                                                       {"lambda_axis", lambda_axis},
                                                       {"tmax", qbat::format_real(qbat::effective_tmax(spec))},
                                                       {"grid", std::to_string(qbat::effective_grid(spec))}});
            std::ostringstream text;
            if (spec.quantity == qbat::Quantity::trajectory) {
                const auto curves = qbat::run_trajectory_sweep(spec, threads);
                if (sweep_format == "json")
                    text << qbat::trajectories_to_json(curves, meta).dump(2) << '\n';
                else
                    qbat::write_trajectories_csv(text, curves, meta);
            } else {
                const auto result = qbat::run_sweep(spec, threads);
                if (sweep_format == "json")
                    text << qbat::sweep_to_json(result, meta).dump(2) << '\n';
                else
                    qbat::write_sweep_csv(text, result, meta);
            }
            emit(sweep_out, text.str());
            return 0;
        }
        if (*figure) {
            if (!qbat::is_figure(figure_name)) {
                std::cerr << "unknown figure '" << figure_name << "'; valid names:";
                for (auto n : qbat::figure_names()) std::cerr << ' ' << n;
                std::cerr << '\n';
                return kUsage;
            }
            const auto bundle = qbat::build_figure(figure_name, figure_threads);
            try {
                qbat::write_bundle(bundle, figure_dir);
            } catch (const std::exception& e) {
                throw IoError(e.what());
            }
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kUsage;
}
