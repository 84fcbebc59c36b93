#include "qbat/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qbat {
namespace {

void write_metadata(std::ostream& out, const Metadata& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
}

nlohmann::json metadata_json(const Metadata& meta) {
    auto obj = nlohmann::json::object();
    for (const auto& [key, value] : meta) obj[key] = value;
    return obj;
}

// JSON has no infinity literal
nlohmann::json ratio_json(double v) {
    return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v);
}

double ratio_from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return kInfiniteWidth;
    if (!j.is_number()) throw std::invalid_argument("axis entries must be numbers or \"inf\"");
    return j.get<double>();
}

const char* kTrajectoryHeader = "Omega_tau,re_kappa,im_kappa,population,stored_energy,ergotropy";

void write_row(std::ostream& out, const ChargingTrajectory& t, std::size_t i) {
    out << format_real(t.times[i]) << ',' << format_real(t.kappa[i].real()) << ','
        << format_real(t.kappa[i].imag()) << ',' << format_real(t.population[i]) << ','
        << format_real(t.stored_energy[i]) << ',' << format_real(t.ergotropy[i]) << '\n';
}

}  // namespace

std::string format_real(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Metadata base_metadata(std::string_view quantity, const Metadata& extra) {
    Metadata meta{{"tool", kToolName},
                  {"version", kToolVersion},
                  {"quantity", std::string(quantity)},
                  {"units", "energy in omega0, time in Omega*tau"}};
    meta.insert(meta.end(), extra.begin(), extra.end());
    return meta;
}

void write_trajectory_csv(std::ostream& out, const ChargingTrajectory& traj, const Metadata& meta) {
    write_metadata(out, meta);
    out << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) write_row(out, traj, i);
}

nlohmann::json trajectory_to_json(const ChargingTrajectory& traj, const Metadata& meta) {
    std::vector<double> re, im;
    for (const auto& k : traj.kappa) {
        re.push_back(k.real());
        im.push_back(k.imag());
    }
    return {{"metadata", metadata_json(meta)},
            {"columns",
             {{"Omega_tau", traj.times},
              {"re_kappa", re},
              {"im_kappa", im},
              {"population", traj.population},
              {"stored_energy", traj.stored_energy},
              {"ergotropy", traj.ergotropy}}}};
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const Metadata& meta) {
    write_metadata(out, meta);
    for (std::size_t r = 0; r < result.rows(); ++r)
        for (std::size_t c = 0; c < result.cols(); ++c)
            if (result.flag_at(r, c) != CellFlag::none)
                out << "# flag gamma_over_Omega=" << format_real(result.spec.gamma_over_omega[r])
                    << " lambda_over_Omega=" << format_real(result.spec.lambda_over_omega[c]) << ' '
                    << to_string(result.flag_at(r, c)) << '\n';
    out << "gamma_over_Omega\\lambda_over_Omega";
    for (double l : result.spec.lambda_over_omega) out << ',' << format_real(l);
    out << '\n';
    for (std::size_t r = 0; r < result.rows(); ++r) {
        out << format_real(result.spec.gamma_over_omega[r]);
        for (std::size_t c = 0; c < result.cols(); ++c) out << ',' << format_real(result.at(r, c));
        out << '\n';
    }
}

nlohmann::json sweep_to_json(const SweepResult& result, const Metadata& meta) {
    auto lambdas = nlohmann::json::array();
    for (double l : result.spec.lambda_over_omega) lambdas.push_back(ratio_json(l));
    auto values = nlohmann::json::array();
    auto flags = nlohmann::json::array();
    for (std::size_t r = 0; r < result.rows(); ++r) {
        auto row = nlohmann::json::array();
        auto frow = nlohmann::json::array();
        for (std::size_t c = 0; c < result.cols(); ++c) {
            row.push_back(result.at(r, c));
            frow.push_back(std::string(to_string(result.flag_at(r, c))));
        }
        values.push_back(std::move(row));
        flags.push_back(std::move(frow));
    }
    return {{"metadata", metadata_json(meta)},
            {"quantity", std::string(to_string(result.spec.quantity))},
            {"omega0", result.spec.omega0},
            {"tmax", effective_tmax(result.spec)},
            {"grid", effective_grid(result.spec)},
            {"gamma_over_Omega", result.spec.gamma_over_omega},
            {"lambda_over_Omega", lambdas},
            {"values", values},
            {"flags", flags}};
}

SweepResult sweep_from_json(const nlohmann::json& doc) {
    try {
        SweepResult result;
        const auto quantity = parse_quantity(doc.at("quantity").get<std::string>());
        if (!quantity) throw std::invalid_argument("unknown quantity");
        result.spec.quantity = *quantity;
        result.spec.omega0 = doc.at("omega0").get<double>();
        result.spec.tmax = doc.at("tmax").get<double>();
        result.spec.grid = doc.at("grid").get<std::size_t>();
        result.spec.gamma_over_omega = doc.at("gamma_over_Omega").get<std::vector<double>>();
        for (const auto& l : doc.at("lambda_over_Omega")) result.spec.lambda_over_omega.push_back(ratio_from_json(l));

        const auto& values = doc.at("values");
        const auto& flags = doc.at("flags");
        if (values.size() != result.rows() || flags.size() != result.rows())
            throw std::invalid_argument("grid row count does not match the gamma axis");
        for (std::size_t r = 0; r < result.rows(); ++r) {
            if (values[r].size() != result.cols() || flags[r].size() != result.cols())
                throw std::invalid_argument("grid column count does not match the lambda axis");
            for (std::size_t c = 0; c < result.cols(); ++c) {
                result.values.push_back(values[r][c].get<double>());
                const auto flag = parse_cell_flag(flags[r][c].get<std::string>());
                if (!flag) throw std::invalid_argument("unknown cell flag");
                result.flags.push_back(*flag);
            }
        }
        validate(result.spec);
        return result;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed sweep document: ") + e.what());
    }
}

void write_trajectories_csv(std::ostream& out, const std::vector<LabeledTrajectory>& curves,
                            const Metadata& meta) {
    write_metadata(out, meta);
    out << "gamma_over_Omega,lambda_over_Omega," << kTrajectoryHeader << '\n';
    for (const auto& curve : curves)
        for (std::size_t i = 0; i < curve.trajectory.times.size(); ++i) {
            out << format_real(curve.gamma_over_omega) << ',' << format_real(curve.lambda_over_omega) << ',';
            write_row(out, curve.trajectory, i);
        }
}

nlohmann::json trajectories_to_json(const std::vector<LabeledTrajectory>& curves, const Metadata& meta) {
    auto list = nlohmann::json::array();
    for (const auto& curve : curves) {
        auto entry = trajectory_to_json(curve.trajectory, {});
        entry.erase("metadata");
        entry["gamma_over_Omega"] = curve.gamma_over_omega;
        entry["lambda_over_Omega"] = ratio_json(curve.lambda_over_omega);
        list.push_back(std::move(entry));
    }
    return {{"metadata", metadata_json(meta)}, {"trajectories", list}};
}

}  // namespace qbat
