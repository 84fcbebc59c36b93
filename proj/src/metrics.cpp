#include "qbat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbat/golden.hpp"
#include "qbat/propagator.hpp"

namespace qbat {
namespace {

void require_population(double population) {
    if (!(population >= 0.0 && population <= 1.0 + 1e-9))
        throw std::invalid_argument("population must lie in [0, 1]");
}

void require_hermitian(const Eigen::MatrixXcd& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + " must be square");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument(std::string(what) + " must be Hermitian");
}

}  // namespace

double stored_energy(const ModelParams& params, double population) {
    require_population(population);
    return params.omega0() * population;
}

double ergotropy_qubit(const ModelParams& params, double population) {
    require_population(population);
    return population > 0.5 ? params.omega0() * (2.0 * population - 1.0) : 0.0;
}

Eigen::Matrix2cd battery_density_matrix(double population) {
    require_population(population);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    rho(0, 0) = population;
    rho(1, 1) = 1.0 - population;
    return rho;
}

Eigen::Matrix2cd battery_hamiltonian(const ModelParams& params) {
    Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
    h(0, 0) = params.omega0();
    return h;
}

double ergotropy_general(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& hamiltonian) {
    require_hermitian(rho, "density matrix");
    require_hermitian(hamiltonian, "Hamiltonian");
    if (rho.rows() != hamiltonian.rows() || rho.rows() < 2)
        throw std::invalid_argument("density matrix and Hamiltonian must share a dimension >= 2");
    if (std::abs(rho.trace() - 1.0) > 1e-9) throw std::invalid_argument("density matrix must have unit trace");

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> state(rho, Eigen::EigenvaluesOnly);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> energy(hamiltonian, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& r = state.eigenvalues();     // ascending
    const Eigen::VectorXd& eps = energy.eigenvalues();  // ascending
    if (r.minCoeff() < -1e-9) throw std::invalid_argument("density matrix must be positive");

    // largest population on the lowest level
    const auto d = r.size();
    double passive = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) passive += r[d - 1 - n] * eps[n];
    const double mean = (rho * hamiltonian).trace().real();
    return std::max(0.0, mean - passive);
}

NonMarkovReport blp_nonmarkovianity(const ModelParams& params, const BlpOptions& options) {
    if (!(options.tmax > 0.0) || options.grid < 2)
        throw std::invalid_argument("BLP window needs tmax > 0 and at least two grid points");

    const Propagator prop(params);
    auto distance = [&](double t) { return std::norm(prop.battery_return(t)); };
    auto slope = [&](double t) {
        return 2.0 * std::real(std::conj(prop.battery_return(t)) * prop.battery_return_rate(t));
    };
    auto bisect = [&](double lo, double hi, bool rising_at_lo) {
        for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((slope(mid) > 0.0) == rising_at_lo)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    NonMarkovReport report;
    const double h = options.tmax / static_cast<double>(options.grid - 1);
    bool rising = slope(0.0) > 0.0;
    double start = 0.0;
    double prev_t = 0.0;
    auto close = [&](double end) {
        const double d_start = distance(start);
        const double d_end = distance(end);
        const double rise = d_end - d_start;
        // ignore rounding-level wiggles on monotone stretches
        if (rise > 16.0 * std::numeric_limits<double>::epsilon() * std::max(d_start, d_end)) {
            report.backflow_intervals.push_back({start, end});
            report.measure += rise;
        }
    };
    for (std::size_t i = 1; i < options.grid; ++i) {
        const double t = i + 1 == options.grid ? options.tmax : h * static_cast<double>(i);
        const bool now = slope(t) > 0.0;
        if (now != rising) {
            const double root = bisect(prev_t, t, rising);
            if (rising)
                close(root);
            else
                start = root;
            rising = now;
        }
        prev_t = t;
    }
    if (rising) close(options.tmax);

    report.final_distance = distance(options.tmax);
    report.truncated = report.final_distance > 1e-6;
    report.divergent = params.cavity_env_coupling() == 0.0;
    return report;
}

MaximaReport maximize_over_tau(const ModelParams& params, const InitialState& init, double tmax) {
    if (!(tmax > 0.0) || !std::isfinite(tmax)) throw std::invalid_argument("tmax must be positive");

    const Propagator prop(params);
    auto population = [&](double t) { return std::min(std::norm(prop.amplitudes(init, t).c2), 1.0); };

    constexpr std::size_t kScan = 2000;
    const double h = tmax / static_cast<double>(kScan - 1);
    std::vector<double> grid(kScan);
    for (std::size_t i = 0; i < kScan; ++i) grid[i] = population(h * static_cast<double>(i));

    // Refine every grid peak; equal peaks (Rabi) resolve to the earliest.
    constexpr double kTie = 1e-12;
    MaximaReport report;
    double tau = 0.0;
    double best_p = grid[0];
    for (std::size_t i = 1; i < kScan; ++i) {
        const bool last = i + 1 == kScan;
        if (grid[i] < grid[i - 1] || (!last && grid[i] < grid[i + 1])) continue;
        double arg = h * static_cast<double>(i);
        double value = grid[i];
        if (!last) {
            const auto [a, v] = golden_section_maximize(population, h * static_cast<double>(i - 1),
                                                        h * static_cast<double>(i + 1), 1e-8);
            if (v >= value) {
                arg = a;
                value = v;
            }
        } else {
            arg = tmax;
        }
        if (value > best_p + kTie) {
            best_p = value;
            tau = arg;
            report.at_boundary = last;
        }
    }

    report.tau_at_e_max = tau;
    report.tau_at_w_max = tau;
    report.delta_e_max = stored_energy(params, best_p) - stored_energy(params, std::norm(init.c2_0));
    report.w_max = ergotropy_qubit(params, best_p);
    return report;
}

}  // namespace qbat
