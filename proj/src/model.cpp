#include "qbat/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbat {

ModelParams make_params(double omega0, double Omega, double gamma, double lambda) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::invalid_argument("omega0 must be positive and finite");
    if (!(Omega > 0.0) || !std::isfinite(Omega))
        throw std::invalid_argument("Omega must be positive and finite");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be non-negative and finite");
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be positive or infinite");
    return ModelParams(omega0, Omega, gamma, lambda);
}

ModelParams with_omega0(const ModelParams& params, double omega0) {
    return make_params(omega0, params.qb_cavity_coupling(), params.cavity_env_coupling(),
                       params.spectral_width());
}

InitialState make_initial_state(cplx c1_0, cplx c2_0) {
    const double norm = std::norm(c1_0) + std::norm(c2_0);
    if (!(std::abs(norm - 1.0) <= 1e-12))
        throw std::invalid_argument("initial amplitudes must be normalised");
    return InitialState{c1_0, c2_0};
}

InitialState empty_battery_state() noexcept { return InitialState{{1.0, 0.0}, {0.0, 0.0}}; }

InitialState charged_battery_state() noexcept { return InitialState{{0.0, 0.0}, {1.0, 0.0}}; }

double spectral_density_at(const ModelParams& params, double omega) {
    if (params.memoryless())
        throw std::invalid_argument("spectral density is flat in the memoryless limit");
    const double lambda = params.spectral_width();
    const double detuning = params.omega0() - omega;
    return params.cavity_env_coupling() / (2.0 * std::numbers::pi) * lambda * lambda /
           (detuning * detuning + lambda * lambda);
}

}  // namespace qbat
