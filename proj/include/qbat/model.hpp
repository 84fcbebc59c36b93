// model.hpp — Parameter set, initial states and Lorentzian spectral density
//
// Frequencies are measured in units of the qubit-cavity coupling Omega on every
// figure axis; energies are reported in units of omega0. The cavity is always
// resonant with the qubit, so its frequency is not stored.

#pragma once

#include <complex>
#include <limits>

namespace qbat {

using cplx = std::complex<double>;

/// Spectral width value selecting the memoryless (flat-spectrum) limit.
inline constexpr double kInfiniteWidth = std::numeric_limits<double>::infinity();

class ModelParams {
public:
    double omega0() const noexcept { return omega0_; }
    /// Omega: qubit-cavity coupling.
    double qb_cavity_coupling() const noexcept { return qb_cavity_; }
    /// gamma: effective cavity-environment coupling.
    double cavity_env_coupling() const noexcept { return cavity_env_; }
    /// lambda: Lorentzian width, inverse of the reservoir memory time.
    double spectral_width() const noexcept { return width_; }
    bool memoryless() const noexcept { return width_ == kInfiniteWidth; }

    friend ModelParams make_params(double omega0, double Omega, double gamma, double lambda);

private:
    ModelParams(double omega0, double Omega, double gamma, double lambda)
        : omega0_(omega0), qb_cavity_(Omega), cavity_env_(gamma), width_(lambda) {}

    double omega0_;
    double qb_cavity_;
    double cavity_env_;
    double width_;
};

/// Validates and builds a parameter set. Pass kInfiniteWidth as lambda for the
/// memoryless reservoir. Throws std::invalid_argument on out-of-range input.
ModelParams make_params(double omega0, double Omega, double gamma, double lambda);

/// Copy of `params` with a different omega0; dynamics are unaffected.
ModelParams with_omega0(const ModelParams& params, double omega0);

/// Single-excitation amplitudes at one instant. `z` is the pseudomode auxiliary
/// z(t) = int_0^t exp(-lambda (t - t')) c1(t') dt' carrying the reservoir memory;
/// it is identically zero in the memoryless limit.
struct AmplitudeState {
    cplx c1{};
    cplx c2{};
    cplx z{};
};

/// Initial amplitudes of |g_B,1_c> (c1) and |e_B,0_c> (c2), reservoir in vacuum.
struct InitialState {
    cplx c1_0{1.0, 0.0};
    cplx c2_0{0.0, 0.0};
};

/// Throws std::invalid_argument unless |c1|^2 + |c2|^2 = 1 within 1e-12.
InitialState make_initial_state(cplx c1_0, cplx c2_0);

/// Cavity holds the excitation, battery empty.
InitialState empty_battery_state() noexcept;

/// Battery excited, cavity empty.
InitialState charged_battery_state() noexcept;

/// J(w) = (gamma / 2pi) * lambda^2 / ((omega0 - w)^2 + lambda^2).
///
/// Documentation and plotting only: the dynamics use the matching memory
/// kernel (gamma lambda / 2) exp(-lambda |t - t'|) directly. Throws
/// std::invalid_argument for memoryless params.
double spectral_density_at(const ModelParams& params, double omega);

}  // namespace qbat
