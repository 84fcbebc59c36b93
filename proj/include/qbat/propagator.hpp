// propagator.hpp — Exact single-excitation dynamics by analytic Laplace inversion
//
// All time arguments are the dimensionless product Omega * tau used on the
// figure axes. With the reservoir folded into one damped pseudomode, every
// amplitude is a rational function of s over the cubic
//
//     p(s) = s^3 + lambda s^2 + (Omega^2 + lambda gamma / 2) s + lambda Omega^2,
//
// which collapses to s^2 + gamma s / 2 + Omega^2 in the memoryless limit.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qbat/laplace.hpp"
#include "qbat/model.hpp"

namespace qbat {

struct PropagatorRoots {
    std::array<cplx, 3> roots{};
    /// kappa(t) = sum_j A_j exp(s_j t) for simple roots. Roots evaluated as one
    /// near-degenerate block report the block's value at t = 0 on the first member
    /// and 0 on the others, so sum_j A_j = kappa(0) in every case.
    std::array<cplx, 3> residues_kappa{};
    bool degenerate{false};
};

/// Roots of p(s) from the companion-matrix eigenvalues, Newton polished.
/// Throws std::invalid_argument for memoryless params.
PropagatorRoots solve_roots(const ModelParams& params);

/// Root separation below which the set is reported degenerate: 1e-7 * max(Omega, gamma, lambda).
double degeneracy_tolerance(const ModelParams& params);

/// Precomputed inverse transforms for one parameter set; cheap to evaluate at
/// many times. Works for both finite and infinite spectral width.
class Propagator {
public:
    explicit Propagator(const ModelParams& params);

    const ModelParams& params() const noexcept { return params_; }
    const std::vector<cplx>& poles() const noexcept { return poles_; }

    /// Battery amplitude for the empty-battery start, c2(t) with c1(0) = 1.
    cplx kappa(double omega_tau) const;
    /// d kappa / d(Omega tau).
    cplx kappa_rate(double omega_tau) const;

    /// Battery amplitude c2(t) starting from c2(0) = 1, cavity empty. Its modulus
    /// squared is the trace distance between the evolved |e><e| and |g><g|.
    cplx battery_return(double omega_tau) const;
    cplx battery_return_rate(double omega_tau) const;

    AmplitudeState amplitudes(const InitialState& init, double omega_tau) const;

private:
    ModelParams params_;
    std::vector<cplx> poles_;
    // response of each amplitude to a unit initial c1 or c2
    ExponentialSum c1_from_c1_, c1_from_c2_;
    ExponentialSum c2_from_c1_, c2_from_c2_;
    ExponentialSum z_from_c1_, z_from_c2_;
};

/// kappa at one instant; memoryless params dispatch to kappa_memoryless_at.
cplx kappa_at(const ModelParams& params, double omega_tau);

/// Closed form for infinite width: -(4 i Omega / R) exp(-gamma tau / 4) sinh(R tau / 4),
/// R = sqrt(gamma^2 - 16 Omega^2), continued analytically through R = 0.
cplx kappa_memoryless_at(const ModelParams& params, double omega_tau);

AmplitudeState amplitudes_at(const ModelParams& params, const InitialState& init,
                             double omega_tau);

struct ChargingTrajectory {
    std::vector<double> times;  // Omega tau
    std::vector<cplx> kappa;
    std::vector<double> population;
    std::vector<double> stored_energy;  // units of omega0
    std::vector<double> ergotropy;      // units of omega0
};

/// Uniform grid of `steps` points on [0, tmax]. For a start other than the empty
/// battery, `kappa` holds c2 and stored energy is measured from the initial
/// battery energy.
ChargingTrajectory trajectory(const ModelParams& params, const InitialState& init,
                              double tmax, std::size_t steps);

}  // namespace qbat
