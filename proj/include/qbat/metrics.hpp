// metrics.hpp — Stored energy, ergotropy, BLP non-Markovianity and charging optima
//
// Times are Omega tau; energies are in the units of omega0.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "qbat/model.hpp"

namespace qbat {

/// omega0 * population. Throws std::invalid_argument outside [0, 1 + 1e-9].
double stored_energy(const ModelParams& params, double population);

/// omega0 (2p - 1) Theta(p - 1/2): ergotropy of a battery diagonal in {|e>, |g>}.
double ergotropy_qubit(const ModelParams& params, double population);

/// Reduced battery state diag(p, 1 - p) in the ordered basis {|e>, |g>}.
Eigen::Matrix2cd battery_density_matrix(double population);

/// omega0 |e><e| in the basis {|e>, |g>}.
Eigen::Matrix2cd battery_hamiltonian(const ModelParams& params);

/// tr(rho H) - tr(sigma H), sigma the passive state built from the descending
/// spectrum of rho on the ascending eigenbasis of H. Throws std::invalid_argument
/// unless rho is a Hermitian, unit-trace, positive matrix and H is Hermitian of
/// the same dimension (tolerance 1e-9).
double ergotropy_general(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& hamiltonian);

struct BackflowInterval {
    double start;
    double end;
};

struct NonMarkovReport {
    double measure{0.0};
    std::vector<BackflowInterval> backflow_intervals;
    double final_distance{0.0};  // D at the end of the window
    bool truncated{false};       // D(tmax) above 1e-6: later backflow is missed
    bool divergent{false};       // gamma = 0: recurrences never die out
};

struct BlpOptions {
    double tmax{200.0};      // Omega tau
    std::size_t grid{200000};
};

/// BLP measure for the pair |e><e|, |g><g|. Their trace distance is
/// D(t) = |G(t)|^2, G the battery amplitude evolved from |e_B, 0_c>; the measure
/// sums the rise of D over every interval where dD/dt > 0. Sign changes of
/// dD/dt are bracketed on the grid and refined by bisection.
NonMarkovReport blp_nonmarkovianity(const ModelParams& params, const BlpOptions& options = {});

struct MaximaReport {
    double delta_e_max{0.0};
    double w_max{0.0};
    double tau_at_e_max{0.0};
    double tau_at_w_max{0.0};
    bool at_boundary{false};  // optimum sits at tmax; widen the window
};

/// Coarse 2000-point scan on [0, tmax] followed by golden-section refinement of
/// the best bracket to 1e-8 in Omega tau.
MaximaReport maximize_over_tau(const ModelParams& params, const InitialState& init,
                               double tmax = 50.0);

}  // namespace qbat
