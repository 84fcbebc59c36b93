// ode_oracle.hpp — Direct time integration of the single-excitation amplitude equations
//
// Independent of the Laplace route: the Lorentzian memory integral is closed
// by the pseudomode auxiliary z, giving the linear system
//
//     c1' = -i Omega c2 - (gamma lambda / 2) z
//     c2' = -i Omega c1
//     z'  = c1 - lambda z
//
// and, for infinite width, c1' = -i Omega c2 - (gamma / 2) c1, c2' = -i Omega c1.
// Integrated with an embedded Dormand-Prince 5(4) pair under error-per-unit-step
// control, so `tol` bounds the error accumulated over the whole window. Steps
// are clamped so every requested output time is hit exactly.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "qbat/model.hpp"

namespace qbat {

struct OracleSample {
    double time;  // Omega tau
    AmplitudeState state;
};

using OracleSeries = std::vector<OracleSample>;

/// Generator M of d/dt (c1, c2, z) = M (c1, c2, z), physical time units.
Eigen::Matrix3cd system_matrix(const ModelParams& params);

/// `times` must be non-decreasing and non-negative; `tol` in [1e-12, 1e-6].
OracleSeries integrate(const ModelParams& params, const InitialState& init,
                       std::span<const double> times, double tol = 1e-10);

/// Uniform output grid of `samples` points on [0, tmax].
OracleSeries integrate(const ModelParams& params, const InitialState& init, double tmax,
                       double tol = 1e-10, std::size_t samples = 501);

OracleSeries integrate_memoryless(const ModelParams& params, const InitialState& init,
                                  std::span<const double> times, double tol = 1e-10);

OracleSeries integrate_memoryless(const ModelParams& params, const InitialState& init,
                                  double tmax, double tol = 1e-10, std::size_t samples = 501);

}  // namespace qbat
