#include "qbat/propagator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qbat/metrics.hpp"

namespace qbat {
namespace {

constexpr cplx I{0.0, 1.0};

// poles closer than this multiple of the degeneracy tolerance are evaluated as
// one divided-difference block instead of separate residues
constexpr double kBlockScale = 1e4;

void require_time(double omega_tau) {
    if (!(omega_tau >= 0.0) || !std::isfinite(omega_tau))
        throw std::invalid_argument("charging time must be finite and non-negative");
}

// ascending coefficients of p(s)
std::array<double, 4> cubic(const ModelParams& params) {
    const double Om = params.qb_cavity_coupling();
    const double g = params.cavity_env_coupling();
    const double l = params.spectral_width();
    return {l * Om * Om, Om * Om + l * g / 2.0, l, 1.0};
}

cplx eval(const std::array<double, 4>& c, cplx s) { return ((c[3] * s + c[2]) * s + c[1]) * s + c[0]; }
cplx eval_prime(const std::array<double, 4>& c, cplx s) { return (3.0 * c[3] * s + 2.0 * c[2]) * s + c[1]; }

std::vector<cplx> memoryless_roots(const ModelParams& params) {
    const double Om = params.qb_cavity_coupling();
    const double g = params.cavity_env_coupling();
    const double disc = g * g / 16.0 - Om * Om;
    const cplx root = std::sqrt(cplx{disc, 0.0});
    const cplx centre{-g / 4.0, 0.0};
    // smaller-magnitude real root via Vieta to avoid cancellation
    if (disc > 0.0) {
        const cplx big = centre - root;
        return {big, Om * Om / big};
    }
    return {centre + root, centre - root};
}

}  // namespace

double degeneracy_tolerance(const ModelParams& params) {
    double scale = std::max(params.qb_cavity_coupling(), params.cavity_env_coupling());
    if (!params.memoryless()) scale = std::max(scale, params.spectral_width());
    return 1e-7 * scale;
}

PropagatorRoots solve_roots(const ModelParams& params) {
    if (params.memoryless())
        throw std::invalid_argument("the cubic exists only for finite spectral width");
    const auto c = cubic(params);

    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = -c[0];
    companion(1, 2) = -c[1];
    companion(2, 2) = -c[2];
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigensolver failed");

    PropagatorRoots out;
    for (int j = 0; j < 3; ++j) {
        cplx s = solver.eigenvalues()[j];
        for (int step = 0; step < 2; ++step) {
            const cplx dp = eval_prime(c, s);
            if (dp == cplx{}) break;
            const cplx next = s - eval(c, s) / dp;
            if (std::abs(eval(c, next)) < std::abs(eval(c, s))) s = next;
        }
        out.roots[static_cast<std::size_t>(j)] = s;
    }
    std::sort(out.roots.begin(), out.roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    // A triple root is only resolved to about eps^(1/3), a double root to eps^(1/2).
    const double tol = degeneracy_tolerance(params);
    double min_gap = INFINITY;
    double spread = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            min_gap = std::min(min_gap, std::abs(out.roots[i] - out.roots[j]));
            spread = std::max(spread, std::abs(out.roots[i] - out.roots[j]));
        }
    out.degenerate = min_gap < tol || spread < 1e3 * tol;

    const double Om = params.qb_cavity_coupling();
    const double l = params.spectral_width();
    const cplx num[] = {-I * Om * l, -I * Om};
    const double block_tol = kBlockScale * tol;
    const auto kappa = ExponentialSum::invert(num, out.roots, block_tol);
    std::size_t block = 0;
    for (const auto& group : cluster_roots(out.roots, block_tol)) {
        if (group.size() == 1) {
            const cplx s = out.roots[group[0]];
            out.residues_kappa[group[0]] = -I * Om * (s + l) / eval_prime(c, s);
            continue;
        }
        // value of the block at t = 0 sits on its first member
        const auto& w = kappa.blocks()[block++].weights;
        out.residues_kappa[group[0]] = w(w.size() - 1);
        for (std::size_t k = 1; k < group.size(); ++k) out.residues_kappa[group[k]] = cplx{};
    }
    return out;
}

Propagator::Propagator(const ModelParams& params) : params_(params) {
    const double Om = params.qb_cavity_coupling();
    const double g = params.cavity_env_coupling();
    const double block_tol = kBlockScale * degeneracy_tolerance(params);
    const cplx one{1.0, 0.0};

    if (params.memoryless()) {
        poles_ = memoryless_roots(params);
        const cplx c1c1[] = {cplx{}, one};
        const cplx cross[] = {-I * Om};
        const cplx c2c2[] = {cplx{g / 2.0, 0.0}, one};
        c1_from_c1_ = ExponentialSum::invert(c1c1, poles_, block_tol);
        c1_from_c2_ = ExponentialSum::invert(cross, poles_, block_tol);
        c2_from_c1_ = ExponentialSum::invert(cross, poles_, block_tol);
        c2_from_c2_ = ExponentialSum::invert(c2c2, poles_, block_tol);
        return;
    }

    const double l = params.spectral_width();
    const auto roots = solve_roots(params);
    poles_.assign(roots.roots.begin(), roots.roots.end());
    const cplx c1c1[] = {cplx{}, cplx{l, 0.0}, one};
    const cplx cross[] = {-I * Om * l, -I * Om};
    const cplx c2c2[] = {cplx{l * g / 2.0, 0.0}, cplx{l, 0.0}, one};
    const cplx zc1[] = {cplx{}, one};
    const cplx zc2[] = {-I * Om};
    c1_from_c1_ = ExponentialSum::invert(c1c1, poles_, block_tol);
    c1_from_c2_ = ExponentialSum::invert(cross, poles_, block_tol);
    c2_from_c1_ = ExponentialSum::invert(cross, poles_, block_tol);
    c2_from_c2_ = ExponentialSum::invert(c2c2, poles_, block_tol);
    z_from_c1_ = ExponentialSum::invert(zc1, poles_, block_tol);
    z_from_c2_ = ExponentialSum::invert(zc2, poles_, block_tol);
}

cplx Propagator::kappa(double omega_tau) const {
    return c2_from_c1_(omega_tau / params_.qb_cavity_coupling());
}

cplx Propagator::kappa_rate(double omega_tau) const {
    const double Om = params_.qb_cavity_coupling();
    return c2_from_c1_.derivative(omega_tau / Om) / Om;
}

cplx Propagator::battery_return(double omega_tau) const {
    return c2_from_c2_(omega_tau / params_.qb_cavity_coupling());
}

cplx Propagator::battery_return_rate(double omega_tau) const {
    const double Om = params_.qb_cavity_coupling();
    return c2_from_c2_.derivative(omega_tau / Om) / Om;
}

AmplitudeState Propagator::amplitudes(const InitialState& init, double omega_tau) const {
    const double t = omega_tau / params_.qb_cavity_coupling();
    AmplitudeState s;
    s.c1 = init.c1_0 * c1_from_c1_(t) + init.c2_0 * c1_from_c2_(t);
    s.c2 = init.c1_0 * c2_from_c1_(t) + init.c2_0 * c2_from_c2_(t);
    if (!params_.memoryless()) s.z = init.c1_0 * z_from_c1_(t) + init.c2_0 * z_from_c2_(t);
    return s;
}

cplx kappa_at(const ModelParams& params, double omega_tau) {
    require_time(omega_tau);
    if (params.memoryless()) return kappa_memoryless_at(params, omega_tau);
    return Propagator(params).kappa(omega_tau);
}

cplx kappa_memoryless_at(const ModelParams& params, double omega_tau) {
    if (!params.memoryless())
        throw std::invalid_argument("closed form applies to infinite spectral width only");
    require_time(omega_tau);
    const double Om = params.qb_cavity_coupling();
    const double g = params.cavity_env_coupling();
    const double t = omega_tau / Om;
    const cplx R = std::sqrt(cplx{g * g - 16.0 * Om * Om, 0.0});
    const cplx x = R * t / 4.0;
    // sinh(x) / x, even in x so the branch of R drops out
    const cplx sinhc = std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 + x * x * x * x / 120.0
                                          : std::sinh(x) / x;
    return -I * Om * t * std::exp(-g * t / 4.0) * sinhc;
}

AmplitudeState amplitudes_at(const ModelParams& params, const InitialState& init,
                             double omega_tau) {
    require_time(omega_tau);
    return Propagator(params).amplitudes(init, omega_tau);
}

ChargingTrajectory trajectory(const ModelParams& params, const InitialState& init,
                              double tmax, std::size_t steps) {
    if (!(tmax > 0.0) || !std::isfinite(tmax)) throw std::invalid_argument("tmax must be positive");
    if (steps < 2) throw std::invalid_argument("trajectory needs at least two points");

    const Propagator prop(params);
    const double p0 = std::norm(init.c2_0);
    ChargingTrajectory out;
    out.times.resize(steps);
    out.kappa.resize(steps);
    out.population.resize(steps);
    out.stored_energy.resize(steps);
    out.ergotropy.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = i + 1 == steps ? tmax : tmax * static_cast<double>(i) / static_cast<double>(steps - 1);
        const cplx c2 = prop.amplitudes(init, t).c2;
        const double p = std::min(std::norm(c2), 1.0);
        out.times[i] = t;
        out.kappa[i] = c2;
        out.population[i] = p;
        out.stored_energy[i] = stored_energy(params, p) - stored_energy(params, p0);
        out.ergotropy[i] = ergotropy_qubit(params, p);
    }
    return out;
}

}  // namespace qbat
