// acceptance.cpp — the nine release criteria, one PASS/FAIL line each
//
// Exit status is the number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qbat/metrics.hpp"
#include "qbat/ode_oracle.hpp"
#include "qbat/propagator.hpp"
#include "support/unitary_orbit.hpp"

using namespace qbat;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const double kInf = kInfiniteWidth;

Outcome memoryless_energy() {
    const auto r = maximize_over_tau(make_params(1.0, 1.0, 0.1, kInf), empty_battery_state());
    return {std::abs(r.delta_e_max - 0.925) <= 0.005, fmt("dE_max = %.6f at Omega tau = %.4f", r.delta_e_max, r.tau_at_e_max)};
}

Outcome memoryless_ergotropy() {
    const auto r = maximize_over_tau(make_params(1.0, 1.0, 0.1, kInf), empty_battery_state());
    return {std::abs(r.w_max - 0.851) <= 0.005, fmt("W_max = %.6f", r.w_max)};
}

Outcome threshold() {
    bool ok = true;
    std::string detail;
    for (double g : {0.5, 1.0, 2.0, 3.9}) {
        const double n = blp_nonmarkovianity(make_params(1.0, 1.0, g, kInf)).measure;
        ok = ok && n > 0.0;
        detail += fmt("N(%.1f)=%.3g ", g, n);
    }
    for (double g : {4.0, 4.1, 5.0, 10.0}) {
        const double n = blp_nonmarkovianity(make_params(1.0, 1.0, g, kInf)).measure;
        ok = ok && n < 1e-9;
        detail += fmt("N(%.1f)=%.3g ", g, n);
    }
    return {ok, detail};
}

Outcome memory_advantage() {
    const auto flat = maximize_over_tau(make_params(1.0, 1.0, 0.1, kInf), empty_battery_state());
    const auto mem = maximize_over_tau(make_params(1.0, 1.0, 0.1, 0.1), empty_battery_state());
    return {mem.delta_e_max > flat.delta_e_max && mem.w_max > flat.w_max,
            fmt("dE_max %.6f > %.6f, W_max %.6f > %.6f", mem.delta_e_max, flat.delta_e_max, mem.w_max, flat.w_max)};
}

Outcome oracle_equivalence() {
    const double axis[] = {0.1, 0.5, 1.0, 5.0, 10.0, 50.0};
    std::vector<double> times;
    for (int i = 0; i <= 5000; ++i) times.push_back(i * 0.01);
    double worst = 0.0;
    for (double g : axis)
        for (double l : axis) {
            const auto p = make_params(1.0, 1.0, g, l);
            const Propagator prop(p);
            for (const auto& s : integrate(p, empty_battery_state(), times, 1e-12))
                worst = std::max(worst, std::abs(prop.kappa(s.time) - s.state.c2));
        }
    return {worst < 1e-8, fmt("max |kappa - oracle| = %.3g over 36 cells", worst)};
}

Outcome rabi() {
    const auto p = make_params(1.0, 1.0, 0.0, 1.0);
    const auto t = trajectory(p, empty_battery_state(), 2.0 * std::numbers::pi, 1000);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        const double s = std::sin(t.times[i]);
        worst = std::max(worst, std::abs(t.population[i] - s * s));
    }
    const auto m = maximize_over_tau(p, empty_battery_state());
    const bool peak = std::abs(m.delta_e_max - p.omega0()) <= 1e-12 &&
                      std::abs(m.tau_at_e_max - std::numbers::pi / 2) <= 1e-6;
    return {worst < 1e-12 && peak, fmt("population error %.3g, dE_max = %.15f at %.9f", worst, m.delta_e_max, m.tau_at_e_max)};
}

Outcome wide_band_limit() {
    const auto flat = make_params(1.0, 1.0, 0.1, kInf);
    auto deviation = [&](double l) {
        const Propagator prop(make_params(1.0, 1.0, 0.1, l));
        double worst = 0.0;
        for (int i = 0; i <= 25000; ++i) {
            const double t = i * 1e-3;
            worst = std::max(worst, std::abs(prop.kappa(t) - kappa_memoryless_at(flat, t)));
        }
        return worst;
    };
    const double d3 = deviation(1e3);
    const double d4 = deviation(1e4);
    return {d3 < 2e-2 && d4 < d3, fmt("deviation %.3g at 1e3, %.3g at 1e4", d3, d4)};
}

Outcome ergotropy_consistency() {
    double qubit_err = 0.0;
    for (double omega0 : {1.0, 2.5}) {
        const auto p = make_params(omega0, 1.0, 0.1, 0.1);
        for (int k = 0; k <= 10; ++k) {
            const double pop = k * 0.1;
            qubit_err = std::max(qubit_err, std::abs(ergotropy_general(battery_density_matrix(pop), battery_hamiltonian(p)) -
                                                     ergotropy_qubit(p, pop)));
        }
    }
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n(0.0, 1.0);
    double orbit_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd g(3, 3), a(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                g(i, j) = {n(rng), n(rng)};
                a(i, j) = {n(rng), n(rng)};
            }
        Eigen::MatrixXcd rho = g * g.adjoint();
        rho /= rho.trace().real();
        const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
        orbit_err = std::max(orbit_err, std::abs(ergotropy_general(rho, h) - test::brute_force_ergotropy(rho, h, rng)));
    }
    return {qubit_err < 1e-12 && orbit_err < 1e-6, fmt("qubit error %.3g, 3-level orbit error %.3g", qubit_err, orbit_err)};
}

Outcome trends() {
    const double axis[] = {0.1, 0.5, 1.0, 5.0, 10.0};
    double e[5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            e[i][j] = maximize_over_tau(make_params(1.0, 1.0, axis[i], axis[j]), empty_battery_state()).delta_e_max;
    int violations = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (i > 0 && e[i][j] > e[i - 1][j]) ++violations;
            if (j > 0 && e[i][j] > e[i][j - 1]) ++violations;
        }
    for (double l : {0.1, 1.0}) {
        double prev = INFINITY;
        for (double g : axis) {
            const double v = blp_nonmarkovianity(make_params(1.0, 1.0, g, l)).measure;
            if (v > prev) ++violations;
            prev = v;
        }
    }
    return {violations == 0, fmt("%d monotonicity violations", violations)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "memoryless optimum, stored energy", 1.0, memoryless_energy},
        {2, "memoryless optimum, ergotropy", 1.0, memoryless_ergotropy},
        {3, "non-Markovianity threshold at gamma = 4 Omega", 10.0, threshold},
        {4, "memory advantage at gamma = lambda = 0.1 Omega", 1.0, memory_advantage},
        {5, "propagator vs ODE oracle on 36 cells", 30.0, oracle_equivalence},
        {6, "Rabi limit", 1.0, rabi},
        {7, "wide-band convergence", 5.0, wide_band_limit},
        {8, "ergotropy consistency", 60.0, ergotropy_consistency},
        {9, "trend properties", 30.0, trends},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.ok && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s  %d. %s: %s [%.3f s / %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    c.budget_s, in_time ? "" : ", over budget");
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
