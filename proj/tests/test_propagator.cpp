#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qbat/metrics.hpp"
#include "qbat/ode_oracle.hpp"
#include "qbat/propagator.hpp"

using namespace qbat;

namespace {

constexpr cplx I{0.0, 1.0};

cplx cubic_at(const ModelParams& p, cplx s) {
    const double Om = p.qb_cavity_coupling();
    const double g = p.cavity_env_coupling();
    const double l = p.spectral_width();
    return ((s + l) * s + (Om * Om + l * g / 2.0)) * s + l * Om * Om;
}

cplx oracle_c2(const ModelParams& p, const InitialState& init, double t) {
    const double times[] = {t};
    return integrate(p, init, times, 1e-12).back().state.c2;
}

}  // namespace

TEST_CASE("decoupled reservoir factorises the cubic") {
    for (double lambda : {0.1, 1.0, 7.0}) {
        const auto roots = solve_roots(make_params(1.0, 1.0, 0.0, lambda));
        CHECK_FALSE(roots.degenerate);
        std::vector<cplx> expected{{-lambda, 0.0}, {0.0, -1.0}, {0.0, 1.0}};
        for (const auto& e : expected) {
            const auto hit = std::min_element(roots.roots.begin(), roots.roots.end(),
                                              [&](cplx a, cplx b) { return std::abs(a - e) < std::abs(b - e); });
            CHECK(std::abs(*hit - e) < 1e-12);
        }
    }
}

TEST_CASE("cubic roots: residual, Vieta, stability, conjugate closure, residue sum") {
    const double grid[] = {0.1, 0.5, 1.0, 5.0, 10.0, 50.0};
    for (double Om : {1.0, 2.5})
        for (double g : grid)
            for (double l : grid) {
                const auto p = make_params(1.0, Om, g * Om, l * Om);
                const auto r = solve_roots(p);
                cplx sum{}, prod{1.0, 0.0}, residues{};
                for (std::size_t j = 0; j < 3; ++j) {
                    CHECK(std::abs(cubic_at(p, r.roots[j])) < 1e-10 * std::max(1.0, std::pow(Om, 3)) *
                                                                   std::max(1.0, std::pow(l, 3)));
                    CHECK(r.roots[j].real() <= 1e-10);
                    sum += r.roots[j];
                    prod *= r.roots[j];
                    residues += r.residues_kappa[j];
                    // the conjugate of every root is again a root
                    double nearest = INFINITY;
                    for (const auto& other : r.roots) nearest = std::min(nearest, std::abs(other - std::conj(r.roots[j])));
                    CHECK(nearest < 1e-9 * std::max(1.0, l));
                }
                CHECK(std::abs(sum + l * Om) < 1e-10 * std::max(1.0, l * Om));
                CHECK(std::abs(prod + l * Om * Om * Om) < 1e-9 * std::max(1.0, l * Om * Om * Om));
                CHECK(std::abs(residues) < 1e-12 * std::max(1.0, l));
            }
}

TEST_CASE("fig3 parameters: roots solve the cubic") {
    const auto p = make_params(1.0, 1.0, 0.1, 0.1);
    const auto r = solve_roots(p);
    for (const auto& s : r.roots) CHECK(std::abs(cubic_at(p, s)) < 1e-10);
    CHECK_THROWS_AS(solve_roots(make_params(1.0, 1.0, 0.1, kInfiniteWidth)), std::invalid_argument);
}

TEST_CASE("triple root is flagged and still inverted exactly") {
    // (s + lambda/3)^3 requires lambda = 3 sqrt(3) Omega and gamma = 16 Omega / (3 sqrt 3)
    const double l = 3.0 * std::sqrt(3.0);
    const double g = 16.0 / (3.0 * std::sqrt(3.0));
    const auto p = make_params(1.0, 1.0, g, l);
    const auto r = solve_roots(p);
    CHECK(r.degenerate);
    CHECK(std::abs(r.residues_kappa[0] + r.residues_kappa[1] + r.residues_kappa[2]) < 1e-9);
    for (double t : {0.5, 2.0, 9.0}) CHECK(std::abs(kappa_at(p, t) - oracle_c2(p, empty_battery_state(), t)) < 1e-8);
}

TEST_CASE("kappa: Rabi limit and initial condition") {
    for (double l : {0.1, 1.0, kInfiniteWidth}) {
        const auto p = make_params(1.0, 1.0, 0.0, l);
        CHECK(std::abs(kappa_at(p, std::numbers::pi / 2) - (-I)) < 1e-12);
        for (double t : {0.3, 1.1, 4.0, 20.0}) CHECK(std::abs(kappa_at(p, t) + I * std::sin(t)) < 1e-12);
    }
    for (double g : {0.1, 3.0}) {
        CHECK(std::abs(kappa_at(make_params(1.0, 1.0, g, 0.7), 0.0)) < 1e-15);
        CHECK(std::abs(kappa_at(make_params(1.0, 1.0, g, kInfiniteWidth), 0.0)) < 1e-15);
    }
    CHECK_THROWS_AS(kappa_at(make_params(1.0, 1.0, 0.1, 0.1), -1.0), std::invalid_argument);
}

TEST_CASE("kappa matches the ODE oracle at fig3 parameters") {
    const auto p = make_params(1.0, 1.0, 0.1, 0.1);
    CHECK(std::abs(kappa_at(p, 2.0) - oracle_c2(p, empty_battery_state(), 2.0)) < 1e-8);
}

TEST_CASE("initial slope of kappa is -i Omega") {
    for (double Om : {0.5, 1.0, 3.0}) {
        const auto p = make_params(1.0, Om, 0.7 * Om, 2.0 * Om);
        const Propagator prop(p);
        // d kappa / d tau = Omega * d kappa / d(Omega tau)
        const double h = 1e-6;
        const cplx fd = (prop.kappa(h) - prop.kappa(0.0)) / (h / Om);
        CHECK(std::abs(fd - (-I * Om)) < 1e-6 * Om);
        CHECK(std::abs(prop.kappa_rate(0.0) * Om - (-I * Om)) < 1e-12 * Om);
    }
}

TEST_CASE("memoryless closed form") {
    const auto rabi = make_params(1.0, 1.0, 0.0, kInfiniteWidth);
    for (double t : {0.2, 1.0, 7.5}) CHECK(std::abs(kappa_memoryless_at(rabi, t) + I * std::sin(t)) < 1e-13);

    const auto critical = make_params(1.0, 1.0, 4.0, kInfiniteWidth);
    CHECK(std::abs(kappa_memoryless_at(critical, 1.0) - (-I * std::exp(-1.0))) < 1e-14);
    CHECK(std::abs(kappa_memoryless_at(critical, 1.0)) == doctest::Approx(0.3679).epsilon(1e-4));

    CHECK_THROWS_AS(kappa_memoryless_at(make_params(1.0, 1.0, 0.1, 5.0), 1.0), std::invalid_argument);
}

TEST_CASE("memoryless closed form is continuous across gamma = 4 Omega") {
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
        const cplx mid = kappa_memoryless_at(make_params(1.0, 1.0, 4.0, kInfiniteWidth), t);
        for (double eps : {1e-10, 1e-6}) {
            const cplx below = kappa_memoryless_at(make_params(1.0, 1.0, 4.0 - eps, kInfiniteWidth), t);
            const cplx above = kappa_memoryless_at(make_params(1.0, 1.0, 4.0 + eps, kInfiniteWidth), t);
            CHECK(std::abs(below - mid) < 10 * eps);
            CHECK(std::abs(above - mid) < 10 * eps);
        }
    }
}

TEST_CASE("memoryless closed form agrees with the partial-fraction engine") {
    for (double g : {0.1, 1.0, 3.999, 4.0, 4.001, 9.0}) {
        const auto p = make_params(1.0, 1.0, g, kInfiniteWidth);
        const Propagator prop(p);
        for (double t : {0.0, 0.7, 3.0, 25.0}) CHECK(std::abs(prop.kappa(t) - kappa_memoryless_at(p, t)) < 1e-10);
    }
}

TEST_CASE("memoryless peak at gamma = 0.1 Omega is 0.925") {
    const auto p = make_params(1.0, 1.0, 0.1, kInfiniteWidth);
    double peak = 0.0;
    for (int i = 0; i <= 250000; ++i) peak = std::max(peak, std::norm(kappa_memoryless_at(p, i * 1e-4)));
    CHECK(peak == doctest::Approx(0.925).epsilon(0.005 / 0.925));
}

TEST_CASE("amplitudes for general initial states") {
    SUBCASE("empty battery reproduces kappa") {
        const auto p = make_params(1.0, 1.0, 0.4, 0.3);
        const Propagator prop(p);
        for (double t : {0.0, 1.0, 6.0}) CHECK(std::abs(prop.amplitudes(empty_battery_state(), t).c2 - prop.kappa(t)) < 1e-15);
    }
    SUBCASE("excited battery, closed system") {
        const auto p = make_params(1.0, 1.0, 0.0, 1.0);
        for (double t : {0.3, 2.0, 5.0}) {
            const auto s = amplitudes_at(p, charged_battery_state(), t);
            CHECK(std::abs(s.c2 - std::cos(t)) < 1e-12);
            CHECK(std::abs(s.c1 + I * std::sin(t)) < 1e-12);
        }
    }
    SUBCASE("superposition agrees with the oracle") {
        const auto p = make_params(1.0, 1.0, 0.1, 0.1);
        const double h = 1.0 / std::sqrt(2.0);
        const auto init = make_initial_state({h, 0.0}, {h, 0.0});
        const double times[] = {1.0};
        const auto ref = integrate(p, init, times, 1e-12).back().state;
        const auto got = amplitudes_at(p, init, 1.0);
        CHECK(std::abs(got.c1 - ref.c1) < 1e-8);
        CHECK(std::abs(got.c2 - ref.c2) < 1e-8);
        CHECK(std::abs(got.z - ref.z) < 1e-8);
    }
}

TEST_CASE("differentiated amplitudes satisfy the pseudomode equations") {
    for (double g : {0.1, 2.0, 10.0})
        for (double l : {0.1, 1.0, 20.0}) {
            const auto p = make_params(1.0, 1.0, g, l);
            const Propagator prop(p);
            const auto init = make_initial_state({0.6, 0.0}, {0.0, 0.8});
            const double h = 1e-5;
            for (double t : {0.5, 3.0, 11.0}) {
                const auto s = prop.amplitudes(init, t);
                const auto fwd = prop.amplitudes(init, t + h);
                const auto bwd = prop.amplitudes(init, t - h);
                const cplx dc1 = (fwd.c1 - bwd.c1) / (2 * h);
                const cplx dc2 = (fwd.c2 - bwd.c2) / (2 * h);
                const cplx dz = (fwd.z - bwd.z) / (2 * h);
                CHECK(std::abs(dc1 - (-I * s.c2 - g * l / 2.0 * s.z)) < 1e-6);
                CHECK(std::abs(dc2 - (-I * s.c1)) < 1e-6);
                CHECK(std::abs(dz - (s.c1 - l * s.z)) < 1e-6);
            }
        }
}

TEST_CASE("property: |kappa| <= 1 and dynamics ignore omega0") {
    std::mt19937_64 rng(20261018);
    std::uniform_real_distribution<double> logu(std::log(0.01), std::log(100.0));
    std::uniform_real_distribution<double> time(0.0, 80.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double g = std::exp(logu(rng));
        const double l = trial % 5 == 0 ? kInfiniteWidth : std::exp(logu(rng));
        const auto p = make_params(1.0, 1.0, g, l);
        const auto q = make_params(7.3, 1.0, g, l);
        const Propagator a(p), b(q);
        for (int k = 0; k < 10; ++k) {
            const double t = time(rng);
            CHECK(std::abs(a.kappa(t)) <= 1.0 + 1e-12);
            CHECK(a.kappa(t) == b.kappa(t));
        }
    }
}

TEST_CASE("finite width converges to the memoryless closed form") {
    const auto flat = make_params(1.0, 1.0, 0.1, kInfiniteWidth);
    auto deviation = [&](double lambda) {
        const Propagator prop(make_params(1.0, 1.0, 0.1, lambda));
        double worst = 0.0;
        for (int i = 0; i <= 2500; ++i) {
            const double t = i * 0.01;
            worst = std::max(worst, std::abs(prop.kappa(t) - kappa_memoryless_at(flat, t)));
        }
        return worst;
    };
    const double d3 = deviation(1e3);
    const double d4 = deviation(1e4);
    CHECK(d3 < 2e-2);
    CHECK(d4 < d3);
}

TEST_CASE("trajectory columns") {
    SUBCASE("Rabi population") {
        const auto p = make_params(1.0, 1.0, 0.0, 1.0);
        const auto tr = trajectory(p, empty_battery_state(), std::numbers::pi, 1001);
        REQUIRE(tr.times.size() == 1001);
        CHECK(tr.times.back() == std::numbers::pi);
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            CHECK(std::abs(tr.population[i] - std::pow(std::sin(tr.times[i]), 2)) < 1e-12);
    }
    SUBCASE("energy bookkeeping for the empty battery") {
        const auto p = make_params(2.0, 1.0, 0.5, 0.3);
        const auto tr = trajectory(p, empty_battery_state(), 25.0, 501);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            CHECK(tr.population[i] >= 0.0);
            CHECK(tr.population[i] <= 1.0 + 1e-9);
            CHECK(tr.stored_energy[i] == doctest::Approx(2.0 * tr.population[i]).epsilon(1e-15));
            CHECK(tr.ergotropy[i] <= tr.stored_energy[i] + 1e-15);
        }
    }
    SUBCASE("with-memory peak beats the memoryless 0.925") {
        const auto tr = trajectory(make_params(1.0, 1.0, 0.1, 0.1), empty_battery_state(), 25.0, 2501);
        CHECK(*std::max_element(tr.population.begin(), tr.population.end()) > 0.925);
    }
    CHECK_THROWS_AS(trajectory(make_params(1.0, 1.0, 0.1, 0.1), empty_battery_state(), 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(trajectory(make_params(1.0, 1.0, 0.1, 0.1), empty_battery_state(), 1.0, 1), std::invalid_argument);
}
