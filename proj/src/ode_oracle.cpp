#include "qbat/ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbat {
namespace {

constexpr cplx I{0.0, 1.0};

template <int N>
using Vec = Eigen::Matrix<cplx, N, 1>;
template <int N>
using Mat = Eigen::Matrix<cplx, N, N>;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <int N>
class LinearDopri {
public:
    // local error per step is held below tol * h / span, so the errors summed
    // over the whole window stay below tol
    LinearDopri(const Mat<N>& m, double tol, double span) : m_(m), tol_(tol), span_(std::max(span, 1e-300)) {}

    // advances y from t to t_end exactly
    void advance(Vec<N>& y, double& t, double t_end) {
        while (t < t_end) {
            double h = std::min(h_, t_end - t);
            const bool clamped = h < h_;
            const Vec<N> k1 = m_ * y;
            const Vec<N> k2 = m_ * (y + h * a21 * k1);
            const Vec<N> k3 = m_ * (y + h * (a31 * k1 + a32 * k2));
            const Vec<N> k4 = m_ * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Vec<N> k5 = m_ * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Vec<N> k6 = m_ * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Vec<N> next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Vec<N> k7 = m_ * next;
            const Vec<N> err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double norm = 0.0;
            for (int i = 0; i < N; ++i) {
                const double scale =
                    tol_ * std::min(1.0, h / span_) * (1.0 + std::max(std::abs(y[i]), std::abs(next[i])));
                norm = std::max(norm, std::abs(err[i]) / scale);
            }
            const double factor =
                norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.25), 0.2, 5.0);
            if (norm <= 1.0) {
                y = next;
                t = clamped ? t_end : t + h;
                // a clamped step says nothing about the natural step size
                if (!clamped) h_ = h * factor;
            } else {
                h_ = h * factor;
            }
            if (h_ < 1e-14 * std::max(1.0, t)) throw std::runtime_error("integrator step size underflow");
        }
    }

    void set_initial_step(double h) { h_ = h; }

private:
    Mat<N> m_;
    double tol_;
    double span_;
    double h_{1e-3};
};

void check_request(std::span<const double> times, double tol) {
    if (!(tol >= 1e-12 && tol <= 1e-6)) throw std::invalid_argument("tolerance must lie in [1e-12, 1e-6]");
    double last = 0.0;
    for (double t : times) {
        if (!(t >= last) || !std::isfinite(t))
            throw std::invalid_argument("output times must be finite, non-negative and non-decreasing");
        last = t;
    }
}

std::vector<double> uniform(double tmax, std::size_t samples) {
    if (!(tmax > 0.0) || samples < 2) throw std::invalid_argument("need tmax > 0 and at least two samples");
    std::vector<double> times(samples);
    for (std::size_t i = 0; i < samples; ++i)
        times[i] = i + 1 == samples ? tmax : tmax * static_cast<double>(i) / static_cast<double>(samples - 1);
    return times;
}

template <int N>
OracleSeries run(const Mat<N>& m, const Vec<N>& y0, std::span<const double> times, double Om, double tol) {
    const double span = times.empty() ? 0.0 : times.back() / Om;
    LinearDopri<N> stepper(m, tol, span);
    stepper.set_initial_step(0.01 / std::max(1.0, m.cwiseAbs().rowwise().sum().maxCoeff()));
    Vec<N> y = y0;
    double t = 0.0;
    OracleSeries out;
    out.reserve(times.size());
    for (double omega_tau : times) {
        stepper.advance(y, t, omega_tau / Om);
        AmplitudeState s;
        s.c1 = y[0];
        s.c2 = y[1];
        if constexpr (N == 3) s.z = y[2];
        out.push_back({omega_tau, s});
    }
    return out;
}

}  // namespace

Eigen::Matrix3cd system_matrix(const ModelParams& params) {
    if (params.memoryless()) throw std::invalid_argument("pseudomode system needs finite spectral width");
    const double Om = params.qb_cavity_coupling();
    const double g = params.cavity_env_coupling();
    const double l = params.spectral_width();
    Eigen::Matrix3cd m;
    m << 0.0, -I * Om, -g * l / 2.0,
         -I * Om, 0.0, 0.0,
         1.0, 0.0, -l;
    return m;
}

OracleSeries integrate(const ModelParams& params, const InitialState& init,
                       std::span<const double> times, double tol) {
    if (params.memoryless())
        throw std::invalid_argument("infinite spectral width: use integrate_memoryless");
    check_request(times, tol);
    const Vec<3> y0(init.c1_0, init.c2_0, cplx{});
    return run<3>(system_matrix(params), y0, times, params.qb_cavity_coupling(), tol);
}

OracleSeries integrate(const ModelParams& params, const InitialState& init, double tmax,
                       double tol, std::size_t samples) {
    const auto times = uniform(tmax, samples);
    return integrate(params, init, times, tol);
}

OracleSeries integrate_memoryless(const ModelParams& params, const InitialState& init,
                                  std::span<const double> times, double tol) {
    if (!params.memoryless()) throw std::invalid_argument("finite spectral width: use integrate");
    check_request(times, tol);
    const double Om = params.qb_cavity_coupling();
    const double g = params.cavity_env_coupling();
    Mat<2> m;
    m << -g / 2.0, -I * Om,
         -I * Om, 0.0;
    const Vec<2> y0(init.c1_0, init.c2_0);
    return run<2>(m, y0, times, Om, tol);
}

OracleSeries integrate_memoryless(const ModelParams& params, const InitialState& init,
                                  double tmax, double tol, std::size_t samples) {
    const auto times = uniform(tmax, samples);
    return integrate_memoryless(params, init, times, tol);
}

}  // namespace qbat
