// golden.hpp — Golden-section search for the maximum of a unimodal function

#pragma once

#include <cmath>
#include <utility>

namespace qbat {

/// Returns (argmax, max) of `f` on [a, b], shrinking the bracket below `tol`.
template <class F>
std::pair<double, double> golden_section_maximize(F&& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace qbat
