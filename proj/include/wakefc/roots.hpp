#pragma once

#include <cmath>

namespace wakefc::detail {

// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs (or one
// of them is zero). Returns the midpoint of the final bracket once it is
// narrower than abs_tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double abs_tol = 1e-10, int max_iter = 200)
{
    double f_lo = f(lo);
    if (f_lo == 0.0) {
        return lo;
    }
    for (int it = 0; it < max_iter && (hi - lo) > abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section maximisation of a unimodal function on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double abs_tol = 1e-10)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while ((b - a) > abs_tol) {
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
    return 0.5 * (a + b);
}

} // namespace wakefc::detail
