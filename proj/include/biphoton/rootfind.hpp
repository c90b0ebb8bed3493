#ifndef BIPHOTON_ROOTFIND_HPP
#define BIPHOTON_ROOTFIND_HPP

#include <cmath>
#include <cstdlib>
#include <utility>

#include "biphoton/errors.hpp"

namespace biphoton {

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Bracketed secant/bisection hybrid. The bracket [lo, hi] must contain a sign
// change. Stops when |f| < f_tol or the bracket collapses below x_tol.
// On hitting max_iter the best iterate is returned with converged = false.
template <class F>
RootResult bracketed_root(F&& f, double lo, double hi, double f_tol,
                          double x_tol = 0.0, int max_iter = 200) {
    double fa = f(lo);
    double fb = f(hi);
    if (std::abs(fa) < f_tol) return {lo, fa, 0, true};
    if (std::abs(fb) < f_tol) return {hi, fb, 0, true};
    if (std::signbit(fa) == std::signbit(fb))
        throw NumericalError("bracketed_root: no sign change in bracket");

    double a = lo, b = hi;
    double best_x = std::abs(fa) < std::abs(fb) ? a : b;
    double best_f = std::abs(fa) < std::abs(fb) ? fa : fb;
    for (int it = 1; it <= max_iter; ++it) {
        // Secant candidate from the bracket endpoints, bisection fallback.
        double mid = 0.5 * (a + b);
        double x = mid;
        const double denom = fb - fa;
        if (denom != 0.0) {
            const double secant = b - fb * (b - a) / denom;
            if (secant > std::min(a, b) && secant < std::max(a, b)) x = secant;
        }
        // Guard against stagnation at an endpoint.
        if (x == a || x == b) x = mid;

        const double fx = f(x);
        if (std::abs(fx) < std::abs(best_f)) {
            best_f = fx;
            best_x = x;
        }
        if (std::abs(fx) < f_tol) return {x, fx, it, true};

        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (std::abs(b - a) <= x_tol) return {best_x, best_f, it, true};
    }
    return {best_x, best_f, max_iter, false};
}

// Scans [lo, hi] at n uniform points and returns the first subinterval with a
// sign change, or false if none exists.
template <class F>
bool scan_for_bracket(F&& f, double lo, double hi, int n, double& bracket_lo,
                      double& bracket_hi) {
    double prev_x = lo;
    double prev_f = f(lo);
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double fx = f(x);
        if (prev_f == 0.0 || std::signbit(prev_f) != std::signbit(fx)) {
            bracket_lo = prev_x;
            bracket_hi = x;
            return true;
        }
        prev_x = x;
        prev_f = fx;
    }
    return false;
}

}  // namespace biphoton

#endif
