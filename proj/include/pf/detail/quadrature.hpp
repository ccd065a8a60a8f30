#pragma once

#include <cmath>
#include <cstddef>

#include "pf/errors.hpp"

namespace pf::detail {

// Adaptive Simpson with the classic |S2-S1|/15 error estimate.
// Tolerance is absolute; depth is capped so a pathological integrand
// fails loudly instead of recursing forever.

inline double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

template <class F>
double adapt_simpson_step(const F& f, double a, double m, double b,
                          double fa, double fm, double fb, double whole,
                          double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol)
        return left + right + err;
    if (depth <= 0)
        throw NumericalFailure("adaptive quadrature did not converge within the refinement limit");
    return adapt_simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt_simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Integral of f over [a, b] (a <= b) to absolute tolerance tol.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double tol, int max_depth = 48) {
    if (a == b)
        return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(b - a, fa, fm, fb);
    return adapt_simpson_step(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace pf::detail
