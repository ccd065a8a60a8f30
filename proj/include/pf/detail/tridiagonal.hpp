#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pf/errors.hpp"

namespace pf::detail {

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, off)
/// that are strictly below lambda, via the Sturm sequence of the LDL^T
/// pivots. off[i] couples rows i and i+1.
inline std::size_t sturm_count(const std::vector<double>& diag,
                               const std::vector<double>& off, double lambda) {
    const std::size_t n = diag.size();
    const double tiny = std::numeric_limits<double>::min();
    std::size_t count = 0;
    double q = diag[0] - lambda;
    if (q < 0.0)
        ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (q == 0.0)
            q = tiny;
        q = diag[i] - lambda - off[i - 1] * off[i - 1] / q;
        if (q < 0.0)
            ++count;
    }
    return count;
}

/// k-th smallest eigenvalue (k is 0-based) by bisection on the Sturm count.
inline double tridiag_eigenvalue(const std::vector<double>& diag,
                                 const std::vector<double>& off, std::size_t k) {
    // Gershgorin bounds.
    double lo = diag[0], hi = diag[0];
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        if (sturm_count(diag, off, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// LU factorization of a general tridiagonal matrix with partial pivoting
/// (gttrf-style; pivoting fills a second superdiagonal), plus the solve.
struct TridiagLU {
    std::vector<double> dl, d, du, du2;
    std::vector<bool> swapped;

    TridiagLU(const std::vector<double>& diag, const std::vector<double>& off,
              double shift) {
        const std::size_t n = diag.size();
        d.resize(n);
        dl.assign(n > 0 ? n - 1 : 0, 0.0);
        du.assign(n > 0 ? n - 1 : 0, 0.0);
        du2.assign(n > 1 ? n - 2 : 0, 0.0);
        swapped.assign(n > 0 ? n - 1 : 0, false);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = diag[i] - shift;
        for (std::size_t i = 0; i + 1 < n; ++i)
            dl[i] = du[i] = off[i];

        const double tiny = 1e-300;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0)
                    d[i] = tiny;
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                du[i] = temp;
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if (d[n - 1] == 0.0)
            d[n - 1] = tiny;
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n >= 2)
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        if (n >= 3)
            for (std::size_t ii = n - 2; ii-- > 0;)
                b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
};

/// Eigenvector for a converged eigenvalue by inverse iteration with a
/// deterministic start vector; a few passes suffice for the well-separated
/// spectra handled here.
inline std::vector<double> tridiag_eigenvector(const std::vector<double>& diag,
                                               const std::vector<double>& off,
                                               double lambda) {
    const std::size_t n = diag.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(diag[i]) + (i + 1 < n ? std::abs(off[i]) : 0.0));
    const TridiagLU lu(diag, off, lambda + 1e-13 * scale);

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
    for (int pass = 0; pass < 3; ++pass) {
        lu.solve(x);
        double norm = 0.0;
        for (double v : x)
            norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericalFailure("inverse iteration produced a degenerate vector");
        for (double& v : x)
            v /= norm;
    }
    return x;
}

} // namespace pf::detail
