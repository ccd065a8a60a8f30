#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pf/errors.hpp"

namespace pf::detail {

/// Natural cubic spline through (xs, ys) with zero second derivative at both
/// ends. Knots need not be equidistant. Provides value, first and second
/// derivative; no extrapolation.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        const std::size_t n = xs_.size();
        if (n < 4 || ys_.size() != n)
            throw InvalidArgument("CubicSpline: need at least 4 samples with matching lengths");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(xs_[i] < xs_[i + 1]))
                throw InvalidArgument("CubicSpline: sample abscissae must be strictly increasing");
        for (double y : ys_)
            if (!std::isfinite(y))
                throw InvalidArgument("CubicSpline: sample values must be finite");

        // Second derivatives m_i at the knots: tridiagonal system from the
        // C2 continuity conditions, natural ends m_0 = m_{n-1} = 0.
        m_.assign(n, 0.0);
        std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = xs_[i] - xs_[i - 1];
            const double hr = xs_[i + 1] - xs_[i];
            sub[i] = hl / 6.0;
            diag[i] = (hl + hr) / 3.0;
            sup[i] = hr / 6.0;
            rhs[i] = (ys_[i + 1] - ys_[i]) / hr - (ys_[i] - ys_[i - 1]) / hl;
        }
        // Thomas sweep over the interior unknowns.
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            const double upper = (i + 2 < n) ? sup[i] * m_[i + 1] : 0.0;
            m_[i] = (rhs[i] - upper) / diag[i];
            if (i == 1)
                break;
        }
    }

    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }

    double value(double x) const {
        const auto [i, t, h] = locate(x);
        const double a = (xs_[i + 1] - x) / h;
        const double b = t;
        return a * ys_[i] + b * ys_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
    }

    double derivative(double x) const {
        const auto [i, t, h] = locate(x);
        const double a = (xs_[i + 1] - x) / h;
        const double b = t;
        return (ys_[i + 1] - ys_[i]) / h +
               ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
    }

    double second_derivative(double x) const {
        const auto [i, t, h] = locate(x);
        const double a = (xs_[i + 1] - x) / h;
        const double b = t;
        return a * m_[i] + b * m_[i + 1];
    }

private:
    struct Segment {
        std::size_t i;
        double t;
        double h;
    };

    Segment locate(double x) const {
        if (!(x >= xs_.front() && x <= xs_.back()))
            throw DomainError("CubicSpline: evaluation outside the sampled range");
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
        if (i + 1 >= xs_.size())
            i = xs_.size() - 2;
        const double h = xs_[i + 1] - xs_[i];
        return {i, (x - xs_[i]) / h, h};
    }

    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> m_;
};

} // namespace pf::detail
