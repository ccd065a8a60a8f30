#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pf/detail/spline.hpp"
#include "pf/errors.hpp"

namespace pf {

namespace detail {

/// sin(pi*u) with exact zeros at integer u and exact +-1 at half-integers.
/// The argument is reduced to [-1/2, 1/2] before calling std::sin, so field
/// profiles vanish identically at their nodes instead of at ~1e-16.
inline double sin_pi(double u) {
    double r = std::remainder(u, 2.0); // r in [-1, 1]
    if (r > 0.5)
        r = 1.0 - r;
    else if (r < -0.5)
        r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

inline double cos_pi(double u) { return sin_pi(0.5 - u); }

} // namespace detail

/// The stationary field chi(x): an analytic preset or a sampled grid, with
/// value, slope and curvature. Evaluation outside the domain is an error,
/// never an extrapolation. Profiles are immutable; evaluation is pure.
class FieldProfile {
public:
    enum class Kind { Zero, Linear, Sine, BoxEigenfield, Sampled };

    static FieldProfile zero(double x_lo, double x_hi) {
        FieldProfile p(Kind::Zero, x_lo, x_hi);
        return p;
    }

    static FieldProfile linear(double slope, double x_lo, double x_hi) {
        FieldProfile p(Kind::Linear, x_lo, x_hi);
        p.slope_ = slope;
        return p;
    }

    /// chi(x) = amplitude * sin(wavenumber * x)
    static FieldProfile sine(double amplitude, double wavenumber, double x_lo, double x_hi) {
        FieldProfile p(Kind::Sine, x_lo, x_hi);
        p.amplitude_ = amplitude;
        p.wavenumber_ = wavenumber;
        return p;
    }

    /// chi_n(x) = amplitude * sin(n pi x / a) on [0, a]; exactly zero at both walls.
    static FieldProfile box_eigenfield(int n, double a, double amplitude = 1.0) {
        if (n < 1)
            throw InvalidArgument("box_eigenfield: n must be a positive integer");
        if (!(a > 0.0))
            throw InvalidArgument("box_eigenfield: box width must be positive");
        FieldProfile p(Kind::BoxEigenfield, 0.0, a);
        p.mode_ = n;
        p.amplitude_ = amplitude;
        return p;
    }

    /// Sampled chi values, interpolated by a natural cubic spline.
    static FieldProfile sampled(std::vector<double> xs, std::vector<double> ys) {
        if (xs.size() < 4)
            throw InvalidArgument("sampled profile: need at least 4 points");
        FieldProfile p(Kind::Sampled, xs.front(), xs.back());
        p.spline_ = detail::CubicSpline(std::move(xs), std::move(ys));
        return p;
    }

    /// Two-column CSV (x, chi), header optional, x strictly increasing.
    static FieldProfile from_csv(std::istream& in) {
        std::vector<double> xs, ys;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double x, y;
            if (!(row >> x >> y)) {
                if (first) { // tolerate one header line
                    first = false;
                    continue;
                }
                throw InvalidArgument("field CSV: malformed row: " + line);
            }
            first = false;
            xs.push_back(x);
            ys.push_back(y);
        }
        if (xs.size() < 4)
            throw InvalidArgument("field CSV: need at least 4 data rows");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!(xs[i] < xs[i + 1]))
                throw InvalidArgument("field CSV: x column must be strictly increasing");
        return sampled(std::move(xs), std::move(ys));
    }

    Kind kind() const noexcept { return kind_; }
    double x_lo() const noexcept { return x_lo_; }
    double x_hi() const noexcept { return x_hi_; }
    bool contains(double x) const noexcept { return x >= x_lo_ && x <= x_hi_; }

    /// chi(x), chi'(x) or chi''(x) for order 0, 1, 2.
    double evaluate(double x, int order) const {
        if (order < 0 || order > 2)
            throw InvalidArgument("FieldProfile::evaluate: only orders 0, 1, 2 are supported");
        if (!contains(x))
            throw DomainError("FieldProfile::evaluate: x outside the profile domain");
        switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Linear:
            return order == 0 ? slope_ * x : (order == 1 ? slope_ : 0.0);
        case Kind::Sine: {
            const double kx = wavenumber_ * x;
            if (order == 0)
                return amplitude_ * std::sin(kx);
            if (order == 1)
                return amplitude_ * wavenumber_ * std::cos(kx);
            return -amplitude_ * wavenumber_ * wavenumber_ * std::sin(kx);
        }
        case Kind::BoxEigenfield: {
            const double u = static_cast<double>(mode_) * (x / x_hi_);
            const double k = static_cast<double>(mode_) * std::numbers::pi / x_hi_;
            if (order == 0)
                return amplitude_ * detail::sin_pi(u);
            if (order == 1)
                return amplitude_ * k * detail::cos_pi(u);
            return -amplitude_ * k * k * detail::sin_pi(u);
        }
        case Kind::Sampled:
            if (order == 0)
                return spline_.value(x);
            if (order == 1)
                return spline_.derivative(x);
            return spline_.second_derivative(x);
        }
        throw Error("FieldProfile::evaluate: unreachable");
    }

    double value(double x) const { return evaluate(x, 0); }
    double slope(double x) const { return evaluate(x, 1); }
    double curvature(double x) const { return evaluate(x, 2); }

    /// d|chi'|/dx almost everywhere: sign(chi') * chi'', and exactly 0 where
    /// chi' = 0 (the kink set has measure zero and cannot affect quadratures).
    double abs_slope_derivative(double x) const {
        const double s = slope(x);
        if (s == 0.0)
            return 0.0;
        return (s > 0.0 ? 1.0 : -1.0) * curvature(x);
    }

private:
    FieldProfile(Kind kind, double x_lo, double x_hi)
        : kind_(kind), x_lo_(x_lo), x_hi_(x_hi) {
        if (!(x_lo < x_hi))
            throw InvalidArgument("FieldProfile: domain must satisfy x_lo < x_hi");
    }

    Kind kind_;
    double x_lo_;
    double x_hi_;
    double slope_ = 0.0;      // Linear
    double amplitude_ = 0.0;  // Sine, BoxEigenfield
    double wavenumber_ = 0.0; // Sine
    int mode_ = 0;            // BoxEigenfield
    detail::CubicSpline spline_;
};

/// Convenience alias matching the operation vocabulary.
inline FieldProfile box_eigenfield(int n, double a, double amplitude = 1.0) {
    return FieldProfile::box_eigenfield(n, a, amplitude);
}

} // namespace pf
