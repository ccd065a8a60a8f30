#pragma once

#include <numbers>
#include <optional>

#include "pf/errors.hpp"

namespace pf {

enum class UnitSystem { Natural, SI };

/// Physical constants shared by every module.
///
/// Natural mode fixes c = hbar = 1 (all solvers run in these units);
/// SI mode carries the CODATA values and exists for the CLI boundary.
/// Records are immutable after construction; build them with make_constants.
class Constants {
public:
    double c() const noexcept { return c_; }
    double hbar() const noexcept { return hbar_; }
    /// h = 2*pi*hbar, always.
    double h() const noexcept { return h_; }
    UnitSystem system() const noexcept { return system_; }

    static Constants natural() {
        return Constants(UnitSystem::Natural, 1.0, 1.0);
    }

private:
    friend Constants make_constants(UnitSystem, std::optional<double>, std::optional<double>);

    Constants(UnitSystem system, double c, double hbar)
        : system_(system), c_(c), hbar_(hbar), h_(2.0 * std::numbers::pi * hbar) {}

    UnitSystem system_;
    double c_;
    double hbar_;
    double h_;
};

namespace si {
/// Speed of light in vacuum, m/s (exact).
inline constexpr double c = 2.99792458e8;
/// Reduced Planck constant, J s (CODATA).
inline constexpr double hbar = 1.054571817e-34;
} // namespace si

/// Dimensionless proportionality factor between the squared PF speed and
/// the combined particle+field speeds. Equal to one for most problems.
class PFCoupling {
public:
    PFCoupling() : g_(1.0) {}
    explicit PFCoupling(double g) : g_(g) {
        if (!(g > 0.0))
            throw InvalidArgument("PFCoupling: g_pf must be positive");
    }
    double value() const noexcept { return g_; }

private:
    double g_;
};

/// Build a consistent Constants record. Natural mode ignores overrides of
/// c and hbar; any supplied override must be positive.
inline Constants make_constants(UnitSystem system,
                                std::optional<double> c_override = std::nullopt,
                                std::optional<double> hbar_override = std::nullopt) {
    if (c_override && !(*c_override > 0.0))
        throw InvalidArgument("make_constants: c override must be positive");
    if (hbar_override && !(*hbar_override > 0.0))
        throw InvalidArgument("make_constants: hbar override must be positive");

    if (system == UnitSystem::Natural)
        return Constants(UnitSystem::Natural, 1.0, 1.0);

    return Constants(UnitSystem::SI,
                     c_override.value_or(si::c),
                     hbar_override.value_or(si::hbar));
}

} // namespace pf
