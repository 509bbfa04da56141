#pragma once

// Kinetic regimes of late-stage LSW coarsening and the single-particle growth
// laws in physical (R, t) and rescaled (z = R/R_c, tau = ln R_c(t)/R_c(0))
// coordinates.

#include "lsw/errors.hpp"
#include "lsw/numerics.hpp"

#include <cmath>
#include <string>
#include <string_view>

namespace lsw
{

enum class RegimeKind { DiffusionLimited, AttachmentLimited };

/// Parameter bundle of one kinetic limit. Only the two physical tuples
/// (lambda, nu, gamma, z_max) = (2, 27/4, 3, 3/2) and (1, 4, 2, 2) exist.
class Regime
{
public:
    static constexpr Regime diffusion_limited() { return Regime(RegimeKind::DiffusionLimited); }
    static constexpr Regime attachment_limited() { return Regime(RegimeKind::AttachmentLimited); }

    static constexpr Regime of(RegimeKind kind) { return Regime(kind); }

    /// Accepts "dl" / "al" (case-sensitive).
    static Regime parse(std::string_view name)
    {
        if (name == "dl") {
            return diffusion_limited();
        }
        if (name == "al") {
            return attachment_limited();
        }
        throw DomainError("unknown regime '" + std::string(name) + "' (expected dl or al)");
    }

    constexpr RegimeKind kind() const { return kind_; }
    constexpr bool is_diffusion_limited() const { return kind_ == RegimeKind::DiffusionLimited; }

    /// Exponent of z in the rescaled growth law.
    constexpr int lambda() const { return is_diffusion_limited() ? 2 : 1; }
    /// Late-stage constant 1/(R_c^2 dR_c/dt) (DL) or 1/(R_c dR_c/dt) (AL).
    constexpr double nu() const { return is_diffusion_limited() ? 27.0 / 4.0 : 4.0; }
    /// Coarsening exponent: R_c^gamma grows linearly in time.
    constexpr int gamma() const { return is_diffusion_limited() ? 3 : 2; }
    /// Upper cutoff of the scaled size distribution.
    constexpr double z_max() const { return is_diffusion_limited() ? 1.5 : 2.0; }
    /// d(R_c^gamma)/dt = gamma / nu, i.e. 4/9 (DL) and 1/2 (AL).
    constexpr double coarsening_rate() const { return gamma() / nu(); }

    std::string name() const { return is_diffusion_limited() ? "dl" : "al"; }

    friend constexpr bool operator==(Regime, Regime) = default;

private:
    constexpr explicit Regime(RegimeKind kind)
        : kind_(kind)
    {
    }

    RegimeKind kind_;
};

/// Half-width of the excluded band below z_max where the closed-form
/// antiderivatives are singular.
inline constexpr double cutoff_guard = 1e-12;

/// A point on a rescaled trajectory.
struct ScaledState {
    double z;
    double tau;
};

/// dz/dtau = nu (z - 1) / z^lambda - z, evaluated in factored form
/// (-(2z-3)^2 (z+3) / (4z^2) for DL, -(z-2)^2 / z for AL) so that it is
/// exact at the stationary point z_max.
inline double growth_rate_scaled(const Regime& regime, double z)
{
    if (!(z > 0.0)) {
        throw DomainError("growth_rate_scaled: z must be > 0, got " + std::to_string(z));
    }
    if (regime.is_diffusion_limited()) {
        const double d = 2.0 * z - 3.0;
        return -d * d * (z + 3.0) / (4.0 * z * z);
    }
    const double d = z - 2.0;
    return -d * d / z;
}

/// dR/dt for a particle of radius R in a mean field with critical radius R_c.
inline double growth_rate_physical(const Regime& regime, double radius, double critical)
{
    if (!(radius > 0.0) || !(critical > 0.0)) {
        throw DomainError("growth_rate_physical: radii must be > 0");
    }
    const double drive = radius / critical - 1.0;
    return regime.is_diffusion_limited() ? drive / (radius * radius) : drive / radius;
}

/// Late-stage critical radius (R_c0^gamma + (gamma/nu) t)^(1/gamma).
/// R_c0 = 0 gives the pure power law.
inline double critical_radius(const Regime& regime, double critical0, double t)
{
    if (!(critical0 >= 0.0) || !(t >= 0.0)) {
        throw DomainError("critical_radius: requires R_c0 >= 0 and t >= 0");
    }
    if (regime.is_diffusion_limited()) {
        return std::cbrt(critical0 * critical0 * critical0 + regime.coarsening_rate() * t);
    }
    return std::sqrt(critical0 * critical0 + regime.coarsening_rate() * t);
}

/// Time on the pure power-law clock, t + R_c0^gamma / (gamma/nu), on which
/// R_c(t)^gamma is proportional to t. Ratios of clock values are the exact
/// late-stage time ratios for an ensemble started on the scaling solution.
inline double late_stage_clock(const Regime& regime, double critical0, double t)
{
    if (!(critical0 >= 0.0)) {
        throw DomainError("late_stage_clock: requires R_c0 >= 0");
    }
    return t + std::pow(critical0, regime.gamma()) / regime.coarsening_rate();
}

namespace detail
{

// Closed-form antiderivative without domain checks; finite on [0, z_max).
inline double tau_closed_form(const Regime& regime, double z)
{
    if (regime.is_diffusion_limited()) {
        return 1.0 / (2.0 * z - 3.0) - (5.0 / 9.0) * std::log(3.0 - 2.0 * z) - (4.0 / 9.0) * std::log(z + 3.0);
    }
    return 2.0 / (z - 2.0) - std::log(2.0 - z);
}

inline void check_open_support(const Regime& regime, double z, const char* op)
{
    if (!(z > 0.0) || !(z < regime.z_max() - cutoff_guard)) {
        throw DomainError(std::string(op) + ": z must lie in (0, z_max), got " + std::to_string(z));
    }
}

} // namespace detail

/// Antiderivative of 1 / (dz/dtau) with zero integration constant:
///   DL: 1/(2z-3) - (5/9) ln(3-2z) - (4/9) ln(z+3)
///   AL: 2/(z-2) - ln(2-z)
/// Only differences of tau are physically meaningful.
inline double tau_of_z(const Regime& regime, double z)
{
    detail::check_open_support(regime, z, "tau_of_z");
    return detail::tau_closed_form(regime, z);
}

/// alpha(z) = ln z + tau(z). Unimodal with maximum at z = 1 and -> -inf at
/// both ends of (0, z_max).
inline double alpha(const Regime& regime, double z)
{
    detail::check_open_support(regime, z, "alpha");
    return std::log(z) + detail::tau_closed_form(regime, z);
}

/// Rescaled radius after the flow has run for `delta_tau` starting from
/// `z_start`. The rescaled flow reaches z = 0 (particle dissolved) after
/// tau(0) - tau(z_start); larger `delta_tau` return 0.
inline double z_of_tau(const Regime& regime, double z_start, double delta_tau)
{
    detail::check_open_support(regime, z_start, "z_of_tau");
    if (!(delta_tau >= 0.0)) {
        throw DomainError("z_of_tau: delta_tau must be >= 0");
    }
    if (delta_tau == 0.0) {
        return z_start;
    }
    const double target = detail::tau_closed_form(regime, z_start) + delta_tau;
    const auto residual = [&](double z) { return detail::tau_closed_form(regime, z) - target; };
    if (residual(0.0) <= 0.0) {
        return 0.0;
    }
    return numerics::find_root(residual, 0.0, z_start, {1e-16, 1e-14, 200});
}

} // namespace lsw
