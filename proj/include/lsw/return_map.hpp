#pragma once

// Return radius of a particle: the initial rescaled radius z0 >= 1 at t0 whose
// trajectory comes back to the same physical radius at t = s * t0.
//
// With alpha(z) = ln z + tau(z), the return condition reads
// alpha(rho(z0)) = alpha(z0) for the sub-critical partner rho(z0) in (0, 1],
// and the return time ratio is s = (z0 / rho(z0))^gamma.

#include "lsw/errors.hpp"
#include "lsw/numerics.hpp"
#include "lsw/regime.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lsw
{

/// z0 closer than this to z_max is rejected: s diverges there.
inline constexpr double return_map_guard = 1e-9;

struct ReturnPoint {
    double z0;       ///< rescaled radius at t0, in [1, z_max)
    double z_return; ///< rho(z0), rescaled radius at t, in [0, 1]
    double s;        ///< t / t0
};

namespace detail
{

inline void check_return_domain(const Regime& regime, double z0, const char* op)
{
    if (!(z0 >= 1.0) || !(z0 < regime.z_max() - return_map_guard)) {
        throw DomainError(std::string(op) + ": z0 must lie in [1, z_max), got " + std::to_string(z0));
    }
}

} // namespace detail

/// alpha as a function of u = ln z, for u <= 0. Stays finite where exp(u)
/// underflows to zero.
inline double alpha_of_log_z(const Regime& regime, double u)
{
    if (!(u <= 0.0)) {
        throw DomainError("alpha_of_log_z: requires ln z <= 0");
    }
    return u + detail::tau_closed_form(regime, std::exp(u));
}

/// ln rho(z0). Solved in u = ln z so the result keeps full relative precision
/// when rho underflows (z0 close to z_max).
inline double log_rho(const Regime& regime, double z0)
{
    detail::check_return_domain(regime, z0, "rho");
    if (z0 == 1.0) {
        return 0.0;
    }
    const double target = alpha(regime, z0);
    const auto residual = [&](double u) { return u + detail::tau_closed_form(regime, std::exp(u)) - target; };
    // On (0, 1] tau(z) <= tau(0), so u = target - tau(0) - 1 is below the root.
    const double lo = target - detail::tau_closed_form(regime, 0.0) - 1.0;
    // |d alpha / du| <= 1 on (-inf, 0], so the bracket width bounds the alpha mismatch.
    return numerics::find_root(residual, lo, 0.0, {1e-14, 1e-16, 400});
}

/// The sub-critical rescaled radius with the same alpha value as z0.
/// rho(1) = 1 and rho -> 0 as z0 -> z_max.
inline double rho(const Regime& regime, double z0)
{
    return std::exp(log_rho(regime, z0));
}

/// rho'(1) = -1 in both regimes (alpha'(1) = 0, alpha''(1) != 0).
inline constexpr double rho_prime_at_one(const Regime&)
{
    return -1.0;
}

/// ln s(z0) = gamma (ln z0 - ln rho(z0)).
inline double log_return_time_ratio(const Regime& regime, double z0)
{
    return regime.gamma() * (std::log(z0) - log_rho(regime, z0));
}

/// s(z0) = (z0 / rho(z0))^gamma; 1 at z0 = 1, strictly increasing, +inf once
/// the ratio overflows near z_max.
inline double return_time_ratio(const Regime& regime, double z0)
{
    return std::exp(log_return_time_ratio(regime, z0));
}

/// Inverse of return_time_ratio: the z0 in [1, z_max) returning at s.
inline double return_z0(const Regime& regime, double s)
{
    if (!(s >= 1.0) || std::isinf(s)) {
        throw DomainError("return_z0: s must be finite and >= 1, got " + std::to_string(s));
    }
    if (s == 1.0) {
        return 1.0;
    }
    const double log_s = std::log(s);
    const double hi = regime.z_max() - 2.0 * return_map_guard;
    const auto residual = [&](double z0) { return log_return_time_ratio(regime, z0) - log_s; };
    return numerics::find_root(residual, 1.0, hi, {1e-15, 1e-14, 200});
}

inline ReturnPoint make_return_point(const Regime& regime, double z0)
{
    const double lr = log_rho(regime, z0);
    return {z0, std::exp(lr), std::exp(regime.gamma() * (std::log(z0) - lr))};
}

inline ReturnPoint return_point_at(const Regime& regime, double s)
{
    ReturnPoint p = make_return_point(regime, return_z0(regime, s));
    p.s = s;
    return p;
}

/// Physical return radius r(t, t0) = z0(t/t0) * R_c(t0). The rescaling uses
/// the power-law ratio, i.e. the late-stage limit t0 >> R_c0^gamma.
inline double return_radius(const Regime& regime, double t, double t0, double critical0)
{
    if (!(t0 > 0.0) || !(t >= t0)) {
        throw DomainError("return_radius: requires t >= t0 > 0");
    }
    return return_z0(regime, t / t0) * critical_radius(regime, critical0, t0);
}

/// dr/dt at t = t0: R_c(t0) / (2 gamma t0).
inline double return_radius_rate(const Regime& regime, double t0, double critical0)
{
    if (!(t0 > 0.0)) {
        throw DomainError("return_radius_rate: requires t0 > 0");
    }
    return critical_radius(regime, critical0, t0) / (2.0 * regime.gamma() * t0);
}

} // namespace lsw
