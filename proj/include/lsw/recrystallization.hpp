#pragma once

// Volume fraction of the solid phase at t that precipitated after t0:
//
//   phi(s) = (1 / m3) * integral_{rho(z0)}^{z0} x^3 h(x) dx,   s = t / t0,
//
// where z0 = return_z0(s) and m3 is the third moment of h.

#include "lsw/distribution.hpp"
#include "lsw/errors.hpp"
#include "lsw/regime.hpp"
#include "lsw/return_map.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace lsw
{

struct PhiSample {
    double s;
    double phi;
};

/// phi sampled over an ordered grid of time ratios.
struct PhiCurve {
    Regime regime;
    std::vector<PhiSample> samples;
};

/// phi via the direct window integral over [rho(z0), z0].
inline double phi_direct_from_z0(const SizeDistribution& dist, double z0)
{
    const double lo = rho(dist.regime(), z0);
    return dist.partial_moment(3, lo, z0) / dist.third_moment();
}

/// phi via one minus the two tails [0, rho(z0)] and [z0, z_max]; accurate
/// when phi is close to one.
inline double phi_complement_from_z0(const SizeDistribution& dist, double z0)
{
    const double lo = rho(dist.regime(), z0);
    const double tails = dist.partial_moment(3, 0.0, lo) + dist.partial_moment(3, z0, dist.regime().z_max());
    return 1.0 - tails / dist.third_moment();
}

/// phi for a given return point z0 in [1, z_max). Uses the direct window
/// while phi <= 1/2 and the complement form beyond.
inline double phi_from_z0(const SizeDistribution& dist, double z0)
{
    const double direct = phi_direct_from_z0(dist, z0);
    if (direct <= 0.5) {
        return direct;
    }
    return phi_complement_from_z0(dist, z0);
}

inline double phi(const SizeDistribution& dist, double s)
{
    if (!(s >= 1.0)) {
        throw DomainError("phi: s must be >= 1, got " + std::to_string(s));
    }
    if (s == 1.0) {
        return 0.0;
    }
    return phi_from_z0(dist, return_z0(dist.regime(), s));
}

inline double phi(const Regime& regime, double s)
{
    return phi(standard_distribution(regime), s);
}

/// Evaluates phi on a sorted grid of time ratios >= 1.
inline PhiCurve phi_curve(const Regime& regime, const std::vector<double>& s_grid)
{
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] >= 1.0) || std::isinf(s_grid[i])) {
            throw DomainError("phi_curve: grid values must be finite and >= 1");
        }
        if (i > 0 && !(s_grid[i] >= s_grid[i - 1])) {
            throw DomainError("phi_curve: grid must be sorted");
        }
    }
    const SizeDistribution& dist = standard_distribution(regime);
    PhiCurve curve{regime, {}};
    curve.samples.reserve(s_grid.size());
    for (double s : s_grid) {
        curve.samples.push_back({s, phi(dist, s)});
    }
    return curve;
}

/// Logarithmic grid on [lo, hi] with `count` points (endpoints exact).
inline std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
        throw DomainError("log_grid: requires 0 < lo <= hi and count >= 1");
    }
    std::vector<double> grid(count, lo);
    if (count == 1) {
        return grid;
    }
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 1; i + 1 < count; ++i) {
        grid[i] = lo * std::exp(step * static_cast<double>(i));
    }
    grid.back() = hi;
    return grid;
}

/// 200 logarithmically spaced ratios from 1 to 1000.
inline std::vector<double> default_s_grid()
{
    return log_grid(1.0, 1000.0, 200);
}

/// d phi / dt at t = t0 in units of 1/t0: h(1) / (gamma m3).
inline double phi_initial_rate(const SizeDistribution& dist)
{
    return h(dist.regime(), 1.0) / (dist.regime().gamma() * dist.third_moment());
}

inline double phi_initial_rate(const Regime& regime)
{
    return phi_initial_rate(standard_distribution(regime));
}

} // namespace lsw
