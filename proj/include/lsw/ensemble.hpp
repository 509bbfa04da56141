#pragma once

// Direct N-particle mean-field simulation of the physical growth laws
//
//   DL: dR/dt = (1/R^2) (R u - 1),  u = n / sum R
//   AL: dR/dt = (1/R)   (R u - 1),  u = sum R / sum R^2
//
// with u the self-consistent mean field (R_c = 1/u). The state is advanced
// in the particle volumes v = R^3, for which dv/dt = 3 (u R - 1) (DL) and
// 3 R (u R - 1) (AL) stay bounded as R -> 0 and sum dv/dt = 0 holds exactly
// at every Runge-Kutta stage.

#include "lsw/distribution.hpp"
#include "lsw/errors.hpp"
#include "lsw/regime.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace lsw
{

inline constexpr double sphere_factor = 4.0 * std::numbers::pi / 3.0;

struct MeanField {
    double u_bar;
    double critical_radius;
};

/// Mean field of a set of radii (all > 0).
inline MeanField mean_field(const Regime& regime, const std::vector<double>& radii)
{
    if (radii.empty()) {
        throw StateError("mean_field: empty ensemble");
    }
    double sum_r = 0.0;
    double sum_r2 = 0.0;
    for (double r : radii) {
        sum_r += r;
        sum_r2 += r * r;
    }
    const double u = regime.is_diffusion_limited() ? static_cast<double>(radii.size()) / sum_r : sum_r / sum_r2;
    return {u, 1.0 / u};
}

/// Radii by particle id at one instant.
struct Snapshot {
    double t = 0.0;
    std::map<std::size_t, double> radii;
};

struct SeriesPoint {
    double t;
    std::size_t n;
    double rc_estimate;
    double total_r3;
    double lost_volume;
};

struct EnsembleOptions {
    /// Bound on |dR|/R per step for particles with R >= bulk_fraction * R_c.
    double step_cap = 1e-3;
    double bulk_fraction = 0.5;
    /// Particles are removed once R < epsilon_factor * R_c.
    double epsilon_factor = 1e-4;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    std::vector<SeriesPoint> series;
};

class Ensemble
{
public:
    Ensemble(const Regime& regime, const std::vector<double>& radii, double critical0,
             const EnsembleOptions& options = {})
        : regime_(regime)
        , critical0_(critical0)
        , options_(options)
    {
        if (radii.size() < 2) {
            throw DomainError("ensemble: at least two particles required");
        }
        if (!(critical0 > 0.0)) {
            throw DomainError("ensemble: R_c0 must be > 0");
        }
        if (!(options.step_cap > 0.0) || !(options.epsilon_factor > 0.0) || !(options.bulk_fraction >= 0.0)) {
            throw DomainError("ensemble: invalid options");
        }
        ids_.reserve(radii.size());
        volumes_.reserve(radii.size());
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
                throw DomainError("ensemble: radii must be finite and > 0");
            }
            ids_.push_back(i);
            volumes_.push_back(radii[i] * radii[i] * radii[i]);
        }
        initial_r3_ = sum_volumes();
    }

    /// n particles with radii R_c0 * z, z drawn from the scaling distribution.
    static Ensemble from_distribution(const Regime& regime, std::size_t n, double critical0, std::uint64_t seed,
                                      const EnsembleOptions& options = {})
    {
        if (n < 2) {
            throw DomainError("init_ensemble: n must be >= 2");
        }
        if (!(critical0 > 0.0)) {
            throw DomainError("init_ensemble: R_c0 must be > 0");
        }
        std::vector<double> radii = standard_distribution(regime).sample(n, seed);
        for (double& r : radii) {
            r *= critical0;
        }
        return Ensemble(regime, radii, critical0, options);
    }

    const Regime& regime() const { return regime_; }
    double time() const { return t_; }
    double initial_critical_radius() const { return critical0_; }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::size_t>& ids() const { return ids_; }

    std::vector<double> radii() const
    {
        std::vector<double> out(volumes_.size());
        std::transform(volumes_.begin(), volumes_.end(), out.begin(), [](double v) { return std::cbrt(v); });
        return out;
    }

    MeanField mean_field() const { return lsw::mean_field(regime_, radii()); }

    double epsilon() const { return options_.epsilon_factor * mean_field().critical_radius; }

    /// Sum of R^3 over the surviving particles.
    double total_r3() const { return sum_volumes(); }
    /// (4/3) pi sum R^3 of the surviving particles.
    double total_volume() const { return sphere_factor * sum_volumes(); }
    /// (4/3) pi R^3 accumulated from removed particles at removal time.
    double lost_volume() const { return sphere_factor * lost_r3_; }

    /// |sum R^3 + lost - initial| / initial.
    double conservation_residual() const
    {
        return std::abs(sum_volumes() + lost_r3_ - initial_r3_) / initial_r3_;
    }

    Snapshot snapshot() const
    {
        Snapshot snap;
        snap.t = t_;
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            snap.radii.emplace(ids_[i], std::cbrt(volumes_[i]));
        }
        return snap;
    }

    SeriesPoint series_point() const
    {
        const double total = sum_volumes();
        return {t_, ids_.size(), mean_field().critical_radius, total, sphere_factor * lost_r3_};
    }

    /// Advances by dt, subdividing so that each sub-step respects the step
    /// cap. The mean field is recomputed at every Runge-Kutta stage.
    void step(double dt)
    {
        if (!(dt > 0.0)) {
            throw DomainError("step: dt must be > 0");
        }
        advance_to(t_ + dt, nullptr);
    }

    /// Integrates to t_end, snapshotting at each requested time (those not
    /// after the current time are taken immediately). The series records
    /// every sub-step.
    RunResult run(double t_end, const std::vector<double>& snapshot_times)
    {
        if (!(t_end > t_)) {
            throw DomainError("run: t_end must be after the current time");
        }
        if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
            throw DomainError("run: snapshot times must be sorted");
        }
        RunResult result;
        result.series.push_back(series_point());
        for (double ts : snapshot_times) {
            if (ts > t_end) {
                break;
            }
            if (ts > t_) {
                advance_to(ts, &result.series);
            }
            result.snapshots.push_back(snapshot());
        }
        if (t_end > t_) {
            advance_to(t_end, &result.series);
        }
        return result;
    }

private:
    double sum_volumes() const
    {
        double total = 0.0;
        for (double v : volumes_) {
            total += v;
        }
        return total;
    }

    // dv/dt for a stage state; particles with v <= 0 count as dissolved.
    // Returns the largest |dR/dt| / R over the bulk particles.
    double rates(const std::vector<double>& v, std::vector<double>& radius, std::vector<double>& k) const
    {
        const std::size_t n = v.size();
        double sum_r = 0.0;
        double sum_r2 = 0.0;
        std::size_t alive = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = v[i] > 0.0 ? std::cbrt(v[i]) : 0.0;
            radius[i] = r;
            if (r > 0.0) {
                ++alive;
                sum_r += r;
                sum_r2 += r * r;
            }
        }
        if (alive == 0) {
            throw StateError("ensemble: all particles dissolved");
        }
        const bool dl = regime_.is_diffusion_limited();
        const double u = dl ? static_cast<double>(alive) / sum_r : sum_r / sum_r2;
        const double bulk = options_.bulk_fraction / u;
        double max_rel = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = radius[i];
            if (r == 0.0) {
                k[i] = 0.0;
                continue;
            }
            k[i] = dl ? 3.0 * (u * r - 1.0) : 3.0 * r * (u * r - 1.0);
            if (r >= bulk) {
                max_rel = std::max(max_rel, std::abs(k[i]) / (3.0 * v[i]));
            }
        }
        return max_rel;
    }

    void advance_to(double target, std::vector<SeriesPoint>* series)
    {
        const std::size_t n_max = volumes_.size();
        radius_.resize(n_max);
        stage_.resize(n_max);
        k1_.resize(n_max);
        k2_.resize(n_max);
        k3_.resize(n_max);
        k4_.resize(n_max);
        while (t_ < target) {
            const std::size_t n = volumes_.size();
            radius_.resize(n);
            stage_.resize(n);
            k1_.resize(n);
            k2_.resize(n);
            k3_.resize(n);
            k4_.resize(n);

            const double max_rel = rates(volumes_, radius_, k1_);
            double dt = target - t_;
            if (max_rel > 0.0) {
                dt = std::min(dt, options_.step_cap / max_rel);
            }
            const bool last = dt >= target - t_;

            for (std::size_t i = 0; i < n; ++i) {
                stage_[i] = volumes_[i] + 0.5 * dt * k1_[i];
            }
            rates(stage_, radius_, k2_);
            for (std::size_t i = 0; i < n; ++i) {
                stage_[i] = volumes_[i] + 0.5 * dt * k2_[i];
            }
            rates(stage_, radius_, k3_);
            for (std::size_t i = 0; i < n; ++i) {
                stage_[i] = volumes_[i] + dt * k3_[i];
            }
            rates(stage_, radius_, k4_);
            for (std::size_t i = 0; i < n; ++i) {
                volumes_[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
                if (!std::isfinite(volumes_[i])) {
                    throw IntegrationError("ensemble: non-finite radius for particle " + std::to_string(ids_[i]));
                }
            }
            t_ = last ? target : t_ + dt;
            remove_dissolved();
            if (series != nullptr) {
                series->push_back(series_point());
            }
        }
    }

    void remove_dissolved()
    {
        double sum_r = 0.0;
        double sum_r2 = 0.0;
        std::size_t alive = 0;
        for (double v : volumes_) {
            if (v > 0.0) {
                const double r = std::cbrt(v);
                sum_r += r;
                sum_r2 += r * r;
                ++alive;
            }
        }
        if (alive == 0) {
            throw StateError("ensemble: all particles dissolved");
        }
        const double rc = regime_.is_diffusion_limited() ? sum_r / static_cast<double>(alive) : sum_r2 / sum_r;
        const double eps = options_.epsilon_factor * rc;
        const double threshold = eps * eps * eps;
        std::size_t out = 0;
        for (std::size_t i = 0; i < volumes_.size(); ++i) {
            if (volumes_[i] <= threshold) {
                lost_r3_ += volumes_[i];
                continue;
            }
            volumes_[out] = volumes_[i];
            ids_[out] = ids_[i];
            ++out;
        }
        volumes_.resize(out);
        ids_.resize(out);
        if (volumes_.size() < 1) {
            throw StateError("ensemble: all particles dissolved");
        }
    }

    Regime regime_;
    double critical0_;
    EnsembleOptions options_;
    double t_ = 0.0;
    std::vector<std::size_t> ids_;
    std::vector<double> volumes_; // R^3 per particle
    double lost_r3_ = 0.0;
    double initial_r3_ = 0.0;

    // Scratch buffers for the Runge-Kutta stages.
    std::vector<double> radius_, stage_, k1_, k2_, k3_, k4_;
};

inline Ensemble init_ensemble(const Regime& regime, std::size_t n, double critical0, std::uint64_t seed,
                              const EnsembleOptions& options = {})
{
    return Ensemble::from_distribution(regime, n, critical0, seed, options);
}

struct NewVolume {
    double volume;   ///< (4/3) pi sum over grown particles of R(t)^3 - R(t0)^3
    double fraction; ///< volume / total volume at the later snapshot
};

/// Newly formed volume between two snapshots of the same ensemble.
inline NewVolume measure_new_volume(const Snapshot& before, const Snapshot& after)
{
    if (after.t < before.t) {
        throw DataError("measure_new_volume: snapshots must be in time order");
    }
    double grown = 0.0;
    double total = 0.0;
    for (const auto& [id, r] : after.radii) {
        const auto it = before.radii.find(id);
        if (it == before.radii.end()) {
            throw DataError("measure_new_volume: particle " + std::to_string(id) + " missing from earlier snapshot");
        }
        const double r3 = r * r * r;
        const double r03 = it->second * it->second * it->second;
        total += r3;
        if (r >= it->second) {
            grown += r3 - r03;
        }
    }
    if (total == 0.0) {
        return {0.0, 0.0};
    }
    return {sphere_factor * grown, grown / total};
}

/// Boundary between particles that grew and particles that shrank (or
/// dissolved) between two snapshots, in terms of the earlier radius.
struct EmpiricalReturn {
    double radius;           ///< midpoint of the gap
    double largest_shrunk;   ///< largest earlier radius among shrunk particles
    double smallest_grown;   ///< smallest earlier radius among grown particles
    bool ordered;            ///< largest_shrunk < smallest_grown
};

inline EmpiricalReturn empirical_return_radius(const Snapshot& before, const Snapshot& after)
{
    double largest_shrunk = 0.0;
    double smallest_grown = std::numeric_limits<double>::infinity();
    for (const auto& [id, r0] : before.radii) {
        const auto it = after.radii.find(id);
        if (it != after.radii.end() && it->second >= r0) {
            smallest_grown = std::min(smallest_grown, r0);
        }
        else {
            largest_shrunk = std::max(largest_shrunk, r0);
        }
    }
    if (!std::isfinite(smallest_grown)) {
        throw DataError("empirical_return_radius: no particle grew");
    }
    return {0.5 * (largest_shrunk + smallest_grown), largest_shrunk, smallest_grown,
            largest_shrunk < smallest_grown};
}

/// Least-squares slope of R_c^gamma against t over series points with t >= t_from.
inline double fit_rc_power_slope(const Regime& regime, const std::vector<SeriesPoint>& series, double t_from = 0.0)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (const SeriesPoint& p : series) {
        if (p.t < t_from) {
            continue;
        }
        const double y = std::pow(p.rc_estimate, regime.gamma());
        sx += p.t;
        sy += y;
        sxx += p.t * p.t;
        sxy += p.t * y;
        ++m;
    }
    if (m < 2) {
        throw DataError("fit_rc_power_slope: need at least two series points");
    }
    const double md = static_cast<double>(m);
    const double denom = md * sxx - sx * sx;
    if (denom == 0.0) {
        throw DataError("fit_rc_power_slope: degenerate time samples");
    }
    return (md * sxy - sx * sy) / denom;
}

/// Kolmogorov-Smirnov distance between the rescaled radii R / R_c of a
/// snapshot and the scaling distribution.
inline double ks_distance(const SizeDistribution& dist, std::vector<double> z)
{
    if (z.empty()) {
        throw DataError("ks_distance: no samples");
    }
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = dist.cdf(z[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

} // namespace lsw
