#pragma once

// Scaled LSW size distributions h(z), their moments and inverse-CDF sampling.

#include "lsw/errors.hpp"
#include "lsw/numerics.hpp"
#include "lsw/regime.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace lsw
{

/// ln h(z) on 0 < z < z_max.
inline double log_density(const Regime& regime, double z)
{
    if (regime.is_diffusion_limited()) {
        static const double log_prefactor = std::log(81.0) + 1.0 - (5.0 / 3.0) * std::numbers::ln2;
        return log_prefactor + 2.0 * std::log(z) - (7.0 / 3.0) * std::log(z + 3.0)
               - (11.0 / 3.0) * std::log(1.5 - z) - 3.0 / (3.0 - 2.0 * z);
    }
    static const double log_prefactor = std::log(24.0);
    return log_prefactor + std::log(z) - 5.0 * std::log(2.0 - z) - 3.0 * z / (2.0 - z);
}

/// Normalized scaled size density:
///   DL: 81 e 2^(-5/3) z^2 (z+3)^(-7/3) (3/2-z)^(-11/3) exp(-3/(3-2z))
///   AL: 24 z (2-z)^(-5) exp(-3z/(2-z))
/// and zero for z >= z_max. Evaluated in log space; the negative powers of
/// (z_max - z) overflow long before the exponential factor brings them back.
inline double h(const Regime& regime, double z)
{
    if (!(z >= 0.0)) {
        throw DomainError("h: z must be >= 0, got " + std::to_string(z));
    }
    if (z == 0.0 || z >= regime.z_max()) {
        return 0.0;
    }
    return std::exp(log_density(regime, z));
}

/// Maps the top 53 bits of a 64-bit draw onto the open interval (0, 1).
/// Used instead of std::uniform_real_distribution, whose output is not
/// specified bit-for-bit across standard libraries.
inline double uniform_open01(std::uint64_t bits)
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// A regime's size distribution with precomputed moments 0..3 and a
/// tabulated CDF. Immutable after construction.
class SizeDistribution
{
public:
    static constexpr std::size_t table_size = 4096;
    static constexpr std::size_t cached_moments = 4;

    explicit SizeDistribution(const Regime& regime, const numerics::Tolerance& tol = numerics::quad_tolerance)
        : regime_(regime)
        , tol_(tol)
    {
        for (std::size_t k = 0; k < cached_moments; ++k) {
            moments_[k] = compute_moment(static_cast<int>(k));
        }
        build_cdf_table();
    }

    const Regime& regime() const { return regime_; }

    double density(double z) const { return h(regime_, z); }

    /// Integral of z^k h(z) over the support.
    double moment(int k) const
    {
        if (k < 0) {
            throw DomainError("moment: k must be >= 0");
        }
        if (static_cast<std::size_t>(k) < cached_moments) {
            return moments_[static_cast<std::size_t>(k)];
        }
        return compute_moment(k);
    }

    double mean() const { return moments_[1]; }
    double third_moment() const { return moments_[3]; }

    /// Integral of x^k h(x) over [a, b] within the support.
    double partial_moment(int k, double a, double b) const
    {
        const double zmax = regime_.z_max();
        a = std::clamp(a, 0.0, zmax);
        b = std::clamp(b, 0.0, zmax);
        if (a >= b) {
            return 0.0;
        }
        const auto f = [&](double x) { return std::pow(x, k) * h(regime_, x); };
        if (a < 1.0 && b > 1.0) {
            return numerics::integrate(f, a, 1.0, tol_) + numerics::integrate(f, 1.0, b, tol_);
        }
        return numerics::integrate(f, a, b, tol_);
    }

    /// H(z) = integral of h over [0, z], by quadrature.
    double cdf(double z) const
    {
        if (z <= 0.0) {
            return 0.0;
        }
        if (z >= regime_.z_max()) {
            return 1.0;
        }
        if (z <= 1.0) {
            return partial_moment(0, 0.0, z) / moments_[0];
        }
        return 1.0 - partial_moment(0, z, regime_.z_max()) / moments_[0];
    }

    /// Grid of (z, H(z)), strictly increasing in both coordinates, from (0, 0)
    /// to (z_max, 1).
    const std::vector<double>& cdf_grid_z() const { return table_z_; }
    const std::vector<double>& cdf_grid_h() const { return table_h_; }

    /// Inverse CDF by linear interpolation in the table; u in (0, 1).
    double quantile(double u) const
    {
        if (!(u > 0.0 && u < 1.0)) {
            throw DomainError("quantile: u must lie in (0, 1)");
        }
        const auto it = std::upper_bound(table_h_.begin(), table_h_.end(), u);
        const auto i = static_cast<std::size_t>(it - table_h_.begin());
        const double h0 = table_h_[i - 1];
        const double h1 = table_h_[i];
        const double w = (u - h0) / (h1 - h0);
        const double z = table_z_[i - 1] + w * (table_z_[i] - table_z_[i - 1]);
        return std::clamp(z, std::nextafter(0.0, 1.0), std::nextafter(regime_.z_max(), 0.0));
    }

    /// n independent draws using a caller-owned engine.
    std::vector<double> sample(std::size_t n, std::mt19937_64& engine) const
    {
        std::vector<double> out(n);
        for (double& z : out) {
            z = quantile(uniform_open01(engine()));
        }
        return out;
    }

    /// n independent draws; identical output for identical seeds.
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const
    {
        if (n < 1) {
            throw DomainError("sample: n must be >= 1");
        }
        std::mt19937_64 engine(seed);
        return sample(n, engine);
    }

private:
    double compute_moment(int k) const
    {
        return partial_moment(k, 0.0, 1.0) + partial_moment(k, 1.0, regime_.z_max());
    }

    // Cosine-clustered nodes toward both ends of the support; panel integrals
    // are accumulated from each end toward z = 1 so neither tail loses
    // precision to cancellation.
    void build_cdf_table()
    {
        const double zmax = regime_.z_max();
        std::vector<double> nodes(table_size);
        for (std::size_t i = 0; i < table_size; ++i) {
            const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(table_size - 1);
            nodes[i] = 0.5 * zmax * (1.0 - std::cos(theta));
        }
        nodes.front() = 0.0;
        nodes.back() = zmax;

        const auto f = [&](double x) { return h(regime_, x); };
        std::vector<double> panel(table_size - 1);
        for (std::size_t i = 0; i + 1 < table_size; ++i) {
            panel[i] = numerics::integrate(f, nodes[i], nodes[i + 1], tol_);
        }
        double total = 0.0;
        for (double p : panel) {
            total += p;
        }

        std::vector<double> lower(table_size, 0.0); // mass below node i
        for (std::size_t i = 1; i < table_size; ++i) {
            lower[i] = lower[i - 1] + panel[i - 1];
        }
        std::vector<double> upper(table_size, 0.0); // mass above node i
        for (std::size_t i = table_size - 1; i-- > 0;) {
            upper[i] = upper[i + 1] + panel[i];
        }

        table_z_.clear();
        table_h_.clear();
        table_z_.push_back(0.0);
        table_h_.push_back(0.0);
        for (std::size_t i = 1; i + 1 < table_size; ++i) {
            const double value = nodes[i] <= 1.0 ? lower[i] / total : 1.0 - upper[i] / total;
            if (value > table_h_.back() && value < 1.0) {
                table_z_.push_back(nodes[i]);
                table_h_.push_back(value);
            }
        }
        table_z_.push_back(zmax);
        table_h_.push_back(1.0);
    }

    Regime regime_;
    numerics::Tolerance tol_;
    std::array<double, cached_moments> moments_{};
    std::vector<double> table_z_;
    std::vector<double> table_h_;
};

/// Shared, lazily built distribution at the default quadrature tolerance.
inline const SizeDistribution& standard_distribution(const Regime& regime)
{
    static const SizeDistribution dl(Regime::diffusion_limited());
    static const SizeDistribution al(Regime::attachment_limited());
    return regime.is_diffusion_limited() ? dl : al;
}

} // namespace lsw
