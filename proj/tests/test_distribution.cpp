#include "lsw/distribution.hpp"
#include "lsw/numerics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace lsw;

namespace
{

const std::vector<Regime> regimes = {Regime::diffusion_limited(), Regime::attachment_limited()};

} // namespace

TEST(Density, PointValues)
{
    const Regime dl = Regime::diffusion_limited();
    const Regime al = Regime::attachment_limited();
    EXPECT_EQ(h(dl, 0.0), 0.0);
    EXPECT_EQ(h(al, 0.0), 0.0);
    EXPECT_NEAR(h(al, 1.0), 24.0 * std::exp(-3.0), 1e-14);
    EXPECT_NEAR(h(dl, 1.0), 81.0 * std::exp(-2.0) * std::pow(2.0, -8.0 / 3.0), 1e-14);
    // h(1)/gamma is the constant of the initial recrystallization rate.
    EXPECT_NEAR(h(dl, 1.0) / 3.0, 27.0 * std::exp(-2.0) * std::pow(2.0, -8.0 / 3.0), 1e-14);
    EXPECT_NEAR(h(al, 1.0) / 2.0, 12.0 * std::exp(-3.0), 1e-14);
    EXPECT_THROW(h(dl, -0.1), DomainError);
}

TEST(Density, DirectFormulaAwayFromCutoff)
{
    const Regime dl = Regime::diffusion_limited();
    const Regime al = Regime::attachment_limited();
    for (double z = 0.05; z < 1.4; z += 0.05) {
        const double direct_dl = 81.0 * std::exp(1.0) * std::pow(2.0, -5.0 / 3.0) * z * z
                                 * std::pow(z + 3.0, -7.0 / 3.0) * std::pow(1.5 - z, -11.0 / 3.0)
                                 * std::exp(-3.0 / (3.0 - 2.0 * z));
        EXPECT_NEAR(h(dl, z), direct_dl, 1e-12 * direct_dl);
        const double direct_al = 24.0 * z * std::pow(2.0 - z, -5.0) * std::exp(-3.0 * z / (2.0 - z));
        EXPECT_NEAR(h(al, z), direct_al, 1e-12 * direct_al);
    }
}

TEST(Density, CutoffBehaviour)
{
    for (const Regime& r : regimes) {
        EXPECT_EQ(h(r, r.z_max()), 0.0);
        EXPECT_EQ(h(r, r.z_max() + 0.3), 0.0);
        // Monotone decay to zero over the last percent of the support.
        double previous = h(r, 0.99 * r.z_max());
        for (int i = 1; i <= 1000; ++i) {
            const double z = r.z_max() * (0.99 + 0.01 * i / 1000.0);
            const double value = h(r, z);
            EXPECT_TRUE(std::isfinite(value));
            EXPECT_LE(value, previous);
            previous = value;
        }
        EXPECT_EQ(h(r, r.z_max() - 1e-6), 0.0);
    }
}

TEST(SizeDistribution, Moments)
{
    // Frozen from the mpmath oracle.
    const SizeDistribution& dl = standard_distribution(Regime::diffusion_limited());
    const SizeDistribution& al = standard_distribution(Regime::attachment_limited());
    EXPECT_NEAR(dl.moment(0), 1.0, 1e-8);
    EXPECT_NEAR(al.moment(0), 1.0, 1e-8);
    EXPECT_NEAR(dl.moment(1), 1.0, 1e-8);
    EXPECT_NEAR(al.moment(1), 8.0 / 9.0, 1e-8);
    EXPECT_NEAR(dl.moment(2), 1.04625033453094913, 1e-9);
    EXPECT_NEAR(al.moment(2), 8.0 / 9.0, 1e-9);
    EXPECT_NEAR(dl.moment(3), 1.12959999118019593, 1e-9);
    EXPECT_NEAR(al.moment(3), 0.956676432794310575, 1e-9);
    EXPECT_THROW(dl.moment(-1), DomainError);
    EXPECT_GT(dl.moment(6), 0.0);
}

TEST(SizeDistribution, MomentsStableUnderTolerance)
{
    for (const Regime& r : regimes) {
        const SizeDistribution loose(r, {1e-12, 1e-8, 2000});
        const SizeDistribution tight(r, {1e-14, 1e-10, 2000});
        for (int k = 0; k <= 3; ++k) {
            EXPECT_NEAR(loose.moment(k), tight.moment(k), 1e-7);
        }
    }
}

TEST(SizeDistribution, CdfTable)
{
    for (const Regime& r : regimes) {
        const SizeDistribution& d = standard_distribution(r);
        const auto& z = d.cdf_grid_z();
        const auto& c = d.cdf_grid_h();
        ASSERT_EQ(z.size(), c.size());
        EXPECT_GT(z.size(), 3000u);
        EXPECT_EQ(z.front(), 0.0);
        EXPECT_EQ(c.front(), 0.0);
        EXPECT_EQ(z.back(), r.z_max());
        EXPECT_EQ(c.back(), 1.0);
        for (std::size_t i = 1; i < z.size(); ++i) {
            EXPECT_GT(z[i], z[i - 1]);
            EXPECT_GT(c[i], c[i - 1]);
        }
        for (double x : {0.2, 0.8, 1.0, 1.2}) {
            const auto it = std::lower_bound(z.begin(), z.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - z.begin());
            EXPECT_NEAR(c[i], d.cdf(z[i]), 1e-10);
        }
    }
}

TEST(SizeDistribution, SampleMeanAndSupport)
{
    for (const Regime& r : regimes) {
        const SizeDistribution& d = standard_distribution(r);
        const std::size_t n = 100000;
        const std::vector<double> z = d.sample(n, 2024);
        const double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
        const double sigma = std::sqrt(d.moment(2) - d.moment(1) * d.moment(1));
        EXPECT_NEAR(mean, d.mean(), 3.0 * sigma / std::sqrt(static_cast<double>(n)));
        for (double x : z) {
            ASSERT_GT(x, 0.0);
            ASSERT_LT(x, r.z_max());
        }
    }
}

TEST(SizeDistribution, SampleKolmogorovSmirnov)
{
    for (const Regime& r : regimes) {
        const SizeDistribution& d = standard_distribution(r);
        std::vector<double> z = d.sample(100000, 99);
        std::sort(z.begin(), z.end());
        const double n = static_cast<double>(z.size());
        double ks = 0.0;
        // Analytic CDF by quadrature on a subsample of order statistics.
        for (std::size_t i = 0; i < z.size(); i += 97) {
            const double f = d.cdf(z[i]);
            ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
        }
        EXPECT_LT(ks, 0.01);
    }
}

TEST(SizeDistribution, SamplingIsDeterministic)
{
    const SizeDistribution& d = standard_distribution(Regime::diffusion_limited());
    EXPECT_EQ(d.sample(1000, 5), d.sample(1000, 5));
    EXPECT_NE(d.sample(1000, 5), d.sample(1000, 6));
    EXPECT_THROW(d.sample(0, 5), DomainError);
}
