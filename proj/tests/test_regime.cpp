#include "lsw/numerics.hpp"
#include "lsw/regime.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace lsw;

namespace
{

const std::vector<Regime> regimes = {Regime::diffusion_limited(), Regime::attachment_limited()};

std::vector<double> open_grid(const Regime& r, double margin, int count)
{
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(margin + (r.z_max() - 2.0 * margin) * i / (count - 1));
    }
    return out;
}

} // namespace

TEST(Regime, ParameterTuples)
{
    const Regime dl = Regime::diffusion_limited();
    EXPECT_EQ(dl.lambda(), 2);
    EXPECT_EQ(dl.nu(), 27.0 / 4.0);
    EXPECT_EQ(dl.gamma(), 3);
    EXPECT_EQ(dl.z_max(), 1.5);
    EXPECT_NEAR(dl.coarsening_rate(), 4.0 / 9.0, 1e-16);

    const Regime al = Regime::attachment_limited();
    EXPECT_EQ(al.lambda(), 1);
    EXPECT_EQ(al.nu(), 4.0);
    EXPECT_EQ(al.gamma(), 2);
    EXPECT_EQ(al.z_max(), 2.0);
    EXPECT_EQ(al.coarsening_rate(), 0.5);

    EXPECT_EQ(Regime::parse("dl"), dl);
    EXPECT_EQ(Regime::parse("al"), al);
    EXPECT_THROW(Regime::parse("DL"), DomainError);
}

TEST(GrowthRateScaled, FixedPoints)
{
    const Regime dl = Regime::diffusion_limited();
    const Regime al = Regime::attachment_limited();
    EXPECT_DOUBLE_EQ(growth_rate_scaled(dl, 1.0), -1.0);
    EXPECT_DOUBLE_EQ(growth_rate_scaled(al, 1.0), -1.0);
    EXPECT_EQ(growth_rate_scaled(dl, 1.5), 0.0);
    EXPECT_EQ(growth_rate_scaled(al, 2.0), 0.0);
    EXPECT_THROW(growth_rate_scaled(dl, 0.0), DomainError);
}

TEST(GrowthRateScaled, FactoredFormMatchesDefinition)
{
    for (const Regime& r : regimes) {
        for (double z : open_grid(r, 0.01, 200)) {
            const double direct = r.nu() * (z - 1.0) / std::pow(z, r.lambda()) - z;
            EXPECT_NEAR(growth_rate_scaled(r, z), direct, 1e-12 * (1.0 + std::abs(direct)));
        }
    }
}

TEST(GrowthRateScaled, NegativeBelowCutoff)
{
    for (const Regime& r : regimes) {
        for (double z : open_grid(r, 1e-6, 2001)) {
            EXPECT_LT(growth_rate_scaled(r, z), 0.0) << r.name() << " z=" << z;
        }
    }
}

TEST(GrowthRatePhysical, Substitution)
{
    const Regime dl = Regime::diffusion_limited();
    const Regime al = Regime::attachment_limited();
    EXPECT_EQ(growth_rate_physical(dl, 3.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(growth_rate_physical(dl, 2.0, 1.0), 0.25);
    EXPECT_DOUBLE_EQ(growth_rate_physical(al, 2.0, 1.0), 0.5);
    EXPECT_THROW(growth_rate_physical(al, 0.0, 1.0), DomainError);
    EXPECT_THROW(growth_rate_physical(al, 1.0, -1.0), DomainError);
}

TEST(CriticalRadius, ClosedForm)
{
    const Regime dl = Regime::diffusion_limited();
    const Regime al = Regime::attachment_limited();
    EXPECT_EQ(critical_radius(dl, 1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(critical_radius(al, 1.0, 6.0), 2.0);
    EXPECT_DOUBLE_EQ(critical_radius(dl, 0.0, 9.0 * 8.0 / 4.0), 2.0);
    EXPECT_NEAR(critical_radius(dl, 1e-8, 5.0), std::cbrt(4.0 / 9.0 * 5.0), 1e-15);
    EXPECT_THROW(critical_radius(dl, 1.0, -1.0), DomainError);
}

TEST(CriticalRadius, RecoversLateStageNu)
{
    // 1/(R_c^2 dR_c/dt) = 27/4 (DL) and 1/(R_c dR_c/dt) = 4 (AL).
    for (const Regime& r : regimes) {
        for (double t : {0.5, 3.0, 40.0}) {
            const double dt = 1e-5 * t;
            const double rc = critical_radius(r, 1.0, t);
            const double rate = (critical_radius(r, 1.0, t + dt) - critical_radius(r, 1.0, t - dt)) / (2.0 * dt);
            const double nu = 1.0 / (std::pow(rc, r.lambda()) * rate);
            EXPECT_NEAR(nu, r.nu(), 1e-6 * r.nu());
        }
    }
}

TEST(LateStageClock, PowerLawOnShiftedClock)
{
    for (const Regime& r : regimes) {
        for (double t : {0.0, 1.0, 10.0}) {
            const double clock = late_stage_clock(r, 1.3, t);
            EXPECT_NEAR(critical_radius(r, 1.3, t), critical_radius(r, 0.0, clock), 1e-13);
        }
    }
}

TEST(TauOfZ, ClosedFormValues)
{
    const Regime dl = Regime::diffusion_limited();
    const Regime al = Regime::attachment_limited();
    EXPECT_DOUBLE_EQ(tau_of_z(al, 1.0), -2.0);
    EXPECT_NEAR(tau_of_z(dl, 1.0), -1.0 - 8.0 / 9.0 * std::log(2.0), 1e-15);
    EXPECT_NEAR(tau_of_z(dl, 1.0), -1.61613082716439583, 1e-14);
    EXPECT_THROW(tau_of_z(dl, 1.5), DomainError);
    EXPECT_THROW(tau_of_z(dl, 1.5 - 1e-13), DomainError);
    EXPECT_THROW(tau_of_z(al, 0.0), DomainError);
    EXPECT_NO_THROW(tau_of_z(dl, 1.5 - 1e-11));
}

TEST(TauOfZ, DerivativeIdentity)
{
    // d tau/dz * dz/dtau = 1; this is what fixes ln(3 - 2z) in the DL form.
    for (const Regime& r : regimes) {
        for (double z : open_grid(r, 0.05, 300)) {
            // Five-point stencil; tau' ~ z^2/nu near 0, so a tiny step loses
            // everything to cancellation.
            const double step = std::min(1e-3 * z, 1e-3 * (r.z_max() - z));
            const auto t = [&](double x) { return tau_of_z(r, x); };
            const double dtau = (t(z - 2 * step) - 8 * t(z - step) + 8 * t(z + step) - t(z + 2 * step)) / (12.0 * step);
            EXPECT_NEAR(dtau * growth_rate_scaled(r, z), 1.0, 1e-6) << r.name() << " z=" << z;
        }
    }
}

TEST(TauOfZ, DifferencesMatchQuadrature)
{
    for (const Regime& r : regimes) {
        for (double z : {0.2, 0.7, 1.3, r.z_max() - 0.1}) {
            const double quad =
                numerics::integrate([&](double x) { return 1.0 / growth_rate_scaled(r, x); }, 1.0, z);
            EXPECT_NEAR(tau_of_z(r, z) - tau_of_z(r, 1.0), quad, 1e-9);
        }
    }
}

TEST(Alpha, UnimodalWithMaximumAtOne)
{
    for (const Regime& r : regimes) {
        const double peak = alpha(r, 1.0);
        for (double z : open_grid(r, 1e-4, 4001)) {
            if (std::abs(z - 1.0) > 1e-9) {
                EXPECT_LT(alpha(r, z), peak) << r.name() << " z=" << z;
            }
        }
        const double step = 1e-6;
        EXPECT_NEAR((alpha(r, 1.0 + step) - alpha(r, 1.0 - step)) / (2.0 * step), 0.0, 1e-8);
        EXPECT_LT(alpha(r, 1e-12), -20.0);
        EXPECT_LT(alpha(r, r.z_max() - 1e-10), -1e8);
    }
}

TEST(Alpha, FrozenValue)
{
    // Independent oracle: alpha(1) plus quadrature of 1/z + 1/(dz/dtau) (tests/oracle).
    EXPECT_NEAR(alpha(Regime::diffusion_limited(), 1.25), -2.03484978523529861, 1e-12);
    EXPECT_NEAR(alpha(Regime::attachment_limited(), 1.5), -2.90138771133189031, 1e-12);
}

TEST(ZOfTau, InversionProperties)
{
    const Regime dl = Regime::diffusion_limited();
    EXPECT_EQ(z_of_tau(dl, 1.25, 0.0), 1.25);
    double previous = 1.25;
    // Extinction from 1.25 happens at delta tau ~ 0.826.
    for (int i = 1; i <= 50; ++i) {
        const double z = z_of_tau(dl, 1.25, 0.015 * i);
        EXPECT_LT(z, previous);
        EXPECT_NEAR(tau_of_z(dl, z) - tau_of_z(dl, 1.25), 0.015 * i, 1e-10);
        previous = z;
    }
    EXPECT_THROW(z_of_tau(dl, 1.25, -0.1), DomainError);
    EXPECT_EQ(z_of_tau(dl, 1.25, 100.0), 0.0);
}

TEST(ZOfTau, AgreesWithOdeTrajectory)
{
    for (const Regime& r : regimes) {
        for (double dtau : {0.1, 0.3, 0.6}) {
            const double z_ode =
                numerics::solve_ode([&](double, double z) { return growth_rate_scaled(r, z); }, 1.25, 0.0, dtau);
            EXPECT_NEAR(z_of_tau(r, 1.25, dtau), z_ode, 1e-6);
        }
    }
}
