#include <gtest/gtest.h>

#include <cmath>

#include "eulervac/besov.hpp"
#include "eulervac/commutator.hpp"

using namespace eulervac;

namespace {

std::vector<double> dyadic_eps(int lo, int hi)
{
    std::vector<double> e;
    for (int j = lo; j <= hi; ++j) e.push_back(std::ldexp(1.0, -j));
    return e;
}

} // namespace

TEST(Seminorm, ConstantHasZeroSeminorm)
{
    const Profile p = sample_profile(0.0, 1.0, 256, [](double) { return 4.2; });
    for (double q : {1.0, 2.0, kInf}) EXPECT_EQ(estimate_seminorm(p, 0.5, q, default_shifts(256)).seminorm, 0.0);
}

TEST(Seminorm, CuspSupNormIsExact)
{
    // x0 on a cell centre: the sup of |u(x + h) - u(x)| is h^(1/2), attained at x = x0
    const int n = 1024;
    const double dx = 2.0 / n;
    const double x0 = -1.0 + 511.5 * dx;
    const Profile p = sample_profile(-1.0, 1.0, n, cusp(x0, 0.5));
    const BesovEstimate e = estimate_seminorm(p, 0.5, kInf, default_shifts(n));
    EXPECT_NEAR(e.seminorm, 1.0, 1e-12);
    for (const auto& s : e.samples) EXPECT_NEAR(s.norm, std::sqrt(s.h), 1e-12);
}

TEST(Seminorm, CuspLqIncrementsScaleWithOneHalfPlusOneOverQ)
{
    const int n = 8192;
    const Profile p = sample_profile(-1.0, 1.0, n, cusp(0.0, 0.5));
    // q = 2 is the borderline case, where the far field adds a log factor
    for (double q : {3.0, 4.0}) {
        const BesovEstimate e = estimate_seminorm(p, 0.5, q, {4, 8, 16, 32, 64, 128});
        std::vector<double> h, v;
        for (const auto& s : e.samples) h.push_back(s.h), v.push_back(s.norm);
        EXPECT_NEAR(loglog_slope(h, v), 0.5 + 1.0 / q, 0.05) << q;
    }
}

TEST(Seminorm, LipschitzSawtoothBound)
{
    const int n = 2048;
    const Profile p = sample_profile(0.0, 2.0, n, [](double x) { return sawtooth(3.0 * x); });
    for (double alpha : {0.25, 0.5, 0.75}) {
        const BesovEstimate e = estimate_seminorm(p, alpha, kInf, default_shifts(n));
        EXPECT_LE(e.seminorm, 3.0 * std::pow(e.h_max, 1.0 - alpha) * (1 + 1e-12));
        EXPECT_GT(e.seminorm, 0.0);
    }
}

TEST(Seminorm, ScalingAndConstantShift)
{
    const Profile p = sample_profile(0.0, 1.0, 512, weierstrass_sawtooth(0.6, 8));
    Profile a = p, b = p;
    for (double& v : a.values) v *= -2.5;
    for (double& v : b.values) v += 7.0;
    const auto s = default_shifts(512);
    const double base = estimate_seminorm(p, 0.6, 2.0, s).seminorm;
    EXPECT_NEAR(estimate_seminorm(a, 0.6, 2.0, s).seminorm, 2.5 * base, 1e-12 * base);
    EXPECT_NEAR(estimate_seminorm(b, 0.6, 2.0, s).seminorm, base, 1e-9 * base);
}

TEST(Seminorm, NondecreasingInAlphaForShortShifts)
{
    const Profile p = sample_profile(0.0, 1.0, 512, [](double x) { return std::sin(20 * x) + sawtooth(5 * x); });
    double prev = 0.0;
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const BesovEstimate e = estimate_seminorm(p, alpha, 2.0, default_shifts(512));
        ASSERT_LE(e.h_max, 1.0);
        EXPECT_GE(e.seminorm, prev);
        prev = e.seminorm;
    }
}

TEST(Seminorm, SpaceTimeShifts)
{
    const Grid g{1, 0.0, 1.0, 128, 0.0, 1.0, 33};
    const FlowField f = build_field(g, [](double t, double x) { return 1.0 + x + 2.0 * t; }, [](double, double) { return 0.0; });
    const BesovEstimate e = estimate_seminorm(density_of(f), 0.5, kInf, {1, 2}, {1, 2});
    ASSERT_EQ(e.samples.size(), 4u);
    EXPECT_NEAR(e.samples[0].norm, g.dx(), 1e-14);
    EXPECT_TRUE(e.samples[2].time_shift);
    EXPECT_NEAR(e.samples[2].norm, 2.0 * g.dt(), 1e-14);
}

TEST(Seminorm, RejectsBadArguments)
{
    const Profile p = sample_profile(0.0, 1.0, 64, [](double x) { return x; });
    EXPECT_THROW(estimate_seminorm(p, 0.0, 2.0, {1}), Error);
    EXPECT_THROW(estimate_seminorm(p, 1.0, 2.0, {1}), Error);
    EXPECT_THROW(estimate_seminorm(p, 0.5, 0.5, {1}), Error);
    EXPECT_THROW(estimate_seminorm(p, 0.5, 2.0, {}), Error);
    EXPECT_THROW(estimate_seminorm(p, 0.5, 2.0, {64}), Error);
}

TEST(MollificationRates, SmoothProfile)
{
    const Profile p = sample_profile(0.0, 1.0, 4096, [](double x) { return std::sin(2 * std::numbers::pi * x); });
    const MollificationRateReport r = verify_mollification_rates(p, default_kernel(1), 0.5, 2.0, dyadic_eps(4, 7));
    ASSERT_TRUE(r.error_slope && r.gradient_slope);
    EXPECT_GE(*r.error_slope, 1.9);
    EXPECT_GE(*r.gradient_slope, -0.1);
    EXPECT_TRUE(r.pass);
}

TEST(MollificationRates, CuspInSupNorm)
{
    const int n = 8192;
    const double dx = 2.0 / n;
    const Profile p = sample_profile(-1.0, 1.0, n, cusp(-1.0 + 4095.5 * dx, 0.5));
    const MollificationRateReport r = verify_mollification_rates(p, default_kernel(1), 0.5, kInf, dyadic_eps(3, 7));
    ASSERT_TRUE(r.error_slope && r.gradient_slope);
    EXPECT_NEAR(*r.error_slope, 0.5, 0.05);
    EXPECT_NEAR(*r.gradient_slope, -0.5, 0.05);
    EXPECT_TRUE(r.pass);
}

TEST(MollificationRates, ConstantProfileSkipsFits)
{
    const Profile p = sample_profile(0.0, 1.0, 1024, [](double) { return 1.5; });
    const MollificationRateReport r = verify_mollification_rates(p, default_kernel(1), 0.5, 2.0, dyadic_eps(3, 6));
    EXPECT_FALSE(r.error_slope);
    EXPECT_FALSE(r.gradient_slope);
    EXPECT_TRUE(r.pass);
    EXPECT_THROW(verify_mollification_rates(p, default_kernel(1), 0.5, 2.0, dyadic_eps(3, 4)), Error);
}
