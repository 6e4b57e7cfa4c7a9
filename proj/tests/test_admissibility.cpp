#include <gtest/gtest.h>

#include <cmath>

#include "eulervac/admissibility.hpp"
#include "eulervac/numerics.hpp"
#include "eulervac/solver.hpp"
#include "eulervac/strong_solution.hpp"

using namespace eulervac;

namespace {

RiemannSetup fan(double gamma)
{
    RiemannSetup s;
    s.rho_L = s.rho_R = 1.0;
    s.u_L = -1.0;
    s.u_R = 1.0;
    s.params = {1.0, gamma, 10.0};
    return s;
}

double worst(const std::vector<WeakResidualRow>& rows)
{
    const auto [a, b] = max_weak_residual(rows);
    return std::max(a, b);
}

} // namespace

TEST(WeakForm, ConstantStateHasNoDefect)
{
    const Grid g{1, 0.0, 2.0, 256, 0.0, 1.0, 65};
    const FlowField f = build_field(g, [](double) { return 1.3; }, [](double) { return -0.4; });
    const auto rows = weak_form_residual(f, {1.0, 1.4, 5.0}, default_test_family(g), {{0.0, 1.0}, {0.25, 0.5}});
    EXPECT_FALSE(rows.empty());
    EXPECT_LE(worst(rows), 1e-10);
}

TEST(WeakForm, ExactRarefactionDefectShrinksWithTheGrid)
{
    const AnalyticStrong s = time_shifted(rarefaction_strong(fan(1.4)), 0.25);
    std::vector<double> h, r;
    for (int n : {128, 256, 512, 1024}) {
        const Grid g{1, -3.0, 3.0, n, 0.0, 0.5, n / 2 + 1};
        const FlowField f = sample_strong(s, g);
        h.push_back(g.dx());
        r.push_back(worst(weak_form_residual(f, {1.0, 1.4, 10.0}, default_test_family(g), {{0.0, 0.5}})));
    }
    EXPECT_GE(loglog_slope(h, r), 0.9);
}

TEST(WeakForm, FiniteVolumeRiemannDefectShrinksWithTheGrid)
{
    RiemannSetup s = fan(1.4);
    s.u_L = -0.5;
    s.u_R = 0.5;
    std::vector<double> h, r;
    for (int n : {128, 256, 512, 1024, 2048}) {
        const Grid g{1, -2.0, 2.0, n, 0.0, 0.5, 33};
        const FlowField f = simulate([&](double x) { return x < 0.0 ? s.rho_L : s.rho_R; }, [&](double x) { return x < 0.0 ? s.u_L : s.u_R; }, g,
                                     SchemeConfig{}, s.params);
        h.push_back(g.dx());
        r.push_back(worst(weak_form_residual(f, s.params, default_test_family(g), {{0.0, 0.5}})));
    }
    EXPECT_GE(loglog_slope(h, r), 0.9);
}

TEST(WeakForm, SupportOutsideTheGridIsAnError)
{
    const Grid g{1, 0.0, 1.0, 64, 0.0, 1.0, 5};
    const FlowField f = build_field(g, [](double) { return 1.0; }, [](double) { return 0.0; });
    EXPECT_THROW(weak_form_residual(f, {1.0, 1.4, 5.0}, {{0.95, 0.1, 0.0, 1.0}}, {{0.0, 1.0}}), Error);
    EXPECT_THROW(weak_form_residual(f, {1.0, 1.4, 5.0}, {{0.5, 0.1, 0.0, 1.0}}, {{0.0, 1.5}}), Error);
    EXPECT_THROW(weak_form_residual(f, {1.0, 1.4, 5.0}, {{0.5, 0.1, 0.0, 1.0}}, {{0.5, 0.5}}), Error);
}

TEST(Energy, ConstantStateHasZeroMargin)
{
    const Grid g{1, 0.0, 1.0, 64, 0.0, 1.0, 9};
    const FlowField f = build_field(g, [](double) { return 2.0; }, [](double) { return 0.5; });
    const EnergyCheck c = check_energy_admissibility(f, {1.0, 1.4, 5.0});
    EXPECT_EQ(c.margin, 0.0);
    EXPECT_TRUE(c.pass);
    for (double e : c.energy) EXPECT_EQ(e, c.energy.front());
}

TEST(Energy, FiniteVolumeRunIsAdmissible)
{
    const EosParams p{1.0, 1.4, 10.0};
    const Grid g{1, -3.0, 3.0, 256, 0.0, 0.5, 17};
    const FlowField f = simulate([](double x) { return 1.0 + 0.3 * std::exp(-20 * x * x); }, [](double x) { return 0.5 * std::sin(x); }, g,
                                 SchemeConfig{}, p);
    const EnergyCheck c = check_energy_admissibility(f, p);
    EXPECT_TRUE(c.pass) << c.margin;
    EXPECT_LT(c.energy.back(), c.energy.front());
}

TEST(Energy, GrowingDensityFails)
{
    const Grid g{1, 0.0, 1.0, 64, 0.0, 1.0, 9};
    const FlowField f = build_field(
        g, [](double t, double x) { return (1.0 + 0.2 * std::sin(6 * x)) * (1.0 + t); }, [](double, double) { return 0.3; });
    const EnergyCheck c = check_energy_admissibility(f, {1.0, 1.4, 5.0});
    EXPECT_LT(c.margin, 0.0);
    EXPECT_FALSE(c.pass);
    EXPECT_TRUE(check_energy_admissibility(f, {1.0, 1.4, 5.0}, -c.margin).pass);
}

TEST(Lambda, LinearVelocities)
{
    const Grid g{1, -1.0, 1.0, 512, 0.0, 1.0, 3};
    auto lam = [&](std::function<double(double)> u) { return estimate_lambda(build_field(g, [](double) { return 1.0; }, u), 0.5); };
    const LambdaEstimate c = lam([](double) { return 0.7; });
    EXPECT_NEAR(c.raw, 0.0, 1e-12);
    EXPECT_NEAR(c.value, 0.0, 1e-12);
    // midpoint quadrature of the bump moments costs O(dx^2)
    const LambdaEstimate e = lam([](double x) { return x; });
    EXPECT_NEAR(e.raw, -1.0, 1e-4);
    EXPECT_EQ(e.value, 0.0);
    const LambdaEstimate q = lam([](double x) { return -x; });
    EXPECT_NEAR(q.value, 1.0, 1e-4);
    const LambdaEstimate s = lam([](double x) { return 2.0 - 3.0 * x; });
    EXPECT_NEAR(s.value, 3.0, 3e-4);
    EXPECT_GT(q.tests_used, 0);
}

TEST(Lambda, InvariantUnderAddingAConstant)
{
    const Grid g{1, -1.0, 1.0, 256, 0.0, 1.0, 3};
    auto u = [](double x) { return std::sin(4 * x) - x * x; };
    const double a = estimate_lambda(build_field(g, [](double) { return 1.0; }, u), 0.0).raw;
    const double b = estimate_lambda(build_field(g, [](double) { return 1.0; }, [&](double x) { return u(x) + 5.0; }), 0.0).raw;
    EXPECT_NEAR(a, b, 1e-10);
}

TEST(Lambda, RarefactionIsExpansive)
{
    const AnalyticStrong s = time_shifted(rarefaction_strong(fan(1.4)), 0.25);
    const Grid g{1, -3.0, 3.0, 512, 0.0, 0.5, 5};
    for (double v : lambda_series(sample_strong(s, g))) EXPECT_LE(v, 1e-9);
}

TEST(Lambda, RadialExpansionAndCompression)
{
    const Grid g{2, 0.0, 2.0, 256, 0.0, 1.0, 3};
    const FlowField out = build_field(g, [](double) { return 1.0; }, [](double r) { return r; });
    EXPECT_EQ(estimate_lambda(out, 0.0).value, 0.0);
    const FlowField in = build_field(g, [](double) { return 1.0; }, [](double r) { return -0.5 * r; });
    EXPECT_NEAR(estimate_lambda(in, 0.0).value, 0.5, 1e-9);
}

TEST(VacuumVelocity, ClosuresOnEmptyRegion)
{
    const Grid g{1, 0.0, 2.0, 128, 0.0, 1.0, 33};
    FlowField f = build_field(g, [](double t, double x) { return x < 0.5 * (1 + t) ? 1.0 : 0.0; }, [](double t, double x) { return x / (1 + t); });
    EXPECT_THROW(vacuum_velocity_residual(f), Error);
    f.exterior_velocity = constant_velocity(0.3);
    EXPECT_EQ(vacuum_velocity_residual(f).max_residual, 0.0);
    EXPECT_GT(vacuum_velocity_residual(f).exterior_cells, 0);
    f.exterior_velocity = expansion_velocity(1.0);
    EXPECT_LE(vacuum_velocity_residual(f).max_residual, 1e-6);
    f.exterior_velocity = linear_velocity(1.0);
    EXPECT_GT(vacuum_velocity_residual(f).max_residual, 0.5);
    AdmissibilityOptions o;
    o.weak_tol = 1e9;
    EXPECT_FALSE(check_admissibility(f, {1.0, 1.4, 5.0}, o).pass());
}

TEST(VacuumIntegrability, UnitDensityIntegratesToTheBoxVolume)
{
    const Grid g{1, 0.0, 1.0, 256, 0.0, 1.0, 129};
    FlowField f = build_field(g, [](double) { return 1.0; }, [](double) { return 0.0; });
    f.space_ext = Extension::constant;
    const MollifierKernel k = default_kernel(1);
    const double t1 = 0.25, t2 = 0.75;
    for (double eps : {0.1, 0.05}) EXPECT_NEAR(vacuum_integral(f, k, eps, 0.5, t1, t2), (t2 - t1) * 1.0, 1e-10) << eps;
    const VacuumIntegrability v = vacuum_integrability(f, k, 0.5, {0.1, 0.05, 0.025}, t1, t2);
    EXPECT_TRUE(v.pass);
    EXPECT_THROW(vacuum_integrability(f, k, 0.0, {0.1}, t1, t2), Error);
}

TEST(Admissibility, FiniteVolumeRunPassesEveryVerdict)
{
    const EosParams p{1.0, 1.4, 10.0};
    const AnalyticStrong s = time_shifted(rarefaction_strong(fan(1.4)), 0.25);
    const Grid g{1, -3.0, 3.0, 512, 0.0, 0.5, 33};
    const FlowField f = simulate([&](double x) { return s.r(0.0, x); }, [&](double x) { return s.v(0.0, x); }, g, SchemeConfig{}, p);
    const AdmissibilityReport r = check_admissibility(f, p);
    EXPECT_TRUE(r.pass());
    ASSERT_EQ(r.verdicts.size(), 2u);
    EXPECT_EQ(r.lambda_estimate.size(), 33u);
}
