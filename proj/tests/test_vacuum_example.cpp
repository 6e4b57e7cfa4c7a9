#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eulervac/admissibility.hpp"
#include "eulervac/vacuum_example.hpp"

using namespace eulervac;

namespace {

// gamma = 2 makes c0 = rho0^(1/2) = (R - r)^2 near the boundary
const EosParams kParams{1.0, 2.0, kInf};

Example4Config small_config()
{
    Example4Config c;
    c.n_cells = 512;
    c.n_frames = 65;
    c.eps_seq = {0.125, 0.0625, 0.03125};
    return c;
}

struct Shared {
    ExampleData data;
    FlowField run;
};

const Shared& shared()
{
    static const Shared s = [] {
        ExampleData d = build_example(small_config(), kParams);
        FlowField f = run_example(d, kParams);
        return Shared{std::move(d), std::move(f)};
    }();
    return s;
}

} // namespace

TEST(ExampleData, ProfileAndVelocity)
{
    const ExampleData d = build_example(small_config(), kParams);
    EXPECT_EQ(d.rho0(1.0), 0.0);
    EXPECT_EQ(d.rho0(1.7), 0.0);
    EXPECT_DOUBLE_EQ(d.u0(1.0), 1.0);
    EXPECT_EQ(d.u0(0.0), 0.0);
    EXPECT_NEAR(d.rho0(0.75), std::pow(0.25, 4), 1e-15);
    // the quartic core meets the profile with matching value, slope and curvature
    const double r0 = 0.5, a = d.core_a, b = d.core_b, c = d.core_c;
    EXPECT_NEAR(a + b * r0 * r0 + c * std::pow(r0, 4), std::pow(0.5, 4), 1e-14);
    EXPECT_NEAR(2 * b * r0 + 4 * c * std::pow(r0, 3), -4 * std::pow(0.5, 3), 1e-14);
    EXPECT_NEAR(2 * b + 12 * c * r0 * r0, 12 * std::pow(0.5, 2), 1e-13);
    for (int i = 0; i < d.grid.n_cells; ++i) {
        EXPECT_GE(d.initial.rho[i], 0.0);
        EXPECT_NEAR(d.c0[i], std::sqrt(d.initial.rho[i]), 1e-15);
    }
}

TEST(ExampleData, BoundaryInverseIntegral)
{
    const Example4Config c = small_config();
    const ExampleData d = build_example(c, kParams);
    for (double theta : {0.05, 0.125, 0.2}) {
        const double exact = boundary_inverse_integral_exact(c, theta);
        EXPECT_NEAR(boundary_inverse_integral(d, theta), exact, 0.01 * exact) << theta;
    }
    EXPECT_TRUE(std::isinf(boundary_inverse_integral_exact(c, 0.25)));
}

TEST(ExampleData, ConfigValidation)
{
    Example4Config c = small_config();
    c.theta = 0.25;
    EXPECT_THROW(c.validate(), Error);
    c = small_config();
    c.N_profile = 2;
    EXPECT_THROW(c.validate(), Error);
    c = small_config();
    c.r_max = 1.9;
    EXPECT_THROW(build_example(c, kParams), Error);
    c = small_config();
    c.R = 0.0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(ExampleRun, MassAndVacuumClosure)
{
    const FlowField& f = shared().run;
    EXPECT_NO_THROW(f.validate());
    const double m0 = f.frame_mass(0);
    for (int k = 1; k < f.grid.n_steps; ++k) EXPECT_NEAR(f.frame_mass(k), m0, 1e-10 * m0);
    const VacuumVelocityResidual v = vacuum_velocity_residual(f);
    EXPECT_GT(v.exterior_cells, 0);
    EXPECT_LE(v.max_residual, 1e-6);
}

TEST(ExampleRun, BoundaryMovesWithTheFlow)
{
    const FlowField& f = shared().run;
    const BoundaryTrack b = track_boundary(f, 4, 1.0);
    ASSERT_EQ(b.times.size(), 65u);
    // half the default resolution; the 2-cell bound is checked at the default one
    EXPECT_LE(b.max_error, 3.5 * f.grid.dx());
    EXPECT_NEAR(b.radius.front(), 1.0, 0.5 * f.grid.dx());
    EXPECT_NEAR(b.radius.back(), 2.0, 3.5 * f.grid.dx());
    for (std::size_t k = 0; k < b.times.size(); ++k) {
        if (k > 0) {
            EXPECT_GE(b.radius[k], b.radius[k - 1]);
        }
        EXPECT_GE(b.fit_cells[k], 3);
        EXPECT_NEAR(b.expected[k], 1.0 + b.times[k], 1e-15);
    }
}

TEST(ExampleRun, MonitorStaysBelowTheGronwallBound)
{
    const FlowField& f = shared().run;
    const GronwallMonitor m = gronwall_monitor(f, 4, 1.0, 0.125, 1e-3);
    EXPECT_TRUE(m.pass) << m.max_excess;
    EXPECT_GT(m.C_hat, 0.0);
    EXPECT_LT(m.max_boundary_mismatch, 0.1);
    EXPECT_THROW(gronwall_monitor(f, 4, 1.0, 0.125, 0.0), Error);
    // J_eps is nonincreasing in eps frame by frame
    const GronwallMonitor fine = gronwall_monitor(f, 4, 1.0, 0.125, 5e-4);
    for (std::size_t k = 0; k < m.J.size(); ++k) EXPECT_GE(fine.J[k], m.J[k]);
}

TEST(ExampleRun, MonitorOfAStaticStateIsConstant)
{
    Example4Config c = small_config();
    const Grid g = c.grid();
    FlowField f = build_field(g, [](double) { return 1.0; }, [](double r) { return 1e-3 * r; });
    const GronwallMonitor m = gronwall_monitor(f, 4, 1.0, 0.125, 1e-3);
    for (double j : m.J) EXPECT_NEAR(j, m.J.front(), 1e-12 * m.J.front());
    EXPECT_NEAR(m.J.front(), std::pow(1.001, -0.125) * std::numbers::pi * 9.0, 1e-9);
    EXPECT_TRUE(m.pass);
    EXPECT_EQ(m.max_boundary_mismatch, 0.0);
}

TEST(ExampleRun, IntegrabilityBelowAndAboveTheThreshold)
{
    const FlowField& f = shared().run;
    const Example4Config c = small_config();
    const IntegrabilityReport ok = check_uniform_integrability(f, example_kernel(2), 1.0, 0.125, c.delta_seq, c.eps_seq);
    EXPECT_TRUE(ok.jensen_holds);
    EXPECT_TRUE(ok.delta_stable);
    EXPECT_TRUE(ok.uniform);
    EXPECT_FALSE(ok.divergent);
    EXPECT_EQ(ok.rows.size(), 9u);
    for (const auto& r : ok.rows) EXPECT_LE(r.integral, r.jensen_rhs * (1 + 1e-12));
    const IntegrabilityReport bad = check_uniform_integrability(f, example_kernel(2), 1.0, 0.375, c.delta_seq, c.eps_seq);
    EXPECT_TRUE(bad.divergent);
}

TEST(ExampleRun, IntegrabilityRejectsUnsuitableKernels)
{
    const FlowField& f = shared().run;
    EXPECT_THROW(check_uniform_integrability(f, default_kernel(2), 1.0, 0.125, {1e-4}, {0.1, 0.05}), Error);
    EXPECT_THROW(check_uniform_integrability(f, example_kernel(2), 1.0, 0.5, {1e-4}, {0.1, 0.05}), Error);
    EXPECT_THROW(check_uniform_integrability(f, example_kernel(2), 1.0, 0.125, {1e-4}, {0.1}), Error);
}
