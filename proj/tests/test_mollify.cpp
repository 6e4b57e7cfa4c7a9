#include <gtest/gtest.h>

#include <cmath>

#include "eulervac/mollify.hpp"

using namespace eulervac;

namespace {

Grid line_grid(int n = 200, int frames = 41) { return Grid{1, 0.0, 1.0, n, 0.0, 1.0, frames}; }

FlowField field_of(const Grid& g, std::function<double(double, double)> rho)
{
    return build_field(g, rho, [](double, double) { return 0.0; });
}

} // namespace

TEST(Kernel, NormalizedUnderIndependentQuadrature)
{
    for (auto prof : {KernelProfile::polynomial_bump, KernelProfile::one_sided})
        for (int dim : {1, 2})
            for (double l : {0.5, 1.0, 2.0}) {
                const MollifierKernel k = make_kernel(prof, dim, l);
                EXPECT_NEAR(k.normalization, 1.0, 1e-10) << to_string(prof) << " dim " << dim << " l " << l;
            }
}

TEST(Kernel, OneSidedSupportAndInverseIntegral)
{
    const MollifierKernel k = make_kernel(KernelProfile::one_sided, 2);
    EXPECT_EQ(k.time_profile(-0.1), 0.0);
    EXPECT_EQ(k.time_profile(1.0), 0.0);
    EXPECT_GT(k.time_profile(0.5), 0.0);
    EXPECT_EQ(k.space_profile(1.0), 0.0);
    const double a = inverse_power_integral(k, 0.25, 0.0);
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_GT(a, 0.0);
    EXPECT_LT(inverse_power_integral(k, 0.25, 1.0), a);
    EXPECT_THROW(inverse_power_integral(k, 0.5, 0.0), Error);
    EXPECT_THROW(inverse_power_integral(default_kernel(1), 0.25, 0.0), Error);
}

TEST(Mollify, ConstantPreservedOnInterior)
{
    const Grid g = line_grid();
    const FlowField f = field_of(g, [](double, double) { return 2.5; });
    const double eps = 0.05;
    const ScalarField m = mollify(density_of(f), default_kernel(1), eps);
    for (int k = 0; k < g.n_steps; ++k)
        for (int i = 0; i < g.n_cells; ++i) {
            const bool inner = g.t(k) > eps + 1e-12 && g.t(k) < 1.0 - eps - 1e-12 && g.x(i) > eps && g.x(i) < 1.0 - eps;
            if (inner) {
                EXPECT_NEAR(m.at(k, i), 2.5, 1e-13);
            }
        }
}

TEST(Mollify, LinearFieldReproducedOnInterior)
{
    const Grid g = line_grid();
    const FlowField f = field_of(g, [](double, double x) { return x; });
    const double eps = 0.05;
    const MollifierKernel k = default_kernel(1);
    const ScalarField m = mollify(density_of(f), k, eps);
    const ScalarField d = mollify_dx(density_of(f), k, eps);
    for (int kk = 0; kk < g.n_steps; ++kk)
        for (int i = 0; i < g.n_cells; ++i) {
            const bool inner = g.t(kk) > eps + 1e-12 && g.t(kk) < 1.0 - eps - 1e-12 && g.x(i) > eps && g.x(i) < 1.0 - eps;
            if (!inner) continue;
            EXPECT_NEAR(m.at(kk, i), g.x(i), 1e-8);
            EXPECT_NEAR(d.at(kk, i), 1.0, 1e-6);
        }
}

TEST(Mollify, GradientOfConstantVanishes)
{
    const Grid g = line_grid();
    FlowField f = field_of(g, [](double, double) { return 3.0; });
    f.space_ext = Extension::constant;
    const ScalarField d = gradient_mollified(f, default_kernel(1), 0.04);
    for (double v : d.values) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(Mollify, GradientOfStepStaysBoundedInL1)
{
    Profile step = sample_profile(-1.0, 1.0, 2048, [](double x) { return x < 0.0 ? 1.0 : 0.0; });
    step.ext = Extension::constant;
    const MollifierKernel k = default_kernel(1);
    for (int j = 3; j <= 8; ++j) {
        const Profile gp = gradient_profile(step, k, std::ldexp(1.0, -j));
        double l1 = 0.0;
        for (double v : gp.values) l1 += std::abs(v) * step.dx;
        // total variation of the data is 1
        EXPECT_NEAR(l1, 1.0, 1e-6) << j;
    }
}

TEST(Mollify, SupportGrowsByAtMostLEps)
{
    const Grid g = line_grid(400, 3);
    const FlowField f = field_of(g, [](double, double x) { return std::abs(x - 0.5) < 0.1 ? 1.0 : 0.0; });
    const double eps = 0.03;
    const ScalarField m = mollify(density_of(f), default_kernel(1), eps);
    for (int i = 0; i < g.n_cells; ++i)
        if (std::abs(g.x(i) - 0.5) > 0.1 + eps + g.dx()) {
            EXPECT_EQ(m.at(1, i), 0.0) << i;
        }
}

TEST(Mollify, LinearityAndTranslation)
{
    const Grid g = line_grid(256, 33);
    auto a = [](double t, double x) { return std::sin(9 * x) + t; };
    auto b = [](double t, double x) { return x * x * (1 + t); };
    const FlowField fa = field_of(g, [&](double t, double x) { return 2.0 + a(t, x); });
    const FlowField fb = field_of(g, [&](double t, double x) { return b(t, x); });
    FlowField fc = fa;
    for (std::size_t j = 0; j < fc.rho.size(); ++j) fc.rho[j] = 3.0 * fa.rho[j] - 0.5 * fb.rho[j];
    const MollifierKernel k = default_kernel(1);
    const double eps = 0.06;
    const ScalarField ma = mollify(density_of(fa), k, eps), mb = mollify(density_of(fb), k, eps), mc = mollify(density_of(fc), k, eps);
    for (std::size_t j = 0; j < mc.values.size(); ++j) EXPECT_NEAR(mc.values[j], 3.0 * ma.values[j] - 0.5 * mb.values[j], 1e-12);

    // shifting the data by m cells shifts the result on interior cells
    Profile p = sample_profile(0.0, 1.0, 512, [](double x) { return std::exp(-60 * (x - 0.4) * (x - 0.4)); });
    Profile q = p;
    const int m = 37;
    for (int i = 0; i < q.size(); ++i) q.values[i] = i >= m ? p.values[i - m] : 0.0;
    const Profile mp = mollify_profile(p, k, 0.05), mq = mollify_profile(q, k, 0.05);
    for (int i = 80; i < 400; ++i) EXPECT_NEAR(mq.values[i], mp.values[i - m], 1e-14);
}

TEST(Mollify, YoungInequality)
{
    const Profile p = sample_profile(0.0, 1.0, 1024, [](double x) { return std::abs(std::sin(13 * x)) * (x < 0.7 ? 1.0 : -2.0); });
    const MollifierKernel k = default_kernel(1);
    std::vector<double> w(p.size(), p.dx);
    for (double q : {1.0, 2.0, 4.0}) {
        const Profile m = mollify_profile(p, k, 0.03);
        EXPECT_LE(lq_norm(m.values, w, q), lq_norm(p.values, w, q) * (1 + 1e-12));
    }
}

TEST(Mollify, UnderResolvedKernelRejected)
{
    const Grid g = line_grid(100, 5);
    const FlowField f = field_of(g, [](double, double) { return 1.0; });
    EXPECT_THROW(mollify(density_of(f), default_kernel(1), 0.005), Error);
    EXPECT_THROW(mollify(density_of(f), default_kernel(2), 0.05), Error);
}

TEST(VacuumMask, PositiveAndEmptyFields)
{
    const Grid g = line_grid(100, 11);
    const VacuumNeighborhood all = vacuum_mask(field_of(g, [](double, double) { return 0.2; }), default_kernel(1), 0.05, 0.0, 1.0);
    EXPECT_EQ(all.count(), g.size());
    const VacuumNeighborhood none = vacuum_mask(field_of(g, [](double, double) { return 0.0; }), default_kernel(1), 0.05, 0.0, 1.0);
    EXPECT_EQ(none.count(), 0u);
    EXPECT_THROW(vacuum_mask(field_of(g, [](double, double) { return 0.0; }), default_kernel(1), 0.05, 0.5, 0.5), Error);
}

TEST(VacuumMask, ExpandingBallEdge)
{
    // rho = ((1 + t) R - r)_+^N: the product kernel reaches the support
    // radius (1 + t + l eps) R + l eps at time t, less one frame because the
    // time weight vanishes at the edge of its support
    const double R = 1.0, eps = 0.05;
    const Grid g{2, 0.0, 3.0, 600, 0.0, 1.0, 41};
    const FlowField f = field_of(g, [&](double t, double r) { return std::pow(std::max((1 + t) * R - r, 0.0), 4); });
    const VacuumNeighborhood w = vacuum_mask(f, default_kernel(2), eps, 0.0, 1.0);
    for (int k = 10; k < 30; ++k) {
        int last = -1;
        for (int i = 0; i < g.n_cells; ++i)
            if (w.contains(k, i)) last = i;
        const double edge = (1 + g.t(k) + eps) * R + eps;
        EXPECT_LE(g.x(last), edge + g.dx()) << k;
        EXPECT_GE(g.x(last), edge - g.dt() * R - g.dx()) << k;
    }
}
