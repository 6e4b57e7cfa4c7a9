#include <gtest/gtest.h>

#include <cmath>

#include "eulervac/exponents.hpp"

using namespace eulervac;

TEST(ThetaThreshold, ClosedFormValues)
{
    EXPECT_NEAR(theta_threshold(3.0, 0.8), 1.5, 1e-14);
    EXPECT_EQ(theta_threshold(2.0, 1.0), 0.0);
    EXPECT_EQ(theta_threshold(4.0, 1.0), 0.0);
    EXPECT_NEAR(theta_threshold(1.5, 0.75), 2.25 / 0.21875, 1e-12);
    EXPECT_NEAR(theta_threshold(1.5, 0.75), 10.2857, 1e-4);
}

TEST(ThetaThreshold, RejectsBetaOutsideRange)
{
    EXPECT_THROW(theta_threshold(3.0, 0.5), Error);
    EXPECT_THROW(theta_threshold(1.5, 0.6), Error);
    EXPECT_THROW(theta_threshold(1.5, 1.1), Error);
    EXPECT_THROW(theta_threshold(1.0, 0.9), Error);
}

TEST(ThetaThreshold, NonincreasingInBeta)
{
    for (double gamma : {1.2, 1.5, 1.9, 2.0, 3.0, 5.0}) {
        const double lo = 1.0 / std::min(2.0, gamma);
        double prev = kInf;
        for (int j = 1; j <= 200; ++j) {
            const double beta = lo + (1.0 - lo) * j / 200.0;
            const double t = theta_threshold(gamma, beta);
            EXPECT_LE(t, prev * (1 + 1e-14)) << gamma << " " << beta;
            prev = t;
        }
    }
}

TEST(SolveWindow, GammaThree)
{
    const ExponentWindow w = solve_window(3.0, 0.8, 0.8, 2.0, 3.0);
    EXPECT_TRUE(w.feasible) << w.reason;
    EXPECT_NEAR(w.q_tilde, 0.5, 1e-14);
    EXPECT_NEAR(w.p_exp, 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(w.kappa_lo, 0.2, 1e-14);
    EXPECT_NEAR(w.kappa_hi, 0.3, 1e-14);
    EXPECT_NEAR(w.nu_lo, 0.2, 1e-14);
    EXPECT_TRUE(std::isinf(w.nu_hi));
    EXPECT_TRUE(check_window(w).pass);
}

TEST(SolveWindow, GammaOneAndAHalf)
{
    const ExponentWindow w = solve_window(1.5, 0.75, 0.75, 11.0, 6.0);
    EXPECT_TRUE(w.feasible) << w.reason;
    EXPECT_NEAR(w.q_tilde, 11.0, 1e-12);
    EXPECT_NEAR(w.kappa_lo, 0.75, 1e-14);
    EXPECT_NEAR(w.kappa_hi, 1.375, 1e-12);
    EXPECT_NEAR(w.nu_lo, 0.25, 1e-14);
    EXPECT_NEAR(w.nu_hi, 0.5, 1e-14);
    const WindowCheck c = check_window(w);
    EXPECT_EQ(c.interior_samples, 25);
    EXPECT_EQ(c.interior_passed, 25);
    EXPECT_TRUE(c.kappa_lo_tight && c.kappa_hi_tight && c.nu_lo_tight && c.nu_hi_tight);
}

TEST(SolveWindow, BelowThresholdIsInfeasible)
{
    const ExponentWindow w = solve_window(3.0, 0.8, 0.8, 1.4, 3.0);
    EXPECT_FALSE(w.feasible);
    EXPECT_NE(w.reason.find("threshold"), std::string::npos);
    EXPECT_FALSE(check_window(w).pass);
}

TEST(SolveWindow, PastThePoleTheKappaWindowIsUnbounded)
{
    // 4 gamma / (gamma - 1) = 6 for gamma = 3
    const ExponentWindow w = solve_window(3.0, 0.8, 0.8, 6.5, 3.0);
    EXPECT_TRUE(w.q_tilde_unbounded);
    EXPECT_TRUE(std::isinf(w.kappa_hi));
    EXPECT_TRUE(w.feasible);
    EXPECT_TRUE(check_window(w).pass);
}

TEST(SolveWindow, RejectsInvalidInputs)
{
    EXPECT_THROW(solve_window(3.0, 0.8, 0.5, 2.0, 3.0), Error);
    EXPECT_THROW(solve_window(3.0, 0.7, 0.8, 2.0, 3.0), Error);
    EXPECT_THROW(solve_window(3.0, 0.8, 0.8, 2.0, 2.9), Error);
    EXPECT_THROW(solve_window(3.0, 0.8, 0.8, 0.0, 3.0), Error);
}

TEST(FullSystem, SpotValues)
{
    const ExponentWindow w = solve_window(3.0, 0.8, 0.8, 2.0, 3.0);
    const SlackReport r = verify_full_system(w, 0.25, 0.3);
    ASSERT_EQ(r.slacks.size(), 7u);
    for (double s : r.slacks) EXPECT_GT(s, 0.0);
    EXPECT_TRUE(r.pass);
    const SlackReport z = verify_full_system(w, 0.0, 0.3);
    EXPECT_FALSE(z.pass);
    EXPECT_NEAR(z.slacks[0], 0.8 - 1.0, 1e-15);
}

TEST(FullSystem, NuConstraintBindsForGammaAtLeastTwo)
{
    for (double gamma : {2.0, 3.0, 4.0}) {
        const ExponentWindow w = solve_window(gamma, 0.9, 0.9, 2.0 * theta_threshold(gamma, 0.9) + 0.1, 2.0 * gamma / (gamma - 1.0));
        ASSERT_TRUE(w.feasible);
        EXPECT_GE(sigma_coefficient(gamma), 0.0);
        const double kappa = 0.5 * (w.kappa_lo + std::min(w.kappa_hi, w.kappa_lo + 1.0));
        for (double nu : {0.1 + 1e-9, 0.2, 1.0, 10.0, 100.0}) EXPECT_TRUE(verify_full_system(w, kappa, nu).pass) << gamma << " " << nu;
        EXPECT_FALSE(verify_full_system(w, kappa, 0.1 - 1e-9).pass);
    }
}

TEST(ReducedSystem, SufficientWhenAlphaAtLeastBeta)
{
    for (const auto& [gamma, alpha, beta] : {std::tuple{3.0, 0.8, 0.8}, std::tuple{3.0, 0.95, 0.8}, std::tuple{1.5, 0.75, 0.75},
                                             std::tuple{1.5, 0.9, 0.8}, std::tuple{1.8, 0.85, 0.7}}) {
        const ExponentWindow w = solve_window(gamma, alpha, beta, theta_threshold(gamma, beta) + 0.5, 2.0 * gamma / (gamma - 1.0));
        EXPECT_EQ(reduced_implies_full_counterexamples(w), 0) << gamma << " " << alpha << " " << beta;
    }
}
