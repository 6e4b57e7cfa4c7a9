#pragma once

/**
 * @file exponents.hpp
 * @brief theta thresholds and the (kappa_exp, nu) feasibility windows for
 * the scalings delta = eps^kappa_exp, sigma = eps^nu.
 *
 * kappa_exp is the delta-scaling exponent; the pressure constant is
 * EosParams::kappa. The kappa_exp / q terms of the inequality system use
 * q_tilde, the exponent of the regularised density r_eps^delta.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "eulervac/numerics.hpp"

namespace eulervac {

/// Lower bound on theta for the given (gamma, beta).
inline double theta_threshold(double gamma, double beta)
{
    if (!(gamma > 1.0)) throw Error("theta_threshold: gamma > 1 required");
    const double lo = 1.0 / std::min(2.0, gamma);
    if (!(beta > lo) || beta > 1.0)
        throw Error("theta_threshold: beta must satisfy 1/min{2,gamma} < beta <= 1 (alpha >= beta > 1/min{2,gamma})");
    if (gamma < 2.0)
        return 4.0 * gamma * gamma * (1.0 - beta) / ((gamma - 1.0) * ((gamma - 1.0) * (gamma - 1.0) * beta + 1.0 - beta));
    return 4.0 * gamma / (gamma - 1.0) * (1.0 - beta) / beta;
}

/// (gamma - 2) / (min(gamma, 2) - 1), the sigma exponent of the H_sigma'' bound.
inline double sigma_coefficient(double gamma) { return (gamma - 2.0) / (std::min(gamma, 2.0) - 1.0); }

struct ExponentWindow {
    double gamma = 0.0, alpha = 0.0, beta = 0.0, theta = 0.0, q = 0.0;
    double threshold = 0.0;
    double kappa_lo = 0.0, kappa_hi = 0.0;  ///< open interval for kappa_exp
    double nu_lo = 0.0, nu_hi = 0.0;        ///< open interval for nu
    double p_exp = 0.0;                     ///< (gamma - 1) theta / (4 gamma)
    double q_tilde = 0.0;                   ///< [4 gamma / ((gamma - 1) theta) - 1]^-1; +inf past the pole
    bool q_tilde_unbounded = false;         ///< theta >= 4 gamma / (gamma - 1)
    bool feasible = false;
    std::string reason;
};

struct SlackReport {
    std::vector<std::string> names;
    std::vector<double> slacks;
    bool pass = false;
};

/// The seven inequalities of the full system at (kappa_exp, nu); each slack
/// must be strictly positive.
inline SlackReport verify_full_system(const ExponentWindow& w, double kappa_exp, double nu)
{
    const double c = sigma_coefficient(w.gamma);
    const double m = std::min(w.gamma, 2.0);
    const double kq = w.q_tilde_unbounded ? 0.0 : kappa_exp / w.q_tilde;
    SlackReport r;
    r.names = {"kappa+alpha-1", "kappa+c*nu+beta-1", "nu+beta-1", "-kappa/q~+2alpha-1", "-kappa/q~+min(gamma,2)beta-1",
               "c*nu+2alpha-1", "c*nu+2beta-1"};
    r.slacks = {kappa_exp + w.alpha - 1.0,
                kappa_exp + c * nu + w.beta - 1.0,
                nu + w.beta - 1.0,
                -kq + 2.0 * w.alpha - 1.0,
                -kq + m * w.beta - 1.0,
                c * nu + 2.0 * w.alpha - 1.0,
                c * nu + 2.0 * w.beta - 1.0};
    r.pass = std::all_of(r.slacks.begin(), r.slacks.end(), [](double s) { return s > 0.0; });
    return r;
}

/// The five reduced inequalities (sufficient when alpha >= beta).
inline SlackReport verify_reduced_system(const ExponentWindow& w, double kappa_exp, double nu)
{
    const double c = sigma_coefficient(w.gamma);
    const double m = std::min(w.gamma, 2.0);
    const double kq = w.q_tilde_unbounded ? 0.0 : kappa_exp / w.q_tilde;
    SlackReport r;
    r.names = {"kappa+beta-1", "kappa+c*nu+beta-1", "nu+beta-1", "-kappa/q~+min(gamma,2)beta-1", "c*nu+2beta-1"};
    r.slacks = {kappa_exp + w.beta - 1.0, kappa_exp + c * nu + w.beta - 1.0, nu + w.beta - 1.0, -kq + m * w.beta - 1.0,
                c * nu + 2.0 * w.beta - 1.0};
    r.pass = std::all_of(r.slacks.begin(), r.slacks.end(), [](double s) { return s > 0.0; });
    return r;
}

/// Explicit windows for given (gamma, alpha, beta, theta, q).
inline ExponentWindow solve_window(double gamma, double alpha, double beta, double theta, double q)
{
    ExponentWindow w;
    w.gamma = gamma;
    w.alpha = alpha;
    w.beta = beta;
    w.theta = theta;
    w.q = q;
    w.threshold = theta_threshold(gamma, beta);
    if (alpha < beta || alpha > 1.0) throw Error("solve_window: beta <= alpha <= 1 required");
    if (!(theta > 0.0)) throw Error("solve_window: theta > 0 required");
    if (q < 2.0 * gamma / (gamma - 1.0)) throw Error("solve_window: q >= 2 gamma / (gamma - 1) required");

    w.p_exp = (gamma - 1.0) * theta / (4.0 * gamma);
    const double pole = 4.0 * gamma / ((gamma - 1.0) * theta) - 1.0;
    if (pole > 0.0) {
        w.q_tilde = 1.0 / pole;
    } else {
        w.q_tilde = kInf;
        w.q_tilde_unbounded = true;
    }
    if (gamma < 2.0) {
        w.kappa_lo = gamma * (1.0 - beta) / (gamma - 1.0);
        w.kappa_hi = w.q_tilde * (gamma * beta - 1.0);
        w.nu_lo = 1.0 - beta;
        w.nu_hi = std::min((gamma - 1.0) / (2.0 - gamma) * (2.0 * beta - 1.0), (1.0 - beta) / (2.0 - gamma));
    } else {
        w.kappa_lo = 1.0 - beta;
        w.kappa_hi = w.q_tilde * (2.0 * beta - 1.0);
        w.nu_lo = 1.0 - beta;
        w.nu_hi = kInf;
    }
    if (!(theta > w.threshold)) {
        w.reason = "theta = " + std::to_string(theta) + " does not exceed the threshold " + std::to_string(w.threshold);
        w.feasible = false;
    } else if (!(w.kappa_lo < w.kappa_hi)) {
        w.reason = "empty kappa window";
    } else if (!(w.nu_lo < w.nu_hi)) {
        w.reason = "empty nu window";
    } else {
        w.feasible = true;
    }
    return w;
}

/// Interior sample points of an open interval; unbounded intervals are
/// sampled on (lo, lo + 1).
inline std::vector<double> interval_samples(double lo, double hi, int n)
{
    const double top = std::isinf(hi) ? lo + 1.0 : hi;
    std::vector<double> s;
    for (int j = 1; j <= n; ++j) s.push_back(lo + (top - lo) * j / (n + 1));
    return s;
}

struct WindowCheck {
    int interior_samples = 0;
    int interior_passed = 0;
    /// For every finite endpoint: some sample just outside it fails the full system.
    bool kappa_lo_tight = false, kappa_hi_tight = false, nu_lo_tight = false, nu_hi_tight = false;
    bool pass = false;
};

/// 5 x 5 interior samples must pass; points just outside each finite
/// endpoint must fail for at least one value of the other coordinate.
inline WindowCheck check_window(const ExponentWindow& w, double outside = 1e-6)
{
    WindowCheck c;
    if (!w.feasible) return c;
    const auto ks = interval_samples(w.kappa_lo, w.kappa_hi, 5);
    const auto ns = interval_samples(w.nu_lo, w.nu_hi, 5);
    for (double k : ks)
        for (double n : ns) {
            ++c.interior_samples;
            c.interior_passed += verify_full_system(w, k, n).pass;
        }
    // the other coordinate ranges over the closed interval
    auto closed = [](double lo, double hi) {
        const double top = std::isinf(hi) ? lo + 1.0 : hi;
        std::vector<double> s;
        for (int j = 0; j < 49; ++j) s.push_back(lo + (top - lo) * j / 48.0);
        return s;
    };
    const auto kd = closed(w.kappa_lo, w.kappa_hi);
    const auto nd = closed(w.nu_lo, w.nu_hi);
    auto fails_somewhere = [&](auto&& point) {
        for (std::size_t j = 0; j < 49; ++j) {
            const auto [k, n] = point(j);
            if (!verify_full_system(w, k, n).pass) return true;
        }
        return false;
    };
    c.kappa_lo_tight = fails_somewhere([&](std::size_t j) { return std::pair{w.kappa_lo - outside, nd[j]}; });
    c.kappa_hi_tight = std::isinf(w.kappa_hi) || fails_somewhere([&](std::size_t j) { return std::pair{w.kappa_hi + outside, nd[j]}; });
    c.nu_lo_tight = fails_somewhere([&](std::size_t j) { return std::pair{kd[j], w.nu_lo - outside}; });
    c.nu_hi_tight = std::isinf(w.nu_hi) || fails_somewhere([&](std::size_t j) { return std::pair{kd[j], w.nu_hi + outside}; });
    c.pass = c.interior_passed == c.interior_samples && c.kappa_lo_tight && c.kappa_hi_tight && c.nu_lo_tight && c.nu_hi_tight;
    return c;
}

/// Sampled check that the reduced system implies the full one on a
/// (kappa_exp, nu) grid; returns the number of counterexamples.
inline int reduced_implies_full_counterexamples(const ExponentWindow& w, double kappa_max = 4.0, double nu_max = 4.0, int n = 81)
{
    int bad = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double k = kappa_max * a / (n - 1), nu = nu_max * b / (n - 1);
            if (verify_reduced_system(w, k, nu).pass && !verify_full_system(w, k, nu).pass) ++bad;
        }
    return bad;
}

} // namespace eulervac
