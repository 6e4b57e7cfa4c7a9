#pragma once

/**
 * @file eos.hpp
 * @brief Power-law pressure p = kappa rho^gamma, its potential
 * H = kappa / (gamma - 1) rho^gamma and a C^2 regularisation H_sigma of H
 * together with the matching p_sigma (p_sigma' = z H_sigma'').
 *
 * For 1 < gamma < 2 the second derivative H'' blows up at z = 0. Below the
 * crossover z0 = sigma^(1/(gamma-1)) H_sigma is the quadratic Taylor
 * polynomial of H at z0, so H_sigma'' is the constant H''(z0) there.
 * For gamma >= 2, H'' is bounded on bounded sets and H_sigma = H.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "eulervac/numerics.hpp"

namespace eulervac {

struct EosParams {
    double kappa = 1.0;
    double gamma = 1.4;
    double rho_max = 10.0;

    void validate() const
    {
        if (!(kappa > 0.0)) throw Error("EosParams: kappa > 0 required");
        if (!(gamma > 1.0)) throw Error("EosParams: gamma > 1 required");
        if (!(rho_max > 0.0)) throw Error("EosParams: rho_max > 0 required");
    }

    double pressure(double rho) const { return kappa * std::pow(rho, gamma); }
    double dpressure(double rho) const { return kappa * gamma * std::pow(rho, gamma - 1.0); }
    double potential(double rho) const { return kappa / (gamma - 1.0) * std::pow(rho, gamma); }
    double dpotential(double rho) const { return kappa * gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0); }

    /// H''(z) = kappa gamma z^(gamma-2); infinite at 0 for gamma < 2.
    double d2potential(double rho) const
    {
        if (rho == 0.0) return gamma < 2.0 ? kInf : (gamma == 2.0 ? 2.0 * kappa : 0.0);
        return kappa * gamma * std::pow(rho, gamma - 2.0);
    }

    double sound_speed(double rho) const { return std::sqrt(dpressure(rho)); }
};

inline double pressure(const EosParams& p, double rho)
{
    if (rho < 0.0) throw Error("pressure: negative density");
    return p.pressure(rho);
}

inline double pressure_potential(const EosParams& p, double rho)
{
    if (rho < 0.0) throw Error("pressure_potential: negative density");
    return p.potential(rho);
}

/// Exponent (gamma - 2) / (min(gamma, 2) - 1) of the H_sigma'' bound.
inline double smoothing_exponent(double gamma)
{
    return (gamma - 2.0) / (std::min(gamma, 2.0) - 1.0);
}

struct SmoothedEos {
    EosParams base;
    double sigma = 1.0;
    double z0 = 0.0;  ///< crossover density; 0 when H_sigma = H
    double a1 = 0.0;  ///< sup |H - H_s| + |H' - H_s'| <= a1 sigma
    double a2 = 0.0;  ///< sup |H_s''| <= a2 sigma^((gamma-2)/(min(gamma,2)-1))
    double b = 0.0;   ///< sup |p - p_s| + |p' - p_s'| <= b sigma

    bool exact() const { return z0 == 0.0; }

    double H(double z) const
    {
        if (exact() || z >= z0) return base.potential(z);
        const double d = z - z0;
        return base.potential(z0) + base.dpotential(z0) * d + 0.5 * base.d2potential(z0) * d * d;
    }

    double dH(double z) const
    {
        if (exact() || z >= z0) return base.dpotential(z);
        return base.dpotential(z0) + base.d2potential(z0) * (z - z0);
    }

    double d2H(double z) const
    {
        if (exact()) return base.d2potential(z);
        return z >= z0 ? base.d2potential(z) : base.d2potential(z0);
    }

    /// p_s(z) = p_s(z0) - int_z^z0 s H_s''(s) ds below the crossover.
    double p(double z) const
    {
        if (exact() || z >= z0) return base.pressure(z);
        return base.pressure(z0) - 0.5 * base.d2potential(z0) * (z0 * z0 - z * z);
    }

    double dp(double z) const
    {
        if (exact() || z >= z0) return base.dpressure(z);
        return z * base.d2potential(z0);
    }
};

/// Sup of a continuous function on [a, b]: a uniform scan followed by a
/// golden-section refinement around the best sample.
inline double refined_sup(const std::function<double(double)>& f, double a, double b, int n = 4000)
{
    int best = 0;
    double vbest = f(a);
    for (int j = 1; j <= n; ++j) {
        const double v = f(a + (b - a) * j / n);
        if (v > vbest) vbest = v, best = j;
    }
    double lo = a + (b - a) * std::max(best - 1, 0) / n, hi = a + (b - a) * std::min(best + 1, n) / n;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80 && hi - lo > 0.0; ++it) {
        const double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
        const double fc = f(c), fd = f(d);
        vbest = std::max(vbest, std::max(fc, fd));
        if (fc > fd) hi = d; else lo = c;
    }
    return vbest;
}

/// Construct H_sigma, p_sigma and the error constants. The errors vanish
/// above the crossover, so their sups are taken on [0, z0]; H'' is monotone
/// above z0 and constant below it.
inline SmoothedEos build_smoothed(const EosParams& params, double sigma)
{
    params.validate();
    if (!(sigma > 0.0)) throw Error("build_smoothed: sigma must be positive");
    if (sigma > 1.0) throw Error("build_smoothed: sigma must lie in (0, 1]");
    SmoothedEos s;
    s.base = params;
    s.sigma = sigma;
    if (params.gamma < 2.0) s.z0 = std::pow(sigma, 1.0 / (params.gamma - 1.0));

    double sup_h = 0.0, sup_p = 0.0, sup_d2 = 0.0;
    if (!s.exact()) {
        const double top = std::min(params.rho_max, s.z0);
        sup_h = refined_sup([&](double z) { return std::abs(params.potential(z) - s.H(z)) + std::abs(params.dpotential(z) - s.dH(z)); }, 0.0, top);
        sup_p = refined_sup([&](double z) { return std::abs(params.pressure(z) - s.p(z)) + std::abs(params.dpressure(z) - s.dp(z)); }, 0.0, top);
        sup_d2 = std::abs(s.d2H(top));
    } else {
        sup_d2 = std::abs(params.d2potential(params.rho_max));
    }
    s.a1 = sup_h / sigma;
    s.b = sup_p / sigma;
    s.a2 = sup_d2 / std::pow(sigma, smoothing_exponent(params.gamma));
    return s;
}

} // namespace eulervac
