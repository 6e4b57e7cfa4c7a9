#pragma once

/**
 * @file commutator.hpp
 * @brief The commutator grad(G(f, g)_eps) - grad(G(f_eps, g_eps)) of a
 * nonlinearity with mollification, its three-term rearrangement and a rate
 * harness fitting the L^(q/2) norm against eps.
 *
 * Data are static 1D profiles. grad G(f_eps, g_eps) is taken by the chain
 * rule with kernel-differentiated grad f_eps, grad g_eps, so that
 *
 *   I   = grad G(f,g)_eps - D_f G(f,g) grad f_eps - D_g G(f,g) grad g_eps
 *   II  = [D_f G(f,g) - D_f G(f_eps,g_eps)] grad f_eps
 *   III = [D_g G(f,g) - D_g G(f_eps,g_eps)] grad g_eps
 *
 * sum exactly (up to rounding) to the commutator.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <random>
#include <utility>
#include <string>
#include <vector>

#include "eulervac/mollify.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

struct Nonlinearity {
    std::string name;
    std::function<double(double f, double g)> evaluate;
    std::function<double(double f, double g)> d_f;
    std::function<double(double f, double g)> d_g;
    double eta_holder = 1.0;  ///< Hoelder exponent of D_f G in f
};

/// G = a f + b g + c.
inline Nonlinearity affine_nonlinearity(double a, double b, double c = 0.0)
{
    return {"affine", [=](double f, double g) { return a * f + b * g + c; }, [=](double, double) { return a; },
            [=](double, double) { return b; }, 1.0};
}

/// G = f g.
inline Nonlinearity product_nonlinearity()
{
    return {"product", [](double f, double g) { return f * g; }, [](double, double g) { return g; },
            [](double f, double) { return f; }, 1.0};
}

/// G = kappa f^gamma, g unused. D_f G is (min(gamma, 2) - 1)-Hoelder on bounded sets.
inline Nonlinearity pressure_nonlinearity(double kappa, double gamma)
{
    if (!(gamma > 1.0)) throw Error("pressure_nonlinearity: gamma > 1 required");
    return {"pressure", [=](double f, double) { return kappa * std::pow(f, gamma); },
            [=](double f, double) { return kappa * gamma * std::pow(f, gamma - 1.0); }, [](double, double) { return 0.0; },
            std::min(gamma, 2.0) - 1.0};
}

/// Sampled sup |D_f G(f1, g) - D_f G(f2, g)| / |f1 - f2|^eta over
/// f1 != f2 in [0, f_max], |g| <= g_max.
inline double sample_holder_constant(const Nonlinearity& G, double f_max, double g_max, int n = 41)
{
    double sup = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; c += 4) {
                const double f1 = f_max * a / (n - 1), f2 = f_max * b / (n - 1);
                const double g = g_max * (2.0 * c / (n - 1) - 1.0);
                sup = std::max(sup, std::abs(G.d_f(f1, g) - G.d_f(f2, g)) / std::pow(std::abs(f1 - f2), G.eta_holder));
            }
    return sup;
}

/// Largest relative mismatch between d_f, d_g and central differences of
/// evaluate over the sample points.
inline double derivative_mismatch(const Nonlinearity& G, const std::vector<std::pair<double, double>>& points)
{
    double worst = 0.0;
    for (const auto& [f, g] : points) {
        const double hf = 1e-6 * std::max(1.0, std::abs(f));
        const double hg = 1e-6 * std::max(1.0, std::abs(g));
        const double fd_f = (G.evaluate(f + hf, g) - G.evaluate(f - hf, g)) / (2.0 * hf);
        const double fd_g = (G.evaluate(f, g + hg) - G.evaluate(f, g - hg)) / (2.0 * hg);
        worst = std::max(worst, std::abs(fd_f - G.d_f(f, g)) / std::max(1.0, std::abs(G.d_f(f, g))));
        worst = std::max(worst, std::abs(fd_g - G.d_g(f, g)) / std::max(1.0, std::abs(G.d_g(f, g))));
    }
    return worst;
}

struct CommutatorField {
    double epsilon = 0.0;
    std::vector<double> total;  ///< the commutator, all cells
    std::vector<double> term1;
    std::vector<double> term2;
    std::vector<double> term3;
    std::pair<int, int> window;  ///< cells at distance > eps l from the data boundary

    /// max |I + II + III - total| over the window.
    double rearrangement_defect() const
    {
        double d = 0.0;
        for (int i = window.first; i < window.second; ++i)
            d = std::max(d, std::abs(term1[i] + term2[i] + term3[i] - total[i]));
        return d;
    }
};

inline CommutatorField commutator_field(const Profile& f, const Profile& g, const Nonlinearity& G, const MollifierKernel& k,
                                        double eps)
{
    if (f.size() != g.size() || f.dx != g.dx || f.x_min != g.x_min) throw Error("commutator_field: f and g must share a grid");
    for (int i = 0; i < f.size(); ++i)
        if (f.values[i] < 0.0) throw Error("commutator_field: f < 0 at cell " + std::to_string(i));
    Profile gfg = f;
    for (int i = 0; i < f.size(); ++i) gfg.values[i] = G.evaluate(f.values[i], g.values[i]);
    const Profile grad_G = gradient_profile(gfg, k, eps);
    const Profile fe = mollify_profile(f, k, eps), ge = mollify_profile(g, k, eps);
    const Profile dfe = gradient_profile(f, k, eps), dge = gradient_profile(g, k, eps);

    CommutatorField c;
    c.epsilon = eps;
    c.window = interior_range(f, k, eps);
    const int n = f.size();
    c.total.resize(n);
    c.term1.resize(n);
    c.term2.resize(n);
    c.term3.resize(n);
    for (int i = 0; i < n; ++i) {
        const double fi = f.values[i], gi = g.values[i];
        const double Df = G.d_f(fi, gi), Dg = G.d_g(fi, gi);
        const double Dfe = G.d_f(fe.values[i], ge.values[i]), Dge = G.d_g(fe.values[i], ge.values[i]);
        c.total[i] = grad_G.values[i] - (Dfe * dfe.values[i] + Dge * dge.values[i]);
        c.term1[i] = grad_G.values[i] - (Df * dfe.values[i] + Dg * dge.values[i]);
        c.term2[i] = (Df - Dfe) * dfe.values[i];
        c.term3[i] = (Dg - Dge) * dge.values[i];
    }
    return c;
}

struct RateReport {
    std::vector<double> eps_sequence;
    std::vector<double> measured_norms;
    double fitted_slope = 0.0;
    double predicted_slope = 0.0;
    double tol = 0.1;
    bool vacuous = false;  ///< predicted exponent <= 0: no decay is claimed
    bool pass = false;
};

/// min{alpha1 (1 + eta) - 1, 2 alpha2 - 1}.
inline double predicted_commutator_slope(double alpha1, double alpha2, double eta)
{
    return std::min(alpha1 * (1.0 + eta) - 1.0, 2.0 * alpha2 - 1.0);
}

/// Fit the L^(q/2) norm of the commutator over [x_lo, x_hi] against eps.
/// The first (largest) epsilon is excluded from the fit.
inline RateReport measure_rate(const Profile& f, const Profile& g, const Nonlinearity& G, const MollifierKernel& k, double alpha1,
                               double alpha2, double q, std::vector<double> eps_sequence, double x_lo, double x_hi,
                               double tol = 0.1)
{
    if (!(q >= 2.0)) throw Error("measure_rate: q >= 2 required");
    if (eps_sequence.size() < 4) throw Error("measure_rate: need at least 4 epsilons");
    std::sort(eps_sequence.begin(), eps_sequence.end(), std::greater<>());
    const int lo = static_cast<int>(std::ceil((x_lo - f.x_min) / f.dx - 0.5));
    const int hi = static_cast<int>(std::floor((x_hi - f.x_min) / f.dx - 0.5)) + 1;
    const auto [ilo, ihi] = interior_range(f, k, eps_sequence.front());
    if (!(x_lo < x_hi) || lo < ilo || hi > ihi) throw Error("measure_rate: window must lie strictly inside the data domain");

    RateReport r;
    r.eps_sequence = eps_sequence;
    r.tol = tol;
    r.predicted_slope = predicted_commutator_slope(alpha1, alpha2, G.eta_holder);
    r.vacuous = r.predicted_slope <= 0.0;
    for (double eps : eps_sequence) {
        const CommutatorField c = commutator_field(f, g, G, k, eps);
        std::vector<double> v(c.total.begin() + lo, c.total.begin() + hi), w(hi - lo, f.dx);
        r.measured_norms.push_back(lq_norm(v, w, 0.5 * q));
    }
    std::vector<double> fe(r.eps_sequence.begin() + 1, r.eps_sequence.end());
    std::vector<double> fn(r.measured_norms.begin() + 1, r.measured_norms.end());
    if (std::all_of(fn.begin(), fn.end(), [](double x) { return x == 0.0; })) {
        r.fitted_slope = kInf;
    } else {
        r.fitted_slope = loglog_slope(fe, fn);
    }
    r.pass = r.vacuous || r.fitted_slope >= r.predicted_slope - tol;
    return r;
}

// ---------------------------------------------------------------------------
// Test-function library with prescribed regularity.

/// |x - x0|^alpha.
inline std::function<double(double)> cusp(double x0, double alpha)
{
    return [=](double x) { return std::pow(std::abs(x - x0), alpha); };
}

/// Distance to the nearest integer (1-periodic Lipschitz sawtooth).
inline double sawtooth(double x) { return std::abs(x - std::round(x)); }

/// sum_{k=0}^{levels-1} 2^(-alpha k) saw(2^k (x + phase)): exact B^{alpha,inf} scaling
/// down to the finest level.
inline std::function<double(double)> weierstrass_sawtooth(double alpha, int levels, double phase = 0.0)
{
    return [=](double x) {
        double s = 0.0;
        for (int k = 0; k < levels; ++k) s += std::pow(2.0, -alpha * k) * sawtooth(std::ldexp(x + phase, k));
        return s;
    };
}

/// Weierstrass-type field with an independent uniform phase per level,
/// drawn from mt19937_64(seed). Breaks the log-periodic oscillation of the
/// fixed-phase sum while keeping the same level-wise amplitudes.
inline std::function<double(double)> random_phase_weierstrass(double alpha, int levels, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<double> phase(levels);
    for (double& p : phase) p = std::ldexp(static_cast<double>(rng() >> 11), -53);
    return [=](double x) {
        double s = 0.0;
        for (int k = 0; k < levels; ++k) s += std::pow(2.0, -alpha * k) * sawtooth(std::ldexp(x, k) + phase[k]);
        return s;
    };
}

/// measure_rate over an ensemble of (f, g) pairs: the per-eps norms are
/// combined by root mean square before the fit (first eps excluded as in
/// measure_rate).
inline RateReport ensemble_rate(const std::vector<std::pair<Profile, Profile>>& pairs, const Nonlinearity& G, const MollifierKernel& k,
                                double alpha1, double alpha2, double q, const std::vector<double>& eps_sequence, double x_lo,
                                double x_hi, double tol = 0.1)
{
    if (pairs.empty()) throw Error("ensemble_rate: empty ensemble");
    RateReport out;
    std::vector<double> sq;
    for (const auto& [f, g] : pairs) {
        const RateReport r = measure_rate(f, g, G, k, alpha1, alpha2, q, eps_sequence, x_lo, x_hi, tol);
        if (sq.empty()) {
            out = r;
            sq.assign(r.measured_norms.size(), 0.0);
        }
        for (std::size_t j = 0; j < sq.size(); ++j) sq[j] += r.measured_norms[j] * r.measured_norms[j];
    }
    for (std::size_t j = 0; j < sq.size(); ++j) out.measured_norms[j] = std::sqrt(sq[j] / pairs.size());
    std::vector<double> fe(out.eps_sequence.begin() + 1, out.eps_sequence.end());
    std::vector<double> fn(out.measured_norms.begin() + 1, out.measured_norms.end());
    out.fitted_slope = std::all_of(fn.begin(), fn.end(), [](double x) { return x == 0.0; }) ? kInf : loglog_slope(fe, fn);
    out.pass = out.vacuous || out.fitted_slope >= out.predicted_slope - tol;
    return out;
}

} // namespace eulervac
