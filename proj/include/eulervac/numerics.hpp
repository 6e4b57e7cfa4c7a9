#pragma once

/**
 * @file numerics.hpp
 * @brief Small numerical helpers shared by every module: deterministic
 * summation, L^q norms, log-log slope fits and the polynomial bumps used
 * as kernels and test functions.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulervac {

/// Base exception for precondition and contract violations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal invariant breaks (never for bad user input).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Pairwise (cascade) summation in a fixed order; the result depends only
/// on the input sequence, never on scheduling.
inline double pairwise_sum(std::span<const double> v)
{
    const std::size_t n = v.size();
    if (n <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v)
{
    return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

/// Weighted L^q norm (sum_i w_i |f_i|^q)^{1/q}; q = inf gives the max norm
/// over entries with positive weight.
inline double lq_norm(std::span<const double> f, std::span<const double> w, double q)
{
    if (f.size() != w.size()) throw Error("lq_norm: size mismatch");
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (w[i] > 0.0) m = std::max(m, std::abs(f[i]));
        return m;
    }
    if (q < 1.0) throw Error("lq_norm: q must be >= 1");
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        terms[i] = w[i] * std::pow(std::abs(f[i]), q);
    return std::pow(pairwise_sum(terms), 1.0 / q);
}

/// Least-squares slope of log(y) against log(x). Entries with y <= 0 are an
/// error; callers decide how to treat vanishing norms before fitting.
inline double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need >= 2 paired samples");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("loglog_slope: non-positive sample");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw Error("loglog_slope: degenerate abscissae");
    return sxy / sxx;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    return loglog_slope(std::span<const double>(x), std::span<const double>(y));
}

/// (1 - s^2)^k on |s| < 1, zero outside.
inline double poly_bump(double s, int k)
{
    const double a = 1.0 - s * s;
    return a > 0.0 ? std::pow(a, k) : 0.0;
}

/// d/ds (1 - s^2)^k.
inline double poly_bump_deriv(double s, int k)
{
    const double a = 1.0 - s * s;
    if (a <= 0.0) return 0.0;
    return -2.0 * k * s * std::pow(a, k - 1);
}

/// Dyadic sequence {2^-k : k = k_lo..k_hi}, largest first.
inline std::vector<double> dyadic(int k_lo, int k_hi)
{
    std::vector<double> out;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

/// Trapezoid weights for n uniformly spaced samples with spacing h.
inline std::vector<double> trapezoid_weights(std::size_t n, double h)
{
    std::vector<double> w(n, h);
    if (n == 1) {
        w[0] = 0.0;
        return w;
    }
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

/// Gauss-Legendre nodes and weights on [a, b].
inline void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = 0.5 * (a + b) - 0.5 * (b - a) * z;
        weights[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
}

inline bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace eulervac
