#pragma once

/**
 * @file besov.hpp
 * @brief Finite-difference Besov seminorm estimates and the two
 * mollification-rate checks ||u_eps - u||_q <~ eps^alpha and
 * ||grad u_eps||_q <~ eps^(alpha - 1).
 *
 * Membership is treated operationally: only those two inequalities are
 * consumed downstream, the seminorm is a sup of ||Delta_h u||_q / |h|^alpha
 * over a finite shift set.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/mollify.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

struct BesovSample {
    double h = 0.0;
    double norm = 0.0;  ///< ||u(. + h) - u||_{L^q}
    bool time_shift = false;
};

struct BesovEstimate {
    double alpha = 0.0;
    double q = 2.0;
    double seminorm = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    std::vector<BesovSample> samples;
};

/// Dyadic cell offsets 1, 2, 4, ... up to min(2^7, n / 4).
inline std::vector<int> default_shifts(int n_cells)
{
    std::vector<int> s;
    for (int h = 1; h <= 128 && h <= n_cells / 4; h *= 2) s.push_back(h);
    return s;
}

namespace detail {

inline void check_besov_args(double alpha, double q)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("estimate_seminorm: alpha must lie in (0, 1)");
    if (!(q >= 1.0)) throw Error("estimate_seminorm: q must be >= 1");
}

inline void finish_estimate(BesovEstimate& e)
{
    e.h_min = kInf;
    e.h_max = 0.0;
    for (const auto& s : e.samples) {
        e.seminorm = std::max(e.seminorm, s.norm / std::pow(s.h, e.alpha));
        e.h_min = std::min(e.h_min, s.h);
        e.h_max = std::max(e.h_max, s.h);
    }
}

} // namespace detail

/// Seminorm of a static profile over the given cell shifts.
inline BesovEstimate estimate_seminorm(const Profile& u, double alpha, double q, const std::vector<int>& shifts)
{
    detail::check_besov_args(alpha, q);
    if (shifts.empty()) throw Error("estimate_seminorm: empty shift set");
    BesovEstimate e;
    e.alpha = alpha;
    e.q = q;
    const int n = u.size();
    for (int s : shifts) {
        if (s <= 0 || s >= n) throw Error("estimate_seminorm: shift outside the grid interior");
        std::vector<double> d(n - s), w(n - s, u.dx);
        for (int i = 0; i + s < n; ++i) d[i] = u.values[i + s] - u.values[i];
        e.samples.push_back({s * u.dx, lq_norm(d, w, q), false});
    }
    detail::finish_estimate(e);
    return e;
}

/// Space-time version: space shifts in cells and time shifts in frames,
/// norms taken over the overlap with weight dx dt.
inline BesovEstimate estimate_seminorm(const ScalarField& u, double alpha, double q, const std::vector<int>& space_shifts,
                                       const std::vector<int>& time_shifts = {})
{
    detail::check_besov_args(alpha, q);
    if (space_shifts.empty() && time_shifts.empty()) throw Error("estimate_seminorm: empty shift set");
    const Grid& g = u.grid;
    BesovEstimate e;
    e.alpha = alpha;
    e.q = q;
    const double cell = g.dx() * g.dt();
    for (int s : space_shifts) {
        if (s <= 0 || s >= g.n_cells) throw Error("estimate_seminorm: shift outside the grid interior");
        std::vector<double> d, w;
        for (int k = 0; k < g.n_steps; ++k)
            for (int i = 0; i + s < g.n_cells; ++i) {
                d.push_back(u.at(k, i + s) - u.at(k, i));
                w.push_back(cell);
            }
        e.samples.push_back({s * g.dx(), lq_norm(d, w, q), false});
    }
    for (int s : time_shifts) {
        if (s <= 0 || s >= g.n_steps) throw Error("estimate_seminorm: shift outside the grid interior");
        std::vector<double> d, w;
        for (int k = 0; k + s < g.n_steps; ++k)
            for (int i = 0; i < g.n_cells; ++i) {
                d.push_back(u.at(k + s, i) - u.at(k, i));
                w.push_back(cell);
            }
        e.samples.push_back({s * g.dt(), lq_norm(d, w, q), true});
    }
    detail::finish_estimate(e);
    return e;
}

struct MollificationRateReport {
    double alpha = 0.0;
    double q = 2.0;
    double tol = 0.05;
    std::vector<double> eps;
    std::vector<double> error_norms;     ///< ||u_eps - u||_{L^q(Omega_eps)}
    std::vector<double> gradient_norms;  ///< ||grad u_eps||_{L^q(Omega_eps)}
    std::optional<double> error_slope;     ///< empty when all error norms vanish
    std::optional<double> gradient_slope;  ///< empty when all gradient norms vanish
    std::pair<int, int> window;            ///< cell range the norms are taken over
    bool pass = false;
};

namespace detail {
inline std::optional<double> fit_or_skip(const std::vector<double>& eps, const std::vector<double>& v, double scale)
{
    const double tiny = 1e-13 * std::max(1.0, scale);
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x <= tiny; })) return std::nullopt;
    return loglog_slope(eps, v);
}
} // namespace detail

/// Log-log fits of ||u_eps - u|| and ||grad u_eps|| against eps. The norms
/// are taken on the interior window of the largest eps so every entry sees
/// the same cells. Passes if s1 >= alpha - tol and s2 >= alpha - 1 - tol.
inline MollificationRateReport verify_mollification_rates(const Profile& u, const MollifierKernel& k, double alpha, double q,
                                                          std::vector<double> eps_sequence, double tol = 0.05)
{
    if (eps_sequence.size() < 3) throw Error("verify_mollification_rates: need at least 3 epsilons");
    std::sort(eps_sequence.begin(), eps_sequence.end(), std::greater<>());
    MollificationRateReport r;
    r.alpha = alpha;
    r.q = q;
    r.tol = tol;
    r.eps = eps_sequence;
    r.window = interior_range(u, k, eps_sequence.front());
    const auto [lo, hi] = r.window;
    if (hi - lo < 2) throw Error("verify_mollification_rates: largest epsilon leaves no interior");
    double scale = 0.0;
    for (double x : u.values) scale = std::max(scale, std::abs(x));
    for (double eps : eps_sequence) {
        const Profile m = mollify_profile(u, k, eps);
        const Profile gm = gradient_profile(u, k, eps);
        std::vector<double> d(hi - lo), gd(hi - lo), w(hi - lo, u.dx);
        for (int i = lo; i < hi; ++i) {
            d[i - lo] = m.values[i] - u.values[i];
            gd[i - lo] = gm.values[i];
        }
        r.error_norms.push_back(lq_norm(d, w, q));
        r.gradient_norms.push_back(lq_norm(gd, w, q));
    }
    r.error_slope = detail::fit_or_skip(r.eps, r.error_norms, scale);
    r.gradient_slope = detail::fit_or_skip(r.eps, r.gradient_norms, scale);
    r.pass = (!r.error_slope || *r.error_slope >= alpha - tol) && (!r.gradient_slope || *r.gradient_slope >= alpha - 1.0 - tol);
    return r;
}

} // namespace eulervac
