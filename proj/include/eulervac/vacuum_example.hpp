#pragma once

/**
 * @file vacuum_example.hpp
 * @brief Radially symmetric data with a compactly supported, degenerate
 * density: rho0 = (R - r)^N near r = R, u0 = x. The vacuum boundary moves
 * as |x| = (1 + t) R. Provides the data, a radial run, boundary tracking,
 * the monitor of J_eps(t) = int_{Omega(t)} (eps + rho)^-theta and the
 * uniform integrability of rho_{eps,delta}^-theta over W_eps.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/eos.hpp"
#include "eulervac/mollify.hpp"
#include "eulervac/numerics.hpp"
#include "eulervac/solver.hpp"

namespace eulervac {

struct Example4Config {
    double R = 1.0;
    int N_profile = 4;
    double theta = 0.125;
    double s_reg = 3.0;  ///< Sobolev index of c0; recorded only
    double T = 1.0;
    double r_max = 3.0;
    int n_cells = 1024;
    int n_frames = 129;
    std::vector<double> eps_seq = {0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> delta_seq = {1e-4, 1e-6, 1e-8};
    int kernel_power = 2;  ///< m of the one-sided kernel

    void validate() const
    {
        if (!(R > 0.0)) throw Error("Example4Config: R > 0 required");
        if (N_profile < 3) throw Error("Example4Config: N_profile >= 3 required for a C^2 profile");
        if (!(theta > 0.0)) throw Error("Example4Config: theta > 0 required");
        if (!(N_profile * theta < 1.0)) throw Error("Example4Config: N_profile * theta < 1 required");
        if (!(T > 0.0)) throw Error("Example4Config: T > 0 required");
        if (!(r_max > (1.0 + T) * R)) throw Error("Example4Config: r_max must exceed (1 + T) R");
        if (n_cells < 8 || n_frames < 2) throw Error("Example4Config: grid too small");
    }

    Grid grid() const
    {
        Grid g;
        g.dim = 2;
        g.x_min = 0.0;
        g.x_max = r_max;
        g.n_cells = n_cells;
        g.t_start = 0.0;
        g.t_end = T;
        g.n_steps = n_frames;
        return g;
    }
};

struct ExampleData {
    Example4Config config;
    Grid grid;
    std::function<double(double)> rho0;  ///< radial profile
    std::function<double(double)> u0;    ///< radial velocity
    double core_a = 0.0, core_b = 0.0, core_c = 0.0;  ///< a + b r^2 + c r^4 on [0, R/2]
    Frame initial;
    std::vector<double> c0;  ///< rho0^((gamma - 1) / 2) at cell centres
};

/// rho0 = (R - r)^N on [R/2, R], zero outside, and the even quartic matching
/// value, slope and curvature at R/2 inside; u0 = r.
inline ExampleData build_example(const Example4Config& cfg, const EosParams& params)
{
    cfg.validate();
    params.validate();
    ExampleData d;
    d.config = cfg;
    d.grid = cfg.grid();
    const double R = cfg.R, N = cfg.N_profile, r0 = 0.5 * R;
    const double f = std::pow(R - r0, N), f1 = -N * std::pow(R - r0, N - 1), f2 = N * (N - 1) * std::pow(R - r0, N - 2);
    const double c = (f2 - f1 / r0) / (8.0 * r0 * r0);
    const double b = (f1 - 4.0 * c * r0 * r0 * r0) / (2.0 * r0);
    const double a = f - b * r0 * r0 - c * r0 * r0 * r0 * r0;
    d.core_a = a;
    d.core_b = b;
    d.core_c = c;
    d.rho0 = [=](double r) {
        if (r >= R) return 0.0;
        if (r >= r0) return std::pow(R - r, N);
        return a + b * r * r + c * r * r * r * r;
    };
    d.u0 = [](double r) { return r; };
    for (int i = 0; i <= 64; ++i) {
        const double r = r0 * i / 64.0;
        if (!(d.rho0(r) > 0.0)) throw Error("build_example: core blend is not positive");
    }
    const Grid& g = d.grid;
    d.initial.rho.resize(g.n_cells);
    d.initial.mom.resize(g.n_cells);
    d.c0.resize(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
        const double r = g.x(i), rho = d.rho0(r);
        d.initial.rho[i] = rho;
        d.initial.mom[i] = rho * d.u0(r);
        d.c0[i] = std::pow(rho, 0.5 * (params.gamma - 1.0));
    }
    return d;
}

/// Radial MUSCL-minmod Rusanov run with the exterior closure u = x / (1 + t).
inline FlowField run_example(const ExampleData& d, const EosParams& params, AdvanceStats* stats = nullptr)
{
    SchemeConfig cfg;
    cfg.geometry = Geometry::radial;
    cfg.limiter = Limiter::minmod;
    FlowField f = simulate(d.initial, d.grid, cfg, params, stats);
    f.exterior_velocity = expansion_velocity(1.0);
    return f;
}

/// int_{R/2}^{R} rho0^-theta r dr by Gauss panels graded towards r = R.
inline double boundary_inverse_integral(const ExampleData& d, double theta)
{
    const double R = d.config.R;
    std::vector<double> x, w;
    double total = 0.0;
    double hi = 0.5 * R;  // distance to the boundary
    for (int p = 0; p < 30; ++p) {
        const double lo = p == 29 ? 0.0 : 0.5 * hi;
        gauss_legendre(16, lo, hi, x, w);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double r = R - x[j];
            total += w[j] * std::pow(d.rho0(r), -theta) * r;
        }
        hi = lo;
    }
    return total;
}

/// Closed form of int_{R/2}^{R} (R - r)^(-N theta) r dr.
inline double boundary_inverse_integral_exact(const Example4Config& cfg, double theta)
{
    const double a = cfg.N_profile * theta, h = 0.5 * cfg.R;
    if (!(a < 1.0)) return kInf;
    return cfg.R * std::pow(h, 1.0 - a) / (1.0 - a) - std::pow(h, 2.0 - a) / (2.0 - a);
}

// ---------------------------------------------------------------------------
// Boundary tracking.

struct BoundaryTrack {
    std::vector<double> times;
    std::vector<double> radius;            ///< zero crossing of the fitted rho^(1/N)
    std::vector<double> threshold_radius;  ///< outer face of the last cell with rho > dr^N
    std::vector<double> expected;          ///< (1 + t) R
    std::vector<int> fit_cells;
    double max_error = 0.0;  ///< max |radius - (1 + t) R|
};

namespace detail {

struct FrontFit {
    double radius = 0.0;
    double slope = 0.0, intercept = 0.0;  ///< w = intercept + slope r
    int first = 0, last = -1;             ///< cells used
};

/// Least-squares line through w = rho^(1/N) on the outermost contiguous
/// band lo W <= w <= hi W (W = max w), extrapolated to w = 0.
inline FrontFit fit_front(const FlowField& f, int k, int N, double lo, double hi)
{
    const Grid& g = f.grid;
    std::vector<double> w(g.n_cells);
    double W = 0.0;
    for (int i = 0; i < g.n_cells; ++i) {
        w[i] = std::pow(f.rho_at(k, i), 1.0 / N);
        W = std::max(W, w[i]);
    }
    FrontFit fit;
    if (!(W > 0.0)) throw Error("track_boundary: frame " + std::to_string(k) + " is vacuum everywhere");
    int i = g.n_cells - 1;
    while (i > 0 && w[i] < lo * W) --i;
    fit.last = i;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (; i >= 0 && w[i] <= hi * W; --i, ++m) {
        const double x = g.x(i);
        sx += x;
        sy += w[i];
        sxx += x * x;
        sxy += x * w[i];
    }
    fit.first = i + 1;
    if (m < 3) throw Error("track_boundary: fewer than three cells in the fitting band at frame " + std::to_string(k));
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / m;
    if (!(fit.slope < 0.0)) throw Error("track_boundary: density does not decrease towards the boundary");
    fit.radius = -fit.intercept / fit.slope;
    return fit;
}

} // namespace detail

inline BoundaryTrack track_boundary(const FlowField& run, int N_profile, double R, double band_lo = 0.05, double band_hi = 0.12)
{
    const Grid& g = run.grid;
    BoundaryTrack b;
    const double thr = std::pow(g.dx(), N_profile);
    for (int k = 0; k < g.n_steps; ++k) {
        const auto fit = detail::fit_front(run, k, N_profile, band_lo, band_hi);
        int last = -1;
        for (int i = 0; i < g.n_cells; ++i)
            if (run.rho_at(k, i) > thr) last = i;
        b.times.push_back(g.t(k));
        b.radius.push_back(fit.radius);
        b.threshold_radius.push_back(last >= 0 ? g.x(last) + 0.5 * g.dx() : 0.0);
        b.expected.push_back((1.0 + g.t(k)) * R);
        b.fit_cells.push_back(fit.last - fit.first + 1);
        b.max_error = std::max(b.max_error, std::abs(fit.radius - b.expected.back()));
    }
    return b;
}

// ---------------------------------------------------------------------------
// Monitor of J_eps(t).

struct GronwallMonitor {
    double eps_floor = 0.0, theta = 0.0;
    std::vector<double> times;
    std::vector<double> J;
    std::vector<double> max_div;  ///< max |u_r' + u / r| on the resolved support
    double C_hat = 0.0;           ///< (1 + theta) max_t max_div
    double tol = 0.1;
    std::vector<double> boundary_speed_term;  ///< V int_{dOmega} (eps + rho)^-theta dS, V fitted from the track
    std::vector<double> boundary_flux_term;   ///< int_{dOmega} (eps + rho)^-theta u . nu dS
    double max_boundary_mismatch = 0.0;       ///< max relative difference of the two terms
    double max_excess = 0.0;                  ///< max of log J(t) - log J(0) - (C_hat + tol) t
    bool pass = false;
};

/// d/dt J = int div u (eps + rho)^-theta + theta int rho div u (eps + rho)^-(1+theta)
/// once the two boundary terms cancel, so log J(t) - log J(0) <= C_hat t.
inline GronwallMonitor gronwall_monitor(const FlowField& run, int N_profile, double R, double theta, double eps_floor, double tol = 0.1)
{
    if (!(eps_floor > 0.0)) throw Error("gronwall_monitor: eps_floor > 0 required");
    const Grid& g = run.grid;
    GronwallMonitor m;
    m.eps_floor = eps_floor;
    m.theta = theta;
    m.tol = tol;
    // without vacuum Omega(t) is the whole domain and there are no boundary terms
    const bool vacuumless = std::all_of(run.rho.begin(), run.rho.end(), [](double r) { return r > 0.0; });
    if (vacuumless) {
        double max_div = 0.0;
        for (int k = 0; k < g.n_steps; ++k) {
            std::vector<double> terms;
            double md = 0.0;
            for (int i = 0; i < g.n_cells; ++i) {
                terms.push_back(std::pow(eps_floor + run.rho_at(k, i), -theta) * g.cell_volume(i));
                if (i > 0 && i + 1 < g.n_cells) {
                    const double d = (run.velocity(k, i + 1) - run.velocity(k, i - 1)) / (2.0 * g.dx()) + run.velocity(k, i) / g.x(i);
                    md = std::max(md, std::abs(d));
                }
            }
            m.times.push_back(g.t(k));
            m.J.push_back(pairwise_sum(terms));
            m.max_div.push_back(md);
            m.boundary_speed_term.push_back(0.0);
            m.boundary_flux_term.push_back(0.0);
            max_div = std::max(max_div, md);
        }
        m.C_hat = (1.0 + theta) * max_div;
        m.max_excess = -kInf;
        for (int k = 0; k < g.n_steps; ++k)
            m.max_excess = std::max(m.max_excess, std::log(m.J[k]) - std::log(m.J[0]) - (m.C_hat + tol) * m.times[k]);
        m.pass = m.max_excess <= 0.0;
        return m;
    }
    const BoundaryTrack track = track_boundary(run, N_profile, R);
    // boundary speed: least-squares slope of the tracked radius
    double st = 0.0, sr = 0.0, stt = 0.0, str = 0.0;
    const int n = g.n_steps;
    for (int k = 0; k < n; ++k) {
        st += track.times[k];
        sr += track.radius[k];
        stt += track.times[k] * track.times[k];
        str += track.times[k] * track.radius[k];
    }
    const double V = (n * str - st * sr) / (n * stt - st * st);
    double max_div = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = g.t(k), rb = track.radius[k];
        std::vector<double> terms;
        for (int i = 0; i < g.n_cells && g.x(i) < rb; ++i)
            terms.push_back(std::pow(eps_floor + run.rho_at(k, i), -theta) * g.cell_volume(i));
        m.times.push_back(t);
        m.J.push_back(pairwise_sum(terms));
        // resolved support: cells inside the fitting band's outer edge
        const auto fit = detail::fit_front(run, k, N_profile, 0.05, 0.12);
        double md = 0.0;
        for (int i = 1; i < fit.last; ++i) {
            const double d = (run.velocity(k, i + 1) - run.velocity(k, i - 1)) / (2.0 * g.dx()) + run.velocity(k, i) / g.x(i);
            md = std::max(md, std::abs(d));
        }
        m.max_div.push_back(md);
        max_div = std::max(max_div, md);
        // fluid velocity at the boundary: linear fit of u over the band, evaluated at rb
        double sx = 0.0, su = 0.0, sxx = 0.0, sxu = 0.0;
        const int cnt = fit.last - fit.first + 1;
        for (int i = fit.first; i <= fit.last; ++i) {
            const double x = g.x(i), u = run.velocity(k, i);
            sx += x;
            su += u;
            sxx += x * x;
            sxu += x * u;
        }
        const double us = (cnt * sxu - sx * su) / (cnt * sxx - sx * sx);
        const double ub = (su - us * sx) / cnt + us * rb;
        const double surface = 2.0 * std::numbers::pi * rb * std::pow(eps_floor, -theta);
        m.boundary_speed_term.push_back(V * surface);
        m.boundary_flux_term.push_back(ub * surface);
        m.max_boundary_mismatch = std::max(m.max_boundary_mismatch, std::abs(V - ub) / std::abs(V));
    }
    m.C_hat = (1.0 + theta) * max_div;
    m.max_excess = -kInf;
    for (int k = 0; k < n; ++k)
        m.max_excess = std::max(m.max_excess, std::log(m.J[k]) - std::log(m.J[0]) - (m.C_hat + tol) * m.times[k]);
    m.pass = m.max_excess <= 0.0;
    return m;
}

// ---------------------------------------------------------------------------
// Uniform integrability of rho_{eps,delta}^-theta over W_eps.

/// The one-sided kernel: (s (1 - s))^m (1 - |y|^2)^m on [0,1] x B(0,1).
inline MollifierKernel example_kernel(int power = 2) { return make_kernel(KernelProfile::one_sided, 2, 1.0, power); }

struct IntegrabilityRow {
    double eps = 0.0, delta = 0.0;
    double integral = 0.0;       ///< int_{W_eps} rho_{eps,delta}^-theta
    double jensen_rhs = 0.0;     ///< int_{W_eps} |I x Omega|^(-1-theta) int (eta + delta)^-theta (rho + delta)^-theta
    double product_bound = 0.0;  ///< int (eta + delta)^-theta * int_0^T int_{B((1+t)R)} (rho + delta)^-theta
};

struct IntegrabilityReport {
    double theta = 0.0;
    std::vector<IntegrabilityRow> rows;
    std::vector<double> eps;
    std::vector<double> smallest_delta_integrals;  ///< per eps, at min(delta_seq)
    std::vector<double> raw_integrals;             ///< per eps, delta = 0 (rho_eps itself)
    double uniformity_factor = 4.0;
    double eps_slope = 0.0;         ///< log-log slope of the smallest-delta integrals in eps
    double divergence_slope = -0.25;
    bool jensen_holds = false;      ///< integral <= jensen_rhs for every row
    bool delta_stable = false;      ///< integrals nondecreasing as delta decreases and bounded by the delta = 0 value
    bool uniform = false;           ///< max <= uniformity_factor * min across eps
    bool divergent = false;         ///< flagged: not uniform, not delta-stable or eps_slope < divergence_slope
};

namespace detail {

/// Linear interpolation of a radial frame sequence at (t, r); zero outside
/// the time range and beyond the last cell centre's neighbour.
struct RadialSampler {
    const FlowField& f;

    double at(double t, double r) const
    {
        const Grid& g = f.grid;
        if (t < g.t_start || t > g.t_end) return 0.0;
        const double kt = (t - g.t_start) / g.dt();
        const int k0 = std::min(static_cast<int>(kt), g.n_steps - 2);
        const double a = kt - k0;
        return (1.0 - a) * space(k0, r) + a * space(k0 + 1, r);
    }

    double space(int k, double r) const
    {
        const Grid& g = f.grid;
        const double xi = r / g.dx() - 0.5;
        if (xi <= 0.0) return f.rho_at(k, 0);
        const int i0 = static_cast<int>(xi);
        if (i0 >= g.n_cells - 1) return 0.0;
        const double b = xi - i0;
        return (1.0 - b) * f.rho_at(k, i0) + b * f.rho_at(k, i0 + 1);
    }
};

} // namespace detail

/// rho_{eps,delta}(t, x) = int_{I} int_{Omega(s)} (eta + delta)(rho(t - eps s, x - eps y) + delta) dy ds,
/// I = [0, min(1, t / eps)], Omega(s) = {|y| <= 1 : |x - eps y| < (1 + t - eps s) R}.
/// Its four delta-independent moments are accumulated once per eps, so every
/// delta is evaluated from the same quadrature.
inline IntegrabilityReport check_uniform_integrability(const FlowField& run, const MollifierKernel& k, double R, double theta,
                                                       std::vector<double> delta_seq, std::vector<double> eps_seq,
                                                       double uniformity_factor = 4.0)
{
    if (k.profile != KernelProfile::one_sided || k.space_dim != 2) throw Error("check_uniform_integrability: radial one-sided kernel required");
    if (k.power * theta >= 1.0) throw Error("check_uniform_integrability: int eta^-theta diverges for this kernel");
    if (delta_seq.empty() || eps_seq.size() < 2) throw Error("check_uniform_integrability: need delta values and at least two eps");
    std::sort(delta_seq.begin(), delta_seq.end(), std::greater<>());
    std::sort(eps_seq.begin(), eps_seq.end(), std::greater<>());
    const Grid& g = run.grid;
    const double c = k.constant();
    detail::RadialSampler sampler{run};

    std::vector<double> sn, sw, yn, yw, an, aw;
    gauss_legendre(8, 0.0, 1.0, yn, yw);
    gauss_legendre(16, 0.0, std::numbers::pi, an, aw);

    IntegrabilityReport rep;
    rep.theta = theta;
    rep.eps = eps_seq;
    rep.uniformity_factor = uniformity_factor;
    rep.jensen_holds = true;
    rep.delta_stable = true;

    // cone integral int_0^T int_{B((1+t)R)} (rho + delta)^-theta, per delta
    std::vector<double> cone(delta_seq.size(), 0.0);
    for (int kk = 0; kk < g.n_steps; ++kk) {
        const double wt = (kk == 0 || kk == g.n_steps - 1) ? 0.5 * g.dt() : g.dt();
        const double rb = (1.0 + g.t(kk)) * R;
        for (int i = 0; i < g.n_cells && g.x(i) < rb; ++i)
            for (std::size_t d = 0; d < delta_seq.size(); ++d)
                cone[d] += wt * g.cell_volume(i) * std::pow(run.rho_at(kk, i) + delta_seq[d], -theta);
    }

    for (double eps : eps_seq) {
        const std::size_t nd = delta_seq.size();
        std::vector<double> integral(nd, 0.0), jensen(nd, 0.0), eta_pow(nd), delta_pow(nd);
        for (std::size_t dd = 0; dd < nd; ++dd) delta_pow[dd] = std::pow(delta_seq[dd], -theta);
        double raw = 0.0;
        for (int kk = 0; kk < g.n_steps; ++kk) {
            const double t = g.t(kk);
            const double wt = (kk == 0 || kk == g.n_steps - 1) ? 0.5 * g.dt() : g.dt();
            const double s_max = std::min(1.0, t / eps);
            if (!(s_max > 0.0)) continue;
            gauss_legendre(6, 0.0, s_max, sn, sw);
            const double w_edge = (1.0 + t) * R + eps;
            for (int i = 0; i < g.n_cells && g.x(i) < w_edge; ++i) {
                const double x = g.x(i);
                double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
                std::vector<double> J(nd, 0.0);
                for (std::size_t a = 0; a < sn.size(); ++a) {
                    const double s = sn[a], ts = t - eps * s;
                    const double rb = (1.0 + ts) * R;
                    const double T = k.time_profile(s);
                    for (std::size_t b = 0; b < yn.size(); ++b) {
                        const double yr = yn[b];
                        const double eta = c * T * k.space_profile(yr);
                        for (std::size_t dd = 0; dd < nd; ++dd) eta_pow[dd] = std::pow(eta + delta_seq[dd], -theta);
                        for (std::size_t q = 0; q < an.size(); ++q) {
                            const double px = x - eps * yr * std::cos(an[q]), py = eps * yr * std::sin(an[q]);
                            const double r = std::hypot(px, py);
                            if (!(r < rb)) continue;
                            // half disc doubled by symmetry about the x axis
                            const double w = sw[a] * yw[b] * yr * aw[q] * 2.0;
                            const double rho = sampler.at(ts, r);
                            A += w * eta * rho;
                            B += w * rho;
                            C += w * eta;
                            D += w;
                            for (std::size_t dd = 0; dd < nd; ++dd)
                                J[dd] += w * eta_pow[dd] * (rho > 0.0 ? std::pow(rho + delta_seq[dd], -theta) : delta_pow[dd]);
                        }
                    }
                }
                if (!(D > 0.0)) continue;
                const double vol = wt * g.cell_volume(i);
                if (A > 0.0) raw += vol * std::pow(A, -theta);
                for (std::size_t dd = 0; dd < nd; ++dd) {
                    const double dl = delta_seq[dd];
                    integral[dd] += vol * std::pow(A + dl * (B + C) + dl * dl * D, -theta);
                    jensen[dd] += vol * std::pow(D, -1.0 - theta) * J[dd];
                }
            }
        }
        for (std::size_t dd = 0; dd < nd; ++dd) {
            IntegrabilityRow row;
            row.eps = eps;
            row.delta = delta_seq[dd];
            row.integral = integral[dd];
            row.jensen_rhs = jensen[dd];
            row.product_bound = inverse_power_integral(k, theta, delta_seq[dd]) * cone[dd];
            if (!(row.integral <= row.jensen_rhs * (1.0 + 1e-12))) rep.jensen_holds = false;
            rep.rows.push_back(row);
        }
        // dominated convergence: the integrals increase as delta decreases, towards the delta = 0 value
        for (std::size_t dd = 0; dd < nd; ++dd) {
            if (dd > 0 && integral[dd] < integral[dd - 1] * (1.0 - 1e-12)) rep.delta_stable = false;
            if (integral[dd] > raw * (1.0 + 1e-12)) rep.delta_stable = false;
        }
        rep.smallest_delta_integrals.push_back(integral[nd - 1]);
        rep.raw_integrals.push_back(raw);
    }
    const auto [lo, hi] = std::minmax_element(rep.smallest_delta_integrals.begin(), rep.smallest_delta_integrals.end());
    rep.uniform = *hi <= uniformity_factor * *lo;
    rep.eps_slope = loglog_slope(rep.eps, rep.smallest_delta_integrals);
    rep.divergent = !rep.uniform || !rep.delta_stable || rep.eps_slope < rep.divergence_slope;
    return rep;
}

} // namespace eulervac
