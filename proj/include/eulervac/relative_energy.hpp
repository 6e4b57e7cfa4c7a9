#pragma once

/**
 * @file relative_energy.hpp
 * @brief Relative energy E(rho,u|r,v) and its smoothed variant E_sigma, the
 * relative-energy inequality as a signed residual, the residual fields of
 * the mollified strong system and the regularised density
 * r_eps^delta = r_eps (1 + delta / r_eps^p)^(1/q~).
 *
 * Quadrature is midpoint in space and trapezoid in time throughout.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/eos.hpp"
#include "eulervac/mollify.hpp"
#include "eulervac/numerics.hpp"
#include "eulervac/strong_solution.hpp"

namespace eulervac {

namespace detail {

inline int frame_index(const Grid& g, double t)
{
    const int k = g.frame_at(t);
    if (std::abs(g.t(k) - t) > 1e-9 * g.dt()) throw Error("time " + std::to_string(t) + " is not on an output frame");
    return k;
}

inline void require_same_grid(const FlowField& a, const FlowField& b)
{
    if (!a.grid.same_as(b.grid)) throw Error("relative energy: weak and strong fields live on different grids");
}

/// Velocity for quadrature: m / rho on mass, 0 on vacuum (it is always
/// multiplied by rho there).
inline double weak_velocity(const FlowField& f, int k, int i)
{
    const double r = f.rho_at(k, i);
    return r > 0.0 ? f.mom_at(k, i) / r : 0.0;
}

inline double strong_velocity(const FlowField& f, int k, int i, double rho_weak)
{
    const double v = f.velocity(k, i);
    if (std::isnan(v)) {
        if (rho_weak > 0.0) throw Error("relative energy: strong velocity undefined on vacuum cell " + std::to_string(i));
        return 0.0;
    }
    return v;
}

/// Pointwise relative energy with a general (H, H') pair for the r-terms.
template <class Hs, class dHs>
double relative_energy_density(const EosParams& p, double rho, double u, double r, double v, Hs&& H_r, dHs&& dH_r)
{
    const double kin = rho > 0.0 ? 0.5 * rho * (u - v) * (u - v) : 0.0;
    const double pot = p.potential(rho) - dH_r(r) * (rho - r) - H_r(r);
    return kin + pot;
}

} // namespace detail

/// E(rho, u | r, v) pointwise.
inline double relative_energy_density(const EosParams& p, double rho, double u, double r, double v)
{
    return detail::relative_energy_density(
        p, rho, u, r, v, [&](double z) { return p.potential(z); }, [&](double z) { return p.dpotential(z); });
}

/// E_sigma(rho, u | r, v) pointwise.
inline double relative_energy_density(const SmoothedEos& s, double rho, double u, double r, double v)
{
    return detail::relative_energy_density(
        s.base, rho, u, r, v, [&](double z) { return s.H(z); }, [&](double z) { return s.dH(z); });
}

/// int E(rho,u|r,v)(t, x) dx. Each cell value is checked to be nonnegative.
inline double relative_energy(const FlowField& weak, const FlowField& strong, const EosParams& params, double t)
{
    detail::require_same_grid(weak, strong);
    const Grid& g = weak.grid;
    const int k = detail::frame_index(g, t);
    std::vector<double> terms(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
        const double rho = weak.rho_at(k, i), r = strong.rho_at(k, i);
        const double e = relative_energy_density(params, rho, detail::weak_velocity(weak, k, i), r,
                                                 detail::strong_velocity(strong, k, i, rho));
        const double scale = params.potential(std::max(rho, r)) + 1e-300;
        if (e < -1e-10 * scale) throw InvariantViolation("relative energy negative in cell " + std::to_string(i));
        terms[i] = e * g.cell_volume(i);
    }
    return pairwise_sum(terms);
}

/// int E_sigma with (H_sigma, H_sigma') in the r-terms.
inline double relative_energy_smoothed(const FlowField& weak, const FlowField& strong, const SmoothedEos& s, double t)
{
    detail::require_same_grid(weak, strong);
    const Grid& g = weak.grid;
    const int k = detail::frame_index(g, t);
    std::vector<double> terms(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
        const double rho = weak.rho_at(k, i), r = strong.rho_at(k, i);
        terms[i] = relative_energy_density(s, rho, detail::weak_velocity(weak, k, i), r, detail::strong_velocity(strong, k, i, rho)) *
                   g.cell_volume(i);
    }
    return pairwise_sum(terms);
}

/// int E dx at every frame.
inline std::vector<double> relative_energy_series(const FlowField& weak, const FlowField& strong, const EosParams& params)
{
    std::vector<double> e(weak.grid.n_steps);
    for (int k = 0; k < weak.grid.n_steps; ++k) e[k] = relative_energy(weak, strong, params, weak.grid.t(k));
    return e;
}

/// Smallest a >= 0 with E(t_k) <= (E(t_0) + a) exp(int_0^t_k Lambda) on
/// every frame (trapezoid rule for the exponent).
inline double gronwall_allowance(const std::vector<double>& energy, const std::vector<double>& lambda, const std::vector<double>& times)
{
    if (energy.size() != lambda.size() || energy.size() != times.size() || energy.empty()) throw Error("gronwall_allowance: size mismatch");
    double integral = 0.0, a = 0.0;
    for (std::size_t k = 0; k < energy.size(); ++k) {
        if (k > 0) integral += 0.5 * (lambda[k] + lambda[k - 1]) * (times[k] - times[k - 1]);
        a = std::max(a, energy[k] * std::exp(-integral) - energy[0]);
    }
    return a;
}

/// Young-type constant: rho^(2g/(g+1)) |u|^(2g/(g+1)) <= C (rho^g + rho |u|^2)
/// with C = gamma / (gamma + 1) (weighted AM-GM with weights 1/(g+1), g/(g+1)).
inline double young_constant(double gamma) { return gamma / (gamma + 1.0); }

struct PropositionResidual {
    double energy_change = 0.0;  ///< E_sigma(t2) - E_sigma(t1)
    double interior = 0.0;       ///< space-time integral of the right-hand side
    double boundary = 0.0;       ///< time integral of the flux terms at the ends of the domain
    double residual = 0.0;       ///< interior + boundary - energy_change; >= 0 for admissible weak solutions
};

/// Signed residual of the relative-energy inequality between an admissible
/// weak field and an analytic C^1 pair (r, v) on [t1, t2]. On a bounded
/// interval [a, b] the fluxes of energy, of rho u v and of rho u (v^2/2 - H_sigma'(r))
/// through the ends enter as a boundary term; they vanish for compactly
/// supported or matching constant far fields.
inline PropositionResidual proposition_residual(const FlowField& weak, const AnalyticStrong& strong, const SmoothedEos& s, double t1, double t2)
{
    if (!strong.derivatives) throw Error("proposition_residual: strong solution lacks analytic derivatives");
    if (weak.grid.geometry() != Geometry::planar) throw Error("proposition_residual: planar fields only");
    const Grid& g = weak.grid;
    const int k1 = detail::frame_index(g, t1), k2 = detail::frame_index(g, t2);
    if (k2 <= k1) throw Error("proposition_residual: empty window");
    const EosParams& p = s.base;

    auto e_sigma = [&](int k) {
        std::vector<double> terms(g.n_cells);
        const double t = g.t(k);
        for (int i = 0; i < g.n_cells; ++i) {
            const PointState st = strong.state(t, g.x(i));
            terms[i] = relative_energy_density(s, weak.rho_at(k, i), detail::weak_velocity(weak, k, i), st.rho, st.u) * g.dx();
        }
        return pairwise_sum(terms);
    };
    auto integrand = [&](int k) {
        std::vector<double> terms(g.n_cells);
        const double t = g.t(k);
        for (int i = 0; i < g.n_cells; ++i) {
            const double rho = weak.rho_at(k, i), u = detail::weak_velocity(weak, k, i);
            const PointState st = strong.state(t, g.x(i));
            const double h2 = s.d2H(st.rho);
            double val = rho * (st.u - u) * st.u_t + rho * u * st.u_x * (st.u - u) - p.pressure(rho) * st.u_x;
            // the H_sigma'' terms only matter where they are multiplied by a nonzero factor
            if (rho - st.rho != 0.0) val -= (rho - st.rho) * h2 * st.rho_t;
            if (rho != 0.0) val -= rho * h2 * u * st.rho_x;
            terms[i] = val * g.dx();
        }
        return pairwise_sum(terms);
    };
    auto boundary = [&](int k) {
        const double t = g.t(k);
        auto flux = [&](int i, double x) {
            const double rho = weak.rho_at(k, i), u = detail::weak_velocity(weak, k, i);
            const PointState st = strong.state(t, x);
            const double pr = p.pressure(rho);
            return -(0.5 * rho * u * u + p.potential(rho) + pr) * u + (rho * u * u + pr) * st.u -
                   rho * u * (0.5 * st.u * st.u - s.dH(st.rho));
        };
        return flux(g.n_cells - 1, g.x_max) - flux(0, g.x_min);
    };

    PropositionResidual r;
    r.energy_change = e_sigma(k2) - e_sigma(k1);
    std::vector<double> in, bd;
    for (int k = k1; k <= k2; ++k) {
        const double w = (k == k1 || k == k2) ? 0.5 * g.dt() : g.dt();
        in.push_back(w * integrand(k));
        bd.push_back(w * boundary(k));
    }
    r.interior = pairwise_sum(in);
    r.boundary = pairwise_sum(bd);
    r.residual = r.interior + r.boundary - r.energy_change;
    return r;
}

// ---------------------------------------------------------------------------
// Regularised density and mollified-system residuals.

/// C_q~ = 1 + 1/q~ in (r^delta - r) / r^delta <= C_q~ delta / r^p for r in (0, 1].
inline double c_q_tilde(double q_tilde) { return 1.0 + 1.0 / q_tilde; }

struct RegularizedDensity {
    ScalarField r_eps;
    double delta = 0.0;
    double p_exp = 0.0;
    double q_tilde = 1.0;
    ScalarField r_eps_delta;  ///< zero where r_eps = 0
};

inline double regularize(double r, double delta, double p_exp, double q_tilde)
{
    if (r <= 0.0) return 0.0;
    return r * std::pow(1.0 + delta / std::pow(r, p_exp), 1.0 / q_tilde);
}

inline RegularizedDensity regularize_density(const ScalarField& r_eps, double delta, double p_exp, double q_tilde)
{
    if (!(delta > 0.0) || !(p_exp > 0.0) || !(q_tilde > 0.0)) throw Error("regularize_density: delta, p and q~ must be positive");
    RegularizedDensity d{r_eps, delta, p_exp, q_tilde, r_eps};
    for (double& x : d.r_eps_delta.values) x = regularize(x, delta, p_exp, q_tilde);
    return d;
}

struct RegularizedDensityCheck {
    double min_excess = kInf;         ///< min (r^delta - r) over r > 0; must be >= 0
    double max_ratio_violation = 0.0; ///< max of (r^delta - r)/r^delta - C delta / r^p on r in (0, 1]
    double max_inverse_violation = 0.0;  ///< max of 1/r^delta - delta^(-1/q~) / r^((q~-p)/q~)
    bool pass = false;
};

inline RegularizedDensityCheck check_regularized(const RegularizedDensity& d)
{
    RegularizedDensityCheck c;
    const double C = c_q_tilde(d.q_tilde);
    for (std::size_t j = 0; j < d.r_eps.values.size(); ++j) {
        const double r = d.r_eps.values[j], rd = d.r_eps_delta.values[j];
        if (r <= 0.0) continue;
        c.min_excess = std::min(c.min_excess, rd - r);
        if (r <= 1.0) c.max_ratio_violation = std::max(c.max_ratio_violation, (rd - r) / rd - C * d.delta / std::pow(r, d.p_exp));
        const double bound = std::pow(d.delta, -1.0 / d.q_tilde) / std::pow(r, (d.q_tilde - d.p_exp) / d.q_tilde);
        c.max_inverse_violation = std::max(c.max_inverse_violation, (1.0 / rd - bound) / bound);
    }
    c.pass = c.min_excess >= 0.0 && c.max_ratio_violation <= 1e-12 && c.max_inverse_violation <= 1e-12;
    return c;
}

struct ResidualBundle {
    double epsilon = 0.0, sigma = 0.0, delta = 0.0;
    ScalarField r1, r1_rearranged;  ///< two evaluations of R_1
    ScalarField r2, r3, m_delta;
    ScalarField r_eps, v_eps, rho_weak;
    RegularizedDensity regdens;
    SmoothedEos smoothed;
    std::vector<char> window;  ///< W_eps cells inside the shrunken space-time window

    bool in_window(int k, int i) const { return window[static_cast<std::size_t>(k) * r1.grid.n_cells + i] != 0; }
};

/// R_1, R_2, R_3, M_eps^delta for a sampled strong field (planar). The
/// weak density enters only R_3; it defaults to the strong density.
inline ResidualBundle mollified_residuals(const FlowField& strong, const MollifierKernel& k, double eps, const SmoothedEos& s, double delta,
                                          double p_exp, double q_tilde, const FlowField* weak = nullptr)
{
    const Grid& g = strong.grid;
    if (g.geometry() != Geometry::planar) throw Error("mollified_residuals: planar fields only");
    if (weak && !weak->grid.same_as(g)) throw Error("mollified_residuals: weak field on a different grid");
    const EosParams& p = s.base;
    const double pad = eps * k.support;
    const int k_lo = static_cast<int>(std::ceil(pad / g.dt() - 1e-9));
    const int k_hi = g.n_steps - 1 - k_lo;
    const int i_lo = static_cast<int>(std::ceil(pad / g.dx()));
    const int i_hi = g.n_cells - 1 - i_lo;
    if (k_hi < k_lo || i_hi < i_lo) throw Error("mollified_residuals: window too small after shrinking by l * eps");

    ScalarField r = density_of(strong), v = r, rv = r, rvv = r, pr = r;
    for (int kk = 0; kk < g.n_steps; ++kk)
        for (int i = 0; i < g.n_cells; ++i) {
            const double vel = strong.velocity(kk, i);
            if (std::isnan(vel)) throw Error("mollified_residuals: strong velocity undefined on a vacuum cell without closure");
            v.at(kk, i) = vel;
            rv.at(kk, i) = r.at(kk, i) * vel;
            rvv.at(kk, i) = r.at(kk, i) * vel * vel;
            pr.at(kk, i) = p.pressure(r.at(kk, i));
        }
    const MollifiedScalar rm = mollify_with_derivatives(r, k, eps);
    const MollifiedScalar vm = mollify_with_derivatives(v, k, eps);
    const ScalarField rv_dx = mollify_dx(rv, k, eps), rv_dt = mollify_dt(rv, k, eps);
    const ScalarField rvv_dx = mollify_dx(rvv, k, eps), pr_dx = mollify_dx(pr, k, eps);

    ResidualBundle b;
    b.epsilon = eps;
    b.sigma = s.sigma;
    b.delta = delta;
    b.smoothed = s;
    b.r_eps = rm.value;
    b.v_eps = vm.value;
    b.rho_weak = weak ? density_of(*weak) : r;
    b.r1 = b.r1_rearranged = b.r2 = b.r3 = b.m_delta = ScalarField{g, std::vector<double>(g.size(), 0.0), Extension::zero};
    b.regdens = regularize_density(rm.value, delta, p_exp, q_tilde);
    b.window.assign(g.size(), 0);
    for (int kk = 0; kk < g.n_steps; ++kk)
        for (int i = 0; i < g.n_cells; ++i) {
            const double re = rm.value.at(kk, i), ve = vm.value.at(kk, i);
            const double rx = rm.d_dx.at(kk, i), rt = rm.d_dt.at(kk, i);
            const double vx = vm.d_dx.at(kk, i), vt = vm.d_dt.at(kk, i);
            // R1 = d_x(r_eps v_eps) - d_x(r v)_eps
            b.r1.at(kk, i) = (rx * ve + re * vx) - rv_dx.at(kk, i);
            // the same quantity through the commutator rearrangement with G = f g
            const double rr = r.at(kk, i), vv = v.at(kk, i);
            const double t1 = rv_dx.at(kk, i) - (vv * rx + rr * vx);
            const double t2 = (vv - ve) * rx;
            const double t3 = (rr - re) * vx;
            b.r1_rearranged.at(kk, i) = -(t1 + t2 + t3);
            b.r2.at(kk, i) = (rt * ve + re * vt) - rv_dt.at(kk, i) + (rx * ve * ve + 2.0 * re * ve * vx) - rvv_dx.at(kk, i) +
                             p.dpressure(std::max(re, 0.0)) * rx - pr_dx.at(kk, i);
            if (kk < k_lo || kk > k_hi || i < i_lo || i > i_hi || !(re > 0.0)) continue;
            b.window[static_cast<std::size_t>(kk) * g.n_cells + i] = 1;
            const double rho = b.rho_weak.at(kk, i);
            b.r3.at(kk, i) = ((rho - re) * (s.dp(re) - p.dpressure(re)) + (s.p(re) - p.pressure(re))) * vx;
            const double rd = b.regdens.r_eps_delta.at(kk, i);
            b.m_delta.at(kk, i) = (rd - re) * (vt + ve * vx + s.d2H(re) * rx) + (s.dp(re) - p.dpressure(re)) * rx;
        }
    return b;
}

struct NormRow {
    double epsilon = 0.0;
    std::string name;
    double value = 0.0;
};

/// Norms of the residual terms on W_eps:
///   inv_r_delta_R2   ||(r^delta)^-1 R2||_{L^s}
///   inv_r_delta_M    ||(r^delta)^-1 M||_{L^s}
///   rho_minus_r_H2_R1 ||(rho - r_eps) H_sigma''(r_eps) R1||_{L^1}
///   R3               ||R3||_{L^1}
inline std::vector<NormRow> residual_norm_report(const ResidualBundle& b, double s)
{
    if (s < 2.0) throw Error("residual_norm_report: s >= 2 required");
    const Grid& g = b.r1.grid;
    std::vector<double> a, m, c, d, w;
    const double cell = g.dx() * g.dt();
    for (int k = 0; k < g.n_steps; ++k)
        for (int i = 0; i < g.n_cells; ++i) {
            if (!b.in_window(k, i)) continue;
            const double rd = b.regdens.r_eps_delta.at(k, i), re = b.r_eps.at(k, i);
            a.push_back(b.r2.at(k, i) / rd);
            m.push_back(b.m_delta.at(k, i) / rd);
            c.push_back((b.rho_weak.at(k, i) - re) * b.smoothed.d2H(re) * b.r1.at(k, i));
            d.push_back(b.r3.at(k, i));
            w.push_back(cell);
        }
    return {{b.epsilon, "inv_r_delta_R2", lq_norm(a, w, s)},
            {b.epsilon, "inv_r_delta_M", lq_norm(m, w, s)},
            {b.epsilon, "rho_minus_r_H2_R1", lq_norm(c, w, 1.0)},
            {b.epsilon, "R3", lq_norm(d, w, 1.0)}};
}

struct ScalingReport {
    double s = 0.0, s_prime = 0.0;
    std::vector<NormRow> rows;
    std::map<std::string, double> slopes;  ///< missing entry: norms vanish identically
};

/// s = 2 gamma / (gamma - 1), s' = 2 gamma / (gamma + 1).
inline double holder_s(double gamma) { return 2.0 * gamma / (gamma - 1.0); }
inline double holder_s_prime(double gamma) { return 2.0 * gamma / (gamma + 1.0); }

inline ScalingReport fit_scaling(double gamma, const std::vector<NormRow>& rows)
{
    ScalingReport r;
    r.s = holder_s(gamma);
    r.s_prime = holder_s_prime(gamma);
    r.rows = rows;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by;
    for (const auto& row : rows) {
        by[row.name].first.push_back(row.epsilon);
        by[row.name].second.push_back(row.value);
    }
    for (const auto& [name, xy] : by) {
        const auto& [e, v] = xy;
        if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
        r.slopes[name] = loglog_slope(e, v);
    }
    return r;
}

/// Sweep eps with delta = eps^kappa_exp, sigma = eps^nu.
inline ScalingReport residual_scaling_sweep(const FlowField& strong, const MollifierKernel& k, const EosParams& params,
                                            const std::vector<double>& eps_seq, double kappa_exp, double nu, double p_exp,
                                            double q_tilde, const FlowField* weak = nullptr)
{
    std::vector<NormRow> rows;
    const double s = holder_s(params.gamma);
    for (double eps : eps_seq) {
        const SmoothedEos sm = build_smoothed(params, std::min(1.0, std::pow(eps, nu)));
        const ResidualBundle b = mollified_residuals(strong, k, eps, sm, std::pow(eps, kappa_exp), p_exp, q_tilde, weak);
        const auto r = residual_norm_report(b, s);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return fit_scaling(params.gamma, rows);
}

} // namespace eulervac
