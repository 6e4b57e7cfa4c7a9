#pragma once

/**
 * @file admissibility.hpp
 * @brief Checks of a discrete field against the weak formulation, the
 * total-energy inequality, the one-sided Lipschitz bound, the exterior
 * velocity equation and uniform vacuum integrability.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/eos.hpp"
#include "eulervac/mollify.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

/// phi(t, x) = b((x - center) / width) (1 + time_slope t),
/// b(s) = (1 - s^2)^4 on |s| < 1. For radial grids the momentum test is the
/// vector field phi e_r.
struct TestFunction {
    double center = 0.0;
    double width = 1.0;
    double time_slope = 0.0;
    double amplitude = 1.0;

    double value(double t, double x) const { return amplitude * poly_bump((x - center) / width, 4) * (1.0 + time_slope * t); }
    double d_dx(double t, double x) const
    {
        return amplitude * poly_bump_deriv((x - center) / width, 4) / width * (1.0 + time_slope * t);
    }
    double d_dt(double, double x) const { return amplitude * poly_bump((x - center) / width, 4) * time_slope; }
};

/// Bumps at three scales (1/8, 1/16, 1/32 of the domain) centred at
/// half-width spacing, each with a time-tilted twin.
inline std::vector<TestFunction> default_test_family(const Grid& g)
{
    std::vector<TestFunction> out;
    const double L = g.x_max - g.x_min;
    for (double frac : {0.125, 0.0625, 0.03125}) {
        const double w = frac * L;
        for (double c = g.x_min + w; c <= g.x_max - w + 1e-12 * L; c += 0.5 * w) {
            out.push_back({c, w, 0.0, 1.0});
            out.push_back({c, w, 1.0, 1.0});
        }
    }
    return out;
}

struct WeakResidualRow {
    double center = 0.0, width = 0.0, time_slope = 0.0;
    double t1 = 0.0, t2 = 0.0;
    double mass = 0.0;      ///< signed defect of the mass identity
    double momentum = 0.0;  ///< signed defect of the momentum identity
};

/// Signed defects of
///   int int rho phi_t + rho u phi_x = [int rho phi]_{t1}^{t2}
///   int int rho u psi_t + rho u^2 psi_x + p div psi = [int rho u psi]_{t1}^{t2}
/// with the same bump as phi and psi (radial: psi = phi e_r, div psi = phi_r + phi / r).
inline std::vector<WeakResidualRow> weak_form_residual(const FlowField& f, const EosParams& p, const std::vector<TestFunction>& tests,
                                                      const std::vector<std::pair<double, double>>& windows)
{
    const Grid& g = f.grid;
    const bool radial = g.geometry() == Geometry::radial;
    const double tol = 1e-12 * (g.x_max - g.x_min);
    std::vector<WeakResidualRow> rows;
    for (const TestFunction& tf : tests) {
        if (tf.center - tf.width < g.x_min - tol || tf.center + tf.width > g.x_max + tol)
            throw Error("weak_form_residual: test support exceeds the grid");
        for (const auto& [t1, t2] : windows) {
            if (!(t1 < t2) || t1 < g.t_start - 1e-9 * g.dt() || t2 > g.t_end + 1e-9 * g.dt())
                throw Error("weak_form_residual: window outside the field time range");
            const int k1 = g.frame_at(t1), k2 = g.frame_at(t2);
            if (k2 <= k1) throw Error("weak_form_residual: window holds fewer than two frames");
            std::vector<double> m_int, q_int;
            for (int k = k1; k <= k2; ++k) {
                const double t = g.t(k), wt = (k == k1 || k == k2) ? 0.5 * g.dt() : g.dt();
                std::vector<double> a(g.n_cells), b(g.n_cells);
                for (int i = 0; i < g.n_cells; ++i) {
                    const double x = g.x(i), vol = g.cell_volume(i);
                    const double rho = f.rho_at(k, i), m = f.mom_at(k, i);
                    const double mu2 = rho > 0.0 ? m * m / rho : 0.0;
                    const double phi = tf.value(t, x), phx = tf.d_dx(t, x), pht = tf.d_dt(t, x);
                    const double div = radial ? phx + phi / x : phx;
                    a[i] = (rho * pht + m * phx) * vol;
                    b[i] = (m * pht + mu2 * phx + p.pressure(rho) * div) * vol;
                }
                m_int.push_back(wt * pairwise_sum(a));
                q_int.push_back(wt * pairwise_sum(b));
            }
            auto bracket = [&](int k, bool momentum) {
                std::vector<double> c(g.n_cells);
                for (int i = 0; i < g.n_cells; ++i)
                    c[i] = (momentum ? f.mom_at(k, i) : f.rho_at(k, i)) * tf.value(g.t(k), g.x(i)) * g.cell_volume(i);
                return pairwise_sum(c);
            };
            WeakResidualRow r{tf.center, tf.width, tf.time_slope, g.t(k1), g.t(k2), 0.0, 0.0};
            r.mass = pairwise_sum(m_int) - (bracket(k2, false) - bracket(k1, false));
            r.momentum = pairwise_sum(q_int) - (bracket(k2, true) - bracket(k1, true));
            rows.push_back(r);
        }
    }
    return rows;
}

/// Largest |defect| over a residual table, separately for mass and momentum.
inline std::pair<double, double> max_weak_residual(const std::vector<WeakResidualRow>& rows)
{
    double a = 0.0, b = 0.0;
    for (const auto& r : rows) {
        a = std::max(a, std::abs(r.mass));
        b = std::max(b, std::abs(r.momentum));
    }
    return {a, b};
}

/// int (rho |u|^2 / 2 + H(rho)) at every frame.
inline std::vector<double> total_energy(const FlowField& f, const EosParams& p)
{
    const Grid& g = f.grid;
    std::vector<double> e(g.n_steps);
    std::vector<double> c(g.n_cells);
    for (int k = 0; k < g.n_steps; ++k) {
        for (int i = 0; i < g.n_cells; ++i) {
            const double rho = f.rho_at(k, i), m = f.mom_at(k, i);
            c[i] = ((rho > 0.0 ? 0.5 * m * m / rho : 0.0) + p.potential(rho)) * g.cell_volume(i);
        }
        e[k] = pairwise_sum(c);
        if (!std::isfinite(e[k])) throw Error("check_energy_admissibility: non-finite energy at frame " + std::to_string(k));
    }
    return e;
}

struct EnergyCheck {
    std::vector<double> energy;
    double margin = 0.0;  ///< min over frames of E(0) - E(t_k)
    double tol = 0.0;
    bool pass = false;
};

/// margin >= -(1e-8 E(0) + allowance) passes.
inline EnergyCheck check_energy_admissibility(const FlowField& f, const EosParams& p, double allowance = 0.0)
{
    if (f.grid.n_steps < 2) throw Error("check_energy_admissibility: at least two frames required");
    EnergyCheck c;
    c.energy = total_energy(f, p);
    c.margin = kInf;
    for (double e : c.energy) c.margin = std::min(c.margin, c.energy.front() - e);
    c.tol = 1e-8 * std::abs(c.energy.front()) + allowance;
    c.pass = c.margin >= -c.tol;
    return c;
}

struct LambdaEstimate {
    double raw = 0.0;    ///< max over tested (phi, xi) of the quotient; may be negative
    double value = 0.0;  ///< max(raw, 0): a lower bound for the true Lambda(t)
    int tests_used = 0;
};

/// Smallest Lambda(t) >= 0 for which the one-sided condition
///   int (-xi v grad(phi) xi + Lambda |xi|^2 phi) >= 0
/// holds on the tested family. Planar: Lambda >= int v phi' / int phi.
/// Radial: the eigen-directions of grad v are e_r (v_r') and e_theta (v_r / r);
/// both quotients are tested with -int d phi / int phi, d = v_r' or v_r / r.
/// Bumps whose support meets a cell without defined velocity are skipped.
inline LambdaEstimate estimate_lambda(const FlowField& f, double t)
{
    const Grid& g = f.grid;
    const int k = g.frame_at(t);
    std::vector<double> v(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) v[i] = f.velocity(k, i);
    LambdaEstimate out;
    out.raw = -kInf;
    const bool radial = g.geometry() == Geometry::radial;
    for (const TestFunction& tf : default_test_family(g)) {
        if (tf.time_slope != 0.0) continue;
        double num = 0.0, num_theta = 0.0, den = 0.0;
        bool ok = true;
        for (int i = 0; i < g.n_cells && ok; ++i) {
            const double x = g.x(i), phi = tf.value(t, x);
            if (phi == 0.0) continue;
            if (std::isnan(v[i])) {
                ok = false;
                break;
            }
            const double vol = g.cell_volume(i);
            if (!radial) {
                num += v[i] * tf.d_dx(t, x) * vol;
            } else {
                // centred difference of v_r inside the support
                const int a = std::max(i - 1, 0), b = std::min(i + 1, g.n_cells - 1);
                if (std::isnan(v[a]) || std::isnan(v[b])) {
                    ok = false;
                    break;
                }
                num -= (v[b] - v[a]) / (g.x(b) - g.x(a)) * phi * vol;
                num_theta -= v[i] / x * phi * vol;
            }
            den += phi * vol;
        }
        if (!ok || !(den > 0.0)) continue;
        ++out.tests_used;
        out.raw = std::max(out.raw, num / den);
        if (radial) out.raw = std::max(out.raw, num_theta / den);
    }
    if (out.tests_used == 0) out.raw = 0.0;  // vacuum everywhere
    out.value = std::max(out.raw, 0.0);
    return out;
}

/// Lambda estimate at every frame (frame 0 included).
inline std::vector<double> lambda_series(const FlowField& f)
{
    std::vector<double> l(f.grid.n_steps);
    for (int k = 0; k < f.grid.n_steps; ++k) l[k] = estimate_lambda(f, f.grid.t(k)).value;
    return l;
}

struct VacuumVelocityResidual {
    double max_residual = 0.0;
    int exterior_cells = 0;
};

/// max |u_t + u u_x| over vacuum cells of interior frames. The closure is
/// analytic, so it is differenced with steps 1e-5 of the time span and of
/// the domain length rather than with the grid spacings.
inline VacuumVelocityResidual vacuum_velocity_residual(const FlowField& f)
{
    const Grid& g = f.grid;
    VacuumVelocityResidual r;
    const double dt = 1e-5 * (g.t_end - g.t_start), dx = 1e-5 * (g.x_max - g.x_min);
    for (int k = 1; k + 1 < g.n_steps; ++k)
        for (int i = 0; i < g.n_cells; ++i) {
            if (f.rho_at(k, i) > 0.0) continue;
            if (!f.exterior_velocity) throw Error("vacuum_velocity_residual: vacuum cells present but no exterior velocity closure");
            const auto& u = *f.exterior_velocity;
            const double t = g.t(k), x = g.x(i);
            const double ut = (u(t + dt, x) - u(t - dt, x)) / (2.0 * dt);
            const double ux = (u(t, x + dx) - u(t, x - dx)) / (2.0 * dx);
            r.max_residual = std::max(r.max_residual, std::abs(ut + u(t, x) * ux));
            ++r.exterior_cells;
        }
    return r;
}

struct VacuumIntegrability {
    std::vector<double> eps;
    std::vector<double> integrals;  ///< int over W_eps of rho_eps^-theta (0 when the mask is empty)
    double uniformity_factor = 4.0;
    bool pass = false;
};

/// int_{W_eps[t1, t2]} rho_eps^-theta dz; trapezoid in time, cell volumes in space.
inline double vacuum_integral(const FlowField& f, const MollifierKernel& k, double eps, double theta, double t1, double t2)
{
    const Grid& g = f.grid;
    const VacuumNeighborhood w = vacuum_mask(f, k, eps, t1, t2);
    const ScalarField r = mollify(density_of(f), k, eps);
    std::vector<double> terms;
    for (int kk = w.k_first; kk <= w.k_last; ++kk) {
        const double wt = (kk == w.k_first || kk == w.k_last) ? 0.5 * g.dt() : g.dt();
        for (int i = 0; i < g.n_cells; ++i)
            if (w.contains(kk, i)) terms.push_back(wt * g.cell_volume(i) * std::pow(r.at(kk, i), -theta));
    }
    return pairwise_sum(terms);
}

/// Boundedness trend across eps: max <= uniformity_factor * min of the nonzero entries.
inline VacuumIntegrability vacuum_integrability(const FlowField& f, const MollifierKernel& k, double theta, const std::vector<double>& eps_seq,
                                                double t1, double t2, double uniformity_factor = 4.0)
{
    if (!(theta > 0.0)) throw Error("vacuum_integrability: theta > 0 required");
    VacuumIntegrability v;
    v.eps = eps_seq;
    v.uniformity_factor = uniformity_factor;
    for (double e : eps_seq) v.integrals.push_back(vacuum_integral(f, k, e, theta, t1, t2));
    double lo = kInf, hi = 0.0;
    for (double x : v.integrals)
        if (x > 0.0) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    v.pass = std::isfinite(hi) && (hi == 0.0 || hi <= uniformity_factor * lo);
    return v;
}

/// One verdict per criterion plus the supporting numbers.
struct AdmissibilityReport {
    std::optional<std::pair<double, double>> weak_residual;  ///< max |mass|, max |momentum|
    std::optional<EnergyCheck> energy;
    std::vector<double> lambda_estimate;
    std::optional<VacuumVelocityResidual> vacuum_velocity;
    std::optional<VacuumIntegrability> vacuum_integrals;
    std::vector<std::pair<std::string, bool>> verdicts;

    bool pass() const
    {
        return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
    }
};

struct AdmissibilityOptions {
    double energy_allowance = 0.0;
    double weak_tol = 1e-2;
    double vacuum_velocity_tol = 1e-6;
    double theta = 0.0;  ///< 0 skips the integrability check
    std::vector<double> eps_seq;
    double uniformity_factor = 4.0;
};

inline AdmissibilityReport check_admissibility(const FlowField& f, const EosParams& p, const AdmissibilityOptions& o = {})
{
    AdmissibilityReport r;
    const Grid& g = f.grid;
    std::vector<TestFunction> tests = default_test_family(g);
    if (g.geometry() == Geometry::radial)
        tests.erase(std::remove_if(tests.begin(), tests.end(), [&](const TestFunction& t) { return t.center - t.width < 0.5 * g.dx(); }),
                    tests.end());
    r.weak_residual = max_weak_residual(weak_form_residual(f, p, tests, {{g.t_start, g.t_end}}));
    r.verdicts.push_back({"weak_form", std::max(r.weak_residual->first, r.weak_residual->second) <= o.weak_tol});
    r.energy = check_energy_admissibility(f, p, o.energy_allowance);
    r.verdicts.push_back({"energy", r.energy->pass});
    r.lambda_estimate = lambda_series(f);
    const bool has_vacuum = std::any_of(f.rho.begin(), f.rho.end(), [](double x) { return x <= 0.0; });
    if (has_vacuum && f.exterior_velocity) {
        r.vacuum_velocity = vacuum_velocity_residual(f);
        r.verdicts.push_back({"vacuum_velocity", r.vacuum_velocity->max_residual <= o.vacuum_velocity_tol});
    }
    if (o.theta > 0.0 && !o.eps_seq.empty()) {
        r.vacuum_integrals = vacuum_integrability(f, default_kernel(g.dim), o.theta, o.eps_seq, g.t_start, g.t_end, o.uniformity_factor);
        r.verdicts.push_back({"vacuum_integrability", r.vacuum_integrals->pass});
    }
    return r;
}

} // namespace eulervac
