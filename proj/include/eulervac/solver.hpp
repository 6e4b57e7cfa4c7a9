#pragma once

/**
 * @file solver.hpp
 * @brief Finite-volume scheme for 1D and radially symmetric 2D isentropic
 * Euler with vacuum.
 *
 * Conservative variables (rho, m). Near vacuum the velocity is
 * desingularised, u = rho m / (rho^2 + eps_vel^2), and the mass flux uses
 * rho u so an empty cell never emits mass. Radial runs update the annulus
 * averages with face areas 2 pi r_{i +- 1/2}; the pressure source
 * p_i (A_+ - A_-) / V_i exactly balances the pressure flux of a state at rest.
 *
 * First order uses forward Euler; the minmod option reconstructs (rho, u)
 * piecewise linearly and steps with the two-stage SSP Runge-Kutta method.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/eos.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

enum class Flux { rusanov, hll };
enum class Limiter { none, minmod };

inline std::string to_string(Flux f) { return f == Flux::rusanov ? "rusanov" : "hll"; }
inline std::string to_string(Limiter l) { return l == Limiter::none ? "none" : "minmod"; }

struct SchemeConfig {
    Flux flux = Flux::rusanov;
    double cfl = 0.45;
    double eps_vel = 1e-12;
    Limiter limiter = Limiter::none;
    Geometry geometry = Geometry::planar;

    void validate() const
    {
        if (!(cfl > 0.0) || cfl > 0.9) throw Error("SchemeConfig: cfl must lie in (0, 0.9]");
        if (!(eps_vel > 0.0)) throw Error("SchemeConfig: eps_vel > 0 required");
    }
};

/// One time level of (rho, m) on the cells of a grid.
struct Frame {
    std::vector<double> rho;
    std::vector<double> mom;
};

struct AdvanceStats {
    long steps = 0;
    long rounding_zeroed = 0;  ///< densities within rounding of zero reset to exactly 0
};

namespace detail {

inline double desing_velocity(double rho, double m, double eps_vel)
{
    if (rho <= 0.0) return 0.0;
    return rho * m / (rho * rho + eps_vel * eps_vel);
}

struct FaceState {
    double rho, u;
};

inline void physical_flux(const EosParams& p, const FaceState& s, double& f_mass, double& f_mom)
{
    f_mass = s.rho * s.u;
    f_mom = s.rho * s.u * s.u + p.pressure(s.rho);
}

inline void numerical_flux(const EosParams& p, Flux kind, const FaceState& L, const FaceState& R, double& f_mass, double& f_mom)
{
    double fl0, fl1, fr0, fr1;
    physical_flux(p, L, fl0, fl1);
    physical_flux(p, R, fr0, fr1);
    const double cl = L.rho > 0.0 ? p.sound_speed(L.rho) : 0.0;
    const double cr = R.rho > 0.0 ? p.sound_speed(R.rho) : 0.0;
    const double ml = L.rho * L.u, mr = R.rho * R.u;
    if (kind == Flux::rusanov) {
        const double s = std::max(std::abs(L.u) + cl, std::abs(R.u) + cr);
        f_mass = 0.5 * (fl0 + fr0) - 0.5 * s * (R.rho - L.rho);
        f_mom = 0.5 * (fl1 + fr1) - 0.5 * s * (mr - ml);
        return;
    }
    // HLL with vacuum-front speeds u -+ 2c/(gamma-1) when one side is empty
    const double g1 = p.gamma - 1.0;
    double sl = std::min(L.u - cl, R.u - cr);
    double sr = std::max(L.u + cl, R.u + cr);
    if (R.rho == 0.0) {
        sl = L.u - cl;
        sr = L.u + 2.0 * cl / g1;
    }
    if (L.rho == 0.0) {
        sl = R.u - 2.0 * cr / g1;
        sr = R.u + cr;
    }
    if (L.rho == 0.0 && R.rho == 0.0) {
        f_mass = f_mom = 0.0;
        return;
    }
    if (sl >= 0.0) {
        f_mass = fl0;
        f_mom = fl1;
    } else if (sr <= 0.0) {
        f_mass = fr0;
        f_mom = fr1;
    } else {
        const double inv = 1.0 / (sr - sl);
        f_mass = (sr * fl0 - sl * fr0 + sl * sr * (R.rho - L.rho)) * inv;
        f_mom = (sr * fl1 - sl * fr1 + sl * sr * (mr - ml)) * inv;
    }
}

inline double minmod(double a, double b)
{
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

/// Ghost-extended primitive value at cell i (transmissive outer boundary,
/// mirror at the radial axis with odd velocity).
inline FaceState cell_state(const Frame& f, int i, const SchemeConfig& cfg)
{
    const int n = static_cast<int>(f.rho.size());
    double sign = 1.0;
    if (i < 0) {
        if (cfg.geometry == Geometry::radial) {
            i = -i - 1;
            sign = -1.0;
        } else {
            i = 0;
        }
    }
    if (i >= n) i = n - 1;
    return {f.rho[i], sign * desing_velocity(f.rho[i], f.mom[i], cfg.eps_vel)};
}

/// d/dt of the cell averages.
inline void rhs(const Frame& f, const Grid& g, const SchemeConfig& cfg, const EosParams& p, std::vector<double>& d_rho,
                std::vector<double>& d_mom)
{
    const int n = g.n_cells;
    const double h = g.dx();
    std::vector<double> fm(n + 1), fp(n + 1);
    std::vector<double> srho(n + 2, 0.0), su(n + 2, 0.0);
    if (cfg.limiter == Limiter::minmod) {
        for (int i = -1; i <= n; ++i) {
            const FaceState a = cell_state(f, i - 1, cfg), b = cell_state(f, i, cfg), c = cell_state(f, i + 1, cfg);
            srho[i + 1] = minmod(b.rho - a.rho, c.rho - b.rho);
            su[i + 1] = minmod(b.u - a.u, c.u - b.u);
        }
    }
    for (int j = 0; j <= n; ++j) {
        // face between cells j-1 and j
        FaceState L = cell_state(f, j - 1, cfg), R = cell_state(f, j, cfg);
        L.rho += 0.5 * srho[j];
        L.u += 0.5 * su[j];
        R.rho -= 0.5 * srho[j + 1];
        R.u -= 0.5 * su[j + 1];
        numerical_flux(p, cfg.flux, L, R, fm[j], fp[j]);
    }
    d_rho.assign(n, 0.0);
    d_mom.assign(n, 0.0);
    if (cfg.geometry == Geometry::planar) {
        for (int i = 0; i < n; ++i) {
            d_rho[i] = -(fm[i + 1] - fm[i]) / h;
            d_mom[i] = -(fp[i + 1] - fp[i]) / h;
        }
        return;
    }
    // per unit angle: areas r_{i +- 1/2}, volumes r_i h
    for (int i = 0; i < n; ++i) {
        const double am = i * h, ap = (i + 1) * h, vol = g.x(i) * h;
        d_rho[i] = -(ap * fm[i + 1] - am * fm[i]) / vol;
        d_mom[i] = -(ap * fp[i + 1] - am * fp[i]) / vol + p.pressure(f.rho[i]) * (ap - am) / vol;
    }
}

inline void finish_frame(Frame& f, const Frame& ref, AdvanceStats* stats)
{
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
        if (!std::isfinite(f.rho[i]) || !std::isfinite(f.mom[i])) throw InvariantViolation("advance: non-finite state in cell " + std::to_string(i));
        if (f.rho[i] < 0.0) {
            // allow only rounding-level undershoot relative to the neighbourhood scale
            double scale = ref.rho[i];
            if (i > 0) scale = std::max(scale, ref.rho[i - 1]);
            if (i + 1 < f.rho.size()) scale = std::max(scale, ref.rho[i + 1]);
            if (f.rho[i] < -64.0 * std::numeric_limits<double>::epsilon() * scale)
                throw InvariantViolation("advance: negative density " + std::to_string(f.rho[i]) + " in cell " + std::to_string(i));
            f.rho[i] = 0.0;
            if (stats) ++stats->rounding_zeroed;
        }
        if (f.rho[i] == 0.0) f.mom[i] = 0.0;
    }
}

} // namespace detail

/// Largest signal speed |u| + c over the frame.
inline double max_wave_speed(const Frame& f, const EosParams& p, double eps_vel)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
        if (f.rho[i] <= 0.0) continue;
        s = std::max(s, std::abs(detail::desing_velocity(f.rho[i], f.mom[i], eps_vel)) + p.sound_speed(f.rho[i]));
    }
    return s;
}

/// Geometric factor on the CFL number: the first annulus has face-to-volume
/// ratio twice the planar one.
inline double cfl_geometry_factor(const SchemeConfig& cfg) { return cfg.geometry == Geometry::radial ? 0.5 : 1.0; }

/// Largest stable step for the frame.
inline double stable_dt(const Frame& f, const Grid& g, const SchemeConfig& cfg, const EosParams& p)
{
    const double s = max_wave_speed(f, p, cfg.eps_vel);
    if (s == 0.0) return kInf;
    return cfg.cfl * cfl_geometry_factor(cfg) * g.dx() / s;
}

/// One conservative step of size dt.
inline Frame advance(const Frame& f, const Grid& g, const SchemeConfig& cfg, const EosParams& p, double dt, AdvanceStats* stats = nullptr)
{
    cfg.validate();
    if ((cfg.geometry == Geometry::radial) != (g.geometry() == Geometry::radial)) throw Error("advance: scheme geometry does not match the grid");
    if (f.rho.size() != static_cast<std::size_t>(g.n_cells) || f.mom.size() != f.rho.size()) throw Error("advance: frame does not match grid");
    if (!(dt > 0.0)) throw Error("advance: dt must be positive");
    const double s = max_wave_speed(f, p, cfg.eps_vel);
    if (dt * s > cfg.cfl * cfl_geometry_factor(cfg) * g.dx() * (1.0 + 1e-12))
        throw Error("advance: CFL violation (dt * max speed / dx = " + std::to_string(dt * s / g.dx()) + ")");

    std::vector<double> dr, dm;
    detail::rhs(f, g, cfg, p, dr, dm);
    Frame a = f;
    for (int i = 0; i < g.n_cells; ++i) {
        a.rho[i] += dt * dr[i];
        a.mom[i] += dt * dm[i];
    }
    detail::finish_frame(a, f, stats);
    if (cfg.limiter == Limiter::minmod) {
        detail::rhs(a, g, cfg, p, dr, dm);
        Frame b = f;
        for (int i = 0; i < g.n_cells; ++i) {
            b.rho[i] = 0.5 * f.rho[i] + 0.5 * (a.rho[i] + dt * dr[i]);
            b.mom[i] = 0.5 * f.mom[i] + 0.5 * (a.mom[i] + dt * dm[i]);
        }
        detail::finish_frame(b, f, stats);
        a = std::move(b);
    }
    if (stats) ++stats->steps;
    return a;
}

/// Radial step; the configuration must be radial.
inline Frame radial_advance(const Frame& f, const Grid& g, const SchemeConfig& cfg, const EosParams& p, double dt, AdvanceStats* stats = nullptr)
{
    if (cfg.geometry != Geometry::radial) throw Error("radial_advance: scheme geometry must be radial");
    return advance(f, g, cfg, p, dt, stats);
}

inline Frame frame_of(const FlowField& field, int k)
{
    const auto r = field.rho_frame(k), m = field.mom_frame(k);
    return {std::vector<double>(r.begin(), r.end()), std::vector<double>(m.begin(), m.end())};
}

/// Evolve an initial frame over [grid.t_start, grid.t_end], storing the
/// grid's n_steps equally spaced output frames. Steps are shortened to land
/// on output times exactly.
inline FlowField simulate(const Frame& initial, const Grid& grid, const SchemeConfig& cfg, const EosParams& p, AdvanceStats* stats = nullptr)
{
    grid.validate();
    cfg.validate();
    p.validate();
    FlowField out;
    out.grid = grid;
    out.role = Role::weak;
    out.rho.resize(grid.size());
    out.mom.resize(grid.size());
    Frame cur = initial;
    detail::finish_frame(cur, initial, nullptr);
    auto store = [&](int k) {
        std::copy(cur.rho.begin(), cur.rho.end(), out.rho.begin() + out.idx(k, 0));
        std::copy(cur.mom.begin(), cur.mom.end(), out.mom.begin() + out.idx(k, 0));
    };
    store(0);
    double t = grid.t_start;
    for (int k = 1; k < grid.n_steps; ++k) {
        const double target = grid.t(k);
        while (t < target) {
            double dt = stable_dt(cur, grid, cfg, p);
            bool last = false;
            if (t + dt >= target - 1e-14 * std::max(1.0, std::abs(target))) {
                dt = target - t;
                last = true;
            }
            cur = advance(cur, grid, cfg, p, dt, stats);
            t = last ? target : t + dt;
        }
        store(k);
    }
    return out;
}

/// Convenience: sample initial data at cell centres and evolve.
inline FlowField simulate(const std::function<double(double)>& rho0, const std::function<double(double)>& u0, const Grid& grid,
                          const SchemeConfig& cfg, const EosParams& p, AdvanceStats* stats = nullptr)
{
    Grid g0 = grid;
    g0.n_steps = 2;
    g0.t_end = grid.t_start + 1.0;
    const FlowField init = build_field(g0, rho0, u0);
    return simulate(frame_of(init, 0), grid, cfg, p, stats);
}

/// Discrete total energy sum (1/2 m^2 / rho + H(rho)) V_i of one frame.
inline double frame_energy(const Frame& f, const Grid& g, const EosParams& p)
{
    std::vector<double> t(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
        const double r = f.rho[i];
        t[i] = (r > 0.0 ? 0.5 * f.mom[i] * f.mom[i] / r : 0.0) + p.potential(r);
        t[i] *= g.cell_volume(i);
    }
    return pairwise_sum(t);
}

inline double frame_mass(const Frame& f, const Grid& g)
{
    std::vector<double> t(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) t[i] = f.rho[i] * g.cell_volume(i);
    return pairwise_sum(t);
}

} // namespace eulervac
