#pragma once

/**
 * @file strong_solution.hpp
 * @brief Analytic C^1 strong-solution candidates (r, v) with their first
 * derivatives, and sampling onto a grid.
 */

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "eulervac/core.hpp"
#include "eulervac/riemann.hpp"

namespace eulervac {

struct AnalyticStrong {
    std::string name;
    std::function<double(double t, double x)> r;
    std::function<double(double t, double x)> v;
    /// All four derivatives (r_t, r_x, v_t, v_x) at once; empty when unknown.
    std::function<PointState(double t, double x)> derivatives;

    PointState state(double t, double x) const
    {
        if (!derivatives) throw Error("strong solution '" + name + "' carries no analytic derivatives");
        return derivatives(t, x);
    }
};

inline AnalyticStrong constant_strong(double rho, double u)
{
    AnalyticStrong s;
    s.name = "constant";
    s.r = [rho](double, double) { return rho; };
    s.v = [u](double, double) { return u; };
    s.derivatives = [rho, u](double, double) {
        PointState p;
        p.rho = rho;
        p.u = u;
        return p;
    };
    return s;
}

inline AnalyticStrong rarefaction_strong(const RiemannSetup& setup)
{
    const RarefactionWaves w = rarefaction_waves(setup);
    AnalyticStrong s;
    s.name = "rarefaction";
    s.derivatives = [setup, w](double t, double x) { return exact_rarefaction(setup, w, t, x); };
    s.r = [f = s.derivatives](double t, double x) { return f(t, x).rho; };
    s.v = [f = s.derivatives](double t, double x) { return f(t, x).u; };
    return s;
}

/// r = r0 + a sin(2 pi k x) cos(t), v = b sin(2 pi k x) + c t: smooth,
/// bounded away from vacuum when a < r0. Not a solution of the equations;
/// used where only smoothness matters.
inline AnalyticStrong manufactured_strong(double r0 = 1.0, double a = 0.3, double b = 0.5, double c = 0.2, double k = 1.0)
{
    const double w = 2.0 * std::numbers::pi * k;
    AnalyticStrong s;
    s.name = "manufactured";
    s.derivatives = [=](double t, double x) {
        PointState p;
        p.rho = r0 + a * std::sin(w * x) * std::cos(t);
        p.rho_x = a * w * std::cos(w * x) * std::cos(t);
        p.rho_t = -a * std::sin(w * x) * std::sin(t);
        p.u = b * std::sin(w * x) + c * t;
        p.u_x = b * w * std::cos(w * x);
        p.u_t = c;
        return p;
    };
    s.r = [f = s.derivatives](double t, double x) { return f(t, x).rho; };
    s.v = [f = s.derivatives](double t, double x) { return f(t, x).u; };
    return s;
}

/// (r, v)(t + tau, x): a fan started at t = -tau is already C^0 and
/// Lipschitz at t = 0.
inline AnalyticStrong time_shifted(const AnalyticStrong& s, double tau)
{
    AnalyticStrong out;
    out.name = s.name;
    out.r = [f = s.r, tau](double t, double x) { return f(t + tau, x); };
    out.v = [f = s.v, tau](double t, double x) { return f(t + tau, x); };
    if (s.derivatives) out.derivatives = [f = s.derivatives, tau](double t, double x) { return f(t + tau, x); };
    return out;
}

/// Sample (r, r v) at cell centres; the velocity closure is the analytic v.
inline FlowField sample_strong(const AnalyticStrong& s, const Grid& grid)
{
    FlowField f = build_field(grid, s.r, s.v, Role::strong);
    f.exterior_velocity = VelocityClosure{s.name, {}, s.v};
    return f;
}

} // namespace eulervac
