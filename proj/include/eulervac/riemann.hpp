#pragma once

/**
 * @file riemann.hpp
 * @brief Exact solution of isentropic Riemann problems connected by
 * rarefactions (possibly with a vacuum middle state).
 *
 * With c = sqrt(kappa gamma) rho^((gamma-1)/2) the Riemann invariants
 * w_L = u_L + 2 c_L / (gamma - 1) and w_R = u_R - 2 c_R / (gamma - 1)
 * are constant across the left and right fans. Derivatives in (t, x) are
 * returned as well, so the solution can serve as a C^1 strong solution
 * away from t = 0.
 */

#include <cmath>
#include <string>

#include "eulervac/eos.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

struct RiemannSetup {
    double rho_L = 1.0, u_L = 0.0;
    double rho_R = 1.0, u_R = 0.0;
    double x0 = 0.0;  ///< initial discontinuity
    EosParams params;
};

/// Density, velocity and their first derivatives at a point.
struct PointState {
    double rho = 0.0, u = 0.0;
    double rho_t = 0.0, rho_x = 0.0;
    double u_t = 0.0, u_x = 0.0;
};

struct RarefactionWaves {
    double w_L = 0.0, w_R = 0.0;
    double c_L = 0.0, c_R = 0.0;
    double u_star = 0.0, c_star = 0.0, rho_star = 0.0;
    bool vacuum_middle = false;
    double left_head = 0.0, left_tail = 0.0;    ///< xi range of the left fan
    double right_tail = 0.0, right_head = 0.0;  ///< xi range of the right fan
};

inline double sound_speed_of(const EosParams& p, double rho) { return std::sqrt(p.kappa * p.gamma) * std::pow(rho, 0.5 * (p.gamma - 1.0)); }

inline double density_of_sound_speed(const EosParams& p, double c)
{
    if (c <= 0.0) return 0.0;
    return std::pow(c * c / (p.kappa * p.gamma), 1.0 / (p.gamma - 1.0));
}

/// Wave pattern of a rarefaction-connected setup; throws if a shock is needed.
inline RarefactionWaves rarefaction_waves(const RiemannSetup& s)
{
    const EosParams& p = s.params;
    p.validate();
    if (s.rho_L < 0.0 || s.rho_R < 0.0) throw Error("exact_rarefaction: negative density");
    if (s.rho_L == 0.0 || s.rho_R == 0.0) throw Error("exact_rarefaction: vacuum outer states are not supported");
    RarefactionWaves w;
    const double g1 = p.gamma - 1.0;
    w.c_L = sound_speed_of(p, s.rho_L);
    w.c_R = sound_speed_of(p, s.rho_R);
    w.w_L = s.u_L + 2.0 * w.c_L / g1;
    w.w_R = s.u_R - 2.0 * w.c_R / g1;
    w.u_star = 0.5 * (w.w_L + w.w_R);
    w.c_star = 0.25 * g1 * (w.w_L - w.w_R);
    const double tol = 1e-12 * (1.0 + w.c_L + w.c_R);
    if (w.c_star > w.c_L + tol || w.c_star > w.c_R + tol) throw Error("exact_rarefaction: not a rarefaction connection (a shock is required)");
    w.left_head = s.u_L - w.c_L;
    w.right_head = s.u_R + w.c_R;
    if (w.c_star <= 0.0) {
        w.vacuum_middle = true;
        w.c_star = 0.0;
        w.rho_star = 0.0;
        w.left_tail = w.w_L;
        w.right_tail = w.w_R;
    } else {
        w.rho_star = density_of_sound_speed(p, w.c_star);
        w.left_tail = w.u_star - w.c_star;
        w.right_tail = w.u_star + w.c_star;
    }
    return w;
}

/// Self-similar state at (t, x) with derivatives; t must be positive.
inline PointState exact_rarefaction(const RiemannSetup& s, const RarefactionWaves& w, double t, double x)
{
    if (!(t > 0.0)) throw Error("exact_rarefaction: t > 0 required");
    const EosParams& p = s.params;
    const double g1 = p.gamma - 1.0;
    const double k = g1 / (p.gamma + 1.0);
    const double xi = (x - s.x0) / t;
    PointState st;
    auto fan = [&](double c, double dc_dxi, double u, double du_dxi) {
        st.rho = density_of_sound_speed(p, c);
        st.u = u;
        const double drho_dxi = st.rho > 0.0 ? st.rho * (2.0 / g1) * dc_dxi / c : 0.0;
        st.rho_x = drho_dxi / t;
        st.rho_t = -xi * drho_dxi / t;
        st.u_x = du_dxi / t;
        st.u_t = -xi * du_dxi / t;
    };
    if (xi <= w.left_head) {
        st.rho = s.rho_L;
        st.u = s.u_L;
    } else if (xi < w.left_tail) {
        const double c = k * (w.w_L - xi);
        fan(c, -k, xi + c, 1.0 - k);
    } else if (xi <= w.right_tail) {
        st.rho = w.rho_star;
        // inside a vacuum middle the velocity is the free-streaming x / t
        st.u = w.vacuum_middle ? xi : w.u_star;
        if (w.vacuum_middle) {
            st.u_x = 1.0 / t;
            st.u_t = -xi / t;
        }
    } else if (xi < w.right_head) {
        const double c = k * (xi - w.w_R);
        fan(c, k, xi - c, 1.0 - k);
    } else {
        st.rho = s.rho_R;
        st.u = s.u_R;
    }
    return st;
}

inline PointState exact_rarefaction(const RiemannSetup& s, double t, double x)
{
    return exact_rarefaction(s, rarefaction_waves(s), t, x);
}

} // namespace eulervac
