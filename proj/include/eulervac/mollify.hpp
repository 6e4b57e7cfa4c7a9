#pragma once

/**
 * @file mollify.hpp
 * @brief Space-time mollification with compactly supported C^1 kernels.
 *
 * Kernels are separable, eta(t, y) = c T(t / l) S(|y| / l):
 *   - polynomial_bump: T(s) = (1 - s^2)^k, S(r) = (1 - r^2)^k (k = 3 by default),
 *     symmetric in time;
 *   - one_sided: T(s) = (s (1 - s))^m on [0, 1], S(r) = (1 - r^2)^m, which only
 *     looks into the past and keeps int eta^-theta finite when m theta < 1.
 *
 * The discrete convolution uses the grid nodes themselves (planar) or a polar
 * quadrature of the unit disc with linear interpolation of the radial profile
 * (radial). Value weights are renormalised to sum to one, derivative weights
 * to have unit first moment, so constants and linear data are reproduced
 * exactly. Out-of-range samples follow the field's extension mode in space
 * and are zero in time.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

enum class KernelProfile { polynomial_bump, one_sided };

inline std::string to_string(KernelProfile p) { return p == KernelProfile::polynomial_bump ? "polynomial_bump" : "one_sided"; }

struct MollifierKernel {
    KernelProfile profile = KernelProfile::polynomial_bump;
    double support = 1.0;  ///< l
    int power = 3;         ///< k for the bump, m for the one-sided kernel
    int space_dim = 1;     ///< 1 planar, 2 radially symmetric plane
    double normalization = 1.0;  ///< quadrature value of int eta, filled by make_kernel

    /// Unnormalised time profile T on the scaled variable s = tau / l.
    double time_profile(double s) const
    {
        if (profile == KernelProfile::polynomial_bump) return poly_bump(s, power);
        if (s <= 0.0 || s >= 1.0) return 0.0;
        return std::pow(s * (1.0 - s), power);
    }

    double time_profile_deriv(double s) const
    {
        if (profile == KernelProfile::polynomial_bump) return poly_bump_deriv(s, power);
        if (s <= 0.0 || s >= 1.0) return 0.0;
        return power * std::pow(s * (1.0 - s), power - 1) * (1.0 - 2.0 * s);
    }

    /// Unnormalised spatial profile S on the scaled radius r = |y| / l.
    double space_profile(double r) const { return poly_bump(r, power); }
    double space_profile_deriv(double r) const { return poly_bump_deriv(r, power); }

    double time_lo() const { return profile == KernelProfile::polynomial_bump ? -1.0 : 0.0; }
    double time_hi() const { return 1.0; }

    /// Normalisation constant c so that int eta = 1.
    double constant() const
    {
        std::vector<double> x, w;
        gauss_legendre(64, time_lo(), time_hi(), x, w);
        double ti = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) ti += w[j] * time_profile(x[j]);
        gauss_legendre(64, space_dim == 1 ? -1.0 : 0.0, 1.0, x, w);
        double si = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            si += w[j] * space_profile(x[j]) * (space_dim == 1 ? 1.0 : 2.0 * std::numbers::pi * x[j]);
        // scaled variables: dt dy = l^(1 + dim) ds dr
        return 1.0 / (ti * si * std::pow(support, 1 + space_dim));
    }

    /// eta(tau, |y|) including the constant.
    double value(double tau, double y) const
    {
        return constant() * time_profile(tau / support) * space_profile(std::abs(y) / support);
    }
};

/// Build a kernel and record the quadrature check of int eta.
inline MollifierKernel make_kernel(KernelProfile profile = KernelProfile::polynomial_bump, int space_dim = 1,
                                   double support = 1.0, int power = -1)
{
    if (!(support > 0.0)) throw Error("make_kernel: support radius must be positive");
    if (space_dim != 1 && space_dim != 2) throw Error("make_kernel: space_dim must be 1 or 2");
    MollifierKernel k;
    k.profile = profile;
    k.space_dim = space_dim;
    k.support = support;
    k.power = power > 0 ? power : (profile == KernelProfile::polynomial_bump ? 3 : 2);
    if (k.power < 2) throw Error("make_kernel: power >= 2 needed for a C^1 kernel");
    // independent check: composite Gauss on 16 panels per direction
    const double c = k.constant();
    std::vector<double> x, w;
    auto panel_integral = [&](auto&& f, double a, double b) {
        double s = 0.0;
        const int panels = 16;
        for (int p = 0; p < panels; ++p) {
            gauss_legendre(12, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, x, w);
            for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * f(x[j]);
        }
        return s;
    };
    const double l = support;
    const double ti = panel_integral([&](double t) { return k.time_profile(t / l); }, k.time_lo() * l, l);
    const double si = space_dim == 1 ? panel_integral([&](double y) { return k.space_profile(std::abs(y) / l); }, -l, l)
                                     : panel_integral([&](double r) { return 2.0 * std::numbers::pi * r * k.space_profile(r / l); }, 0.0, l);
    k.normalization = c * ti * si;
    return k;
}

/// Standard symmetric polynomial bump for the given geometry.
inline MollifierKernel default_kernel(int space_dim = 1) { return make_kernel(KernelProfile::polynomial_bump, space_dim); }

/// int over the kernel support of (eta + delta)^(-theta). Requires
/// power * theta < 1 when delta = 0.
inline double inverse_power_integral(const MollifierKernel& k, double theta, double delta)
{
    if (k.profile != KernelProfile::one_sided) throw Error("inverse_power_integral: defined for the one-sided kernel");
    if (delta == 0.0 && k.power * theta >= 1.0) throw Error("inverse_power_integral: int eta^-theta diverges (power * theta >= 1)");
    const double c = k.constant();
    const double l = k.support;
    // Gauss panels graded towards the endpoint singularities
    std::vector<double> sx, sw, rx, rw, x, w;
    const std::vector<double> edges = {0.0, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.2, 0.5, 0.8, 0.95, 0.99, 0.999, 0.9999, 1.0 - 1e-6, 1.0};
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        gauss_legendre(16, edges[e], edges[e + 1], x, w);
        sx.insert(sx.end(), x.begin(), x.end());
        sw.insert(sw.end(), w.begin(), w.end());
    }
    rx = sx;
    rw = sw;
    double total = 0.0;
    const double dim_factor = k.space_dim == 1 ? 2.0 : 2.0 * std::numbers::pi;
    for (std::size_t a = 0; a < sx.size(); ++a) {
        const double T = k.time_profile(sx[a]);
        for (std::size_t b = 0; b < rx.size(); ++b) {
            const double S = k.space_profile(rx[b]);
            const double jac = k.space_dim == 1 ? 1.0 : rx[b];
            total += sw[a] * rw[b] * dim_factor * jac * std::pow(c * T * S + delta, -theta);
        }
    }
    return total * std::pow(l, 1 + k.space_dim);
}

namespace detail {

/// Sparse linear map acting on one frame of cell values.
struct SpatialOperator {
    std::vector<std::vector<std::pair<int, double>>> rows;
    double scale = 1.0;  ///< applied after the weighted sum (1/(eps l) for derivatives)

    void apply(std::span<const double> in, std::span<double> out, Extension ext) const
    {
        const int n = static_cast<int>(in.size());
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (const auto& [j, w] : rows[i]) {
                double v;
                if (j >= 0 && j < n) v = in[j];
                else if (ext == Extension::constant) v = j < 0 ? in[0] : in[n - 1];
                else v = 0.0;
                s += w * v;
            }
            out[i] = s * scale;
        }
    }
};

inline void check_resolution(const Grid& g, const MollifierKernel& k, double eps)
{
    if (!(eps > 0.0)) throw Error("mollify: epsilon must be positive");
    if (!(eps * k.support > g.dx())) throw Error("mollify: under-resolved kernel (epsilon * l must exceed one cell width)");
}

/// Planar stencil on grid offsets; derivative rows carry the unit first moment.
inline SpatialOperator planar_operator(const Grid& g, const MollifierKernel& k, double eps, bool derivative)
{
    const double h = g.dx();
    const double rad = eps * k.support;
    const int half = static_cast<int>(std::ceil(rad / h));
    std::vector<double> w(2 * half + 1);
    for (int j = -half; j <= half; ++j) {
        const double s = j * h / rad;
        w[j + half] = derivative ? k.space_profile_deriv(std::abs(s)) * (s < 0 ? -1.0 : 1.0) : k.space_profile(std::abs(s));
    }
    double norm = 0.0;
    for (int j = -half; j <= half; ++j) norm += derivative ? -(j * h / rad) * w[j + half] : w[j + half];
    if (!(norm > 0.0)) throw Error("mollify: degenerate discrete kernel");
    SpatialOperator op;
    op.rows.resize(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
        auto& row = op.rows[i];
        row.reserve(2 * half + 1);
        // u_eps(x_i) = sum_j w_j u(x_i - j h)
        for (int j = -half; j <= half; ++j)
            if (w[j + half] != 0.0) row.emplace_back(i - j, w[j + half] / norm);
    }
    return op;
}

/// Radial operator: the 2D convolution of a radial profile, evaluated at
/// (r_i, 0) with a polar quadrature of the unit disc. Interpolation is
/// linear in r with the even reflection through the axis.
inline SpatialOperator radial_operator(const Grid& g, const MollifierKernel& k, double eps, bool derivative)
{
    const double h = g.dx();
    const double rad = eps * k.support;
    const int na = std::clamp(static_cast<int>(std::ceil(2.0 * rad / h)), 8, 256);
    const int nb = std::clamp(static_cast<int>(std::ceil(std::numbers::pi * rad / h)), 8, 384);
    struct Node { double y1, y2, w; };
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(na) * nb * 2);
    double norm = 0.0;
    for (int a = 0; a < na; ++a) {
        const double r = (a + 0.5) / na;
        for (int b = 0; b < nb; ++b) {
            const double phi = (b + 0.5) * std::numbers::pi / nb;
            const double c = std::cos(phi), s = std::sin(phi);
            const double w = derivative ? k.space_profile_deriv(r) * c * r : k.space_profile(r) * r;
            // the lower half-disc mirrors the upper one for radial data
            nodes.push_back({r * c, r * s, 2.0 * w});
            norm += derivative ? -(r * c) * 2.0 * w : 2.0 * w;
        }
    }
    if (!(norm > 0.0)) throw Error("mollify: degenerate discrete kernel");
    SpatialOperator op;
    op.rows.resize(g.n_cells);
    std::vector<double> acc;
    for (int i = 0; i < g.n_cells; ++i) {
        const double xi = g.x(i);
        const int lo = static_cast<int>(std::floor((xi - rad) / h)) - 2;
        const int hi = static_cast<int>(std::ceil((xi + rad) / h)) + 2;
        acc.assign(hi - lo + 1, 0.0);
        for (const Node& nd : nodes) {
            const double px = xi - rad * nd.y1, py = -rad * nd.y2;
            const double rr = std::hypot(px, py);
            const double f = rr / h - 0.5;
            int j0 = static_cast<int>(std::floor(f));
            const double fr = f - j0;
            int j1 = j0 + 1;
            if (j0 < 0) j0 = -j0 - 1;  // mirror through the axis
            if (j1 < 0) j1 = -j1 - 1;
            acc[j0 - lo] += nd.w * (1.0 - fr);
            acc[j1 - lo] += nd.w * fr;
        }
        auto& row = op.rows[i];
        for (int j = lo; j <= hi; ++j)
            if (acc[j - lo] != 0.0) row.emplace_back(j, acc[j - lo] / norm);
    }
    return op;
}

inline SpatialOperator spatial_operator(const Grid& g, const MollifierKernel& k, double eps, bool derivative)
{
    check_resolution(g, k, eps);
    if (g.geometry() == Geometry::radial && k.space_dim != 2) throw Error("mollify: radial fields need a space_dim = 2 kernel");
    if (g.geometry() == Geometry::planar && k.space_dim != 1) throw Error("mollify: planar fields need a space_dim = 1 kernel");
    SpatialOperator op = g.geometry() == Geometry::radial ? radial_operator(g, k, eps, derivative) : planar_operator(g, k, eps, derivative);
    if (derivative) op.scale = 1.0 / (eps * k.support);
    return op;
}

/// Weights over frame offsets j (value at t_k uses frame k - j).
struct TemporalStencil {
    int j_lo = 0;
    std::vector<double> w;
};

inline TemporalStencil temporal_stencil(const Grid& g, const MollifierKernel& k, double eps, bool derivative)
{
    const double dt = g.dt();
    const double rad = eps * k.support;
    const int half = static_cast<int>(std::ceil(rad / dt));
    TemporalStencil st;
    if (k.profile == KernelProfile::one_sided) {
        if (derivative) throw Error("mollify: time derivatives need a symmetric kernel");
        st.j_lo = 0;
        for (int j = 0; j <= half; ++j) st.w.push_back(k.time_profile(j * dt / rad));
    } else {
        st.j_lo = -half;
        for (int j = -half; j <= half; ++j) {
            const double s = j * dt / rad;
            st.w.push_back(derivative ? poly_bump_deriv(s, k.power) : poly_bump(s, k.power));
        }
    }
    double norm = 0.0;
    for (std::size_t a = 0; a < st.w.size(); ++a) {
        const int j = st.j_lo + static_cast<int>(a);
        norm += derivative ? -(j * dt) * st.w[a] : st.w[a];
    }
    if (!(norm > 0.0)) {
        if (derivative) throw Error("mollify: under-resolved kernel in time (epsilon * l must exceed the frame spacing)");
        if (k.profile == KernelProfile::one_sided) throw Error("mollify: under-resolved one-sided kernel in time");
        st.j_lo = 0;
        st.w = {1.0};
        return st;
    }
    for (double& x : st.w) x /= norm;
    return st;
}

inline std::vector<double> apply_space(const ScalarField& f, const SpatialOperator& op)
{
    const Grid& g = f.grid;
    std::vector<double> out(g.size());
    for (int k = 0; k < g.n_steps; ++k) {
        const std::size_t o = static_cast<std::size_t>(k) * g.n_cells;
        op.apply({f.values.data() + o, static_cast<std::size_t>(g.n_cells)}, {out.data() + o, static_cast<std::size_t>(g.n_cells)},
                 f.space_ext);
    }
    return out;
}

inline std::vector<double> apply_time(const Grid& g, const std::vector<double>& in, const TemporalStencil& st)
{
    std::vector<double> out(g.size(), 0.0);
    const int n = g.n_cells;
    for (int k = 0; k < g.n_steps; ++k) {
        for (std::size_t a = 0; a < st.w.size(); ++a) {
            const int src = k - (st.j_lo + static_cast<int>(a));
            if (src < 0 || src >= g.n_steps) continue;
            const double w = st.w[a];
            const double* s = in.data() + static_cast<std::size_t>(src) * n;
            double* d = out.data() + static_cast<std::size_t>(k) * n;
            for (int i = 0; i < n; ++i) d[i] += w * s[i];
        }
    }
    return out;
}

} // namespace detail

/// Mollified value together with its kernel-differentiated derivatives.
struct MollifiedScalar {
    ScalarField value;
    ScalarField d_dx;
    ScalarField d_dt;
};

/// u * eta_eps on the same grid.
inline ScalarField mollify(const ScalarField& f, const MollifierKernel& k, double eps)
{
    const auto sop = detail::spatial_operator(f.grid, k, eps, false);
    const auto tst = detail::temporal_stencil(f.grid, k, eps, false);
    return {f.grid, detail::apply_time(f.grid, detail::apply_space(f, sop), tst), f.space_ext};
}

/// Spatial derivative of u * eta_eps computed as u * (d eta_eps / dx).
inline ScalarField mollify_dx(const ScalarField& f, const MollifierKernel& k, double eps)
{
    const auto sop = detail::spatial_operator(f.grid, k, eps, true);
    const auto tst = detail::temporal_stencil(f.grid, k, eps, false);
    return {f.grid, detail::apply_time(f.grid, detail::apply_space(f, sop), tst), Extension::zero};
}

/// Time derivative of u * eta_eps computed as u * (d eta_eps / dt).
inline ScalarField mollify_dt(const ScalarField& f, const MollifierKernel& k, double eps)
{
    const auto sop = detail::spatial_operator(f.grid, k, eps, false);
    const auto tst = detail::temporal_stencil(f.grid, k, eps, true);
    return {f.grid, detail::apply_time(f.grid, detail::apply_space(f, sop), tst), Extension::zero};
}

inline MollifiedScalar mollify_with_derivatives(const ScalarField& f, const MollifierKernel& k, double eps)
{
    const auto sop = detail::spatial_operator(f.grid, k, eps, false);
    const auto sop_d = detail::spatial_operator(f.grid, k, eps, true);
    const auto tst = detail::temporal_stencil(f.grid, k, eps, false);
    const auto tst_d = detail::temporal_stencil(f.grid, k, eps, true);
    const auto sv = detail::apply_space(f, sop);
    return {{f.grid, detail::apply_time(f.grid, sv, tst), f.space_ext},
            {f.grid, detail::apply_time(f.grid, detail::apply_space(f, sop_d), tst), Extension::zero},
            {f.grid, detail::apply_time(f.grid, sv, tst_d), Extension::zero}};
}

/// Mollify density and momentum of a flow field.
inline FlowField mollify_field(const FlowField& field, const MollifierKernel& k, double eps)
{
    FlowField out = field;
    out.rho = mollify(density_of(field), k, eps).values;
    out.mom = mollify(momentum_of(field), k, eps).values;
    for (std::size_t j = 0; j < out.rho.size(); ++j) {
        if (out.rho[j] <= 0.0) {
            // nonnegative kernel: rho_eps = 0 forces m_eps = 0; clear rounding dust
            out.rho[j] = 0.0;
            out.mom[j] = 0.0;
        }
    }
    return out;
}

/// Spatial gradient of the mollified density of a field.
inline ScalarField gradient_mollified(const FlowField& field, const MollifierKernel& k, double eps)
{
    return mollify_dx(density_of(field), k, eps);
}

/// W_eps[t1, t2]: cells of frames inside [t1, t2] where rho_eps > 0.
inline VacuumNeighborhood vacuum_mask(const FlowField& field, const MollifierKernel& k, double eps, double t1, double t2)
{
    const Grid& g = field.grid;
    if (!(t1 < t2)) throw Error("vacuum_mask: empty window");
    const ScalarField r = mollify(density_of(field), k, eps);
    VacuumNeighborhood w;
    w.epsilon = eps;
    w.t1 = t1;
    w.t2 = t2;
    w.grid = g;
    w.k_first = std::max(0, static_cast<int>(std::ceil((t1 - g.t_start) / g.dt() - 1e-9)));
    w.k_last = std::min(g.n_steps - 1, static_cast<int>(std::floor((t2 - g.t_start) / g.dt() + 1e-9)));
    w.mask.assign(g.size(), 0);
    for (int kk = w.k_first; kk <= w.k_last; ++kk)
        for (int i = 0; i < g.n_cells; ++i)
            if (r.at(kk, i) > 0.0) w.mask[static_cast<std::size_t>(kk) * g.n_cells + i] = 1;
    return w;
}

// ---------------------------------------------------------------------------
// Static (single-time) 1D profiles, used by the Besov and commutator harnesses.

/// Uniformly sampled function on [x_min, x_min + n dx], cell-centred.
struct Profile {
    double x_min = 0.0;
    double dx = 1.0;
    std::vector<double> values;
    Extension ext = Extension::zero;

    int size() const { return static_cast<int>(values.size()); }
    double x(int i) const { return x_min + (i + 0.5) * dx; }
};

inline Profile sample_profile(double x_min, double x_max, int n, const std::function<double(double)>& f)
{
    Profile p;
    p.x_min = x_min;
    p.dx = (x_max - x_min) / n;
    p.values.resize(n);
    for (int i = 0; i < n; ++i) p.values[i] = f(p.x(i));
    return p;
}

namespace detail {
inline Grid profile_grid(const Profile& p)
{
    Grid g;
    g.dim = 1;
    g.x_min = p.x_min;
    g.x_max = p.x_min + p.dx * p.size();
    g.n_cells = p.size();
    g.n_steps = 2;
    return g;
}
} // namespace detail

/// Spatial mollification of a static profile (kernel space part only).
inline Profile mollify_profile(const Profile& p, const MollifierKernel& k, double eps)
{
    const auto op = detail::spatial_operator(detail::profile_grid(p), k, eps, false);
    Profile out = p;
    op.apply(p.values, out.values, p.ext);
    return out;
}

/// d/dx of the mollified profile via the differentiated kernel.
inline Profile gradient_profile(const Profile& p, const MollifierKernel& k, double eps)
{
    const auto op = detail::spatial_operator(detail::profile_grid(p), k, eps, true);
    Profile out = p;
    op.apply(p.values, out.values, p.ext);
    return out;
}

/// Indices of cells at distance > eps * l from both ends (the Omega_eps interior).
inline std::pair<int, int> interior_range(const Profile& p, const MollifierKernel& k, double eps)
{
    const int pad = static_cast<int>(std::ceil(eps * k.support / p.dx));
    return {pad, p.size() - pad};
}

} // namespace eulervac
