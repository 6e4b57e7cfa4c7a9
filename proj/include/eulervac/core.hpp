#pragma once

/**
 * @file core.hpp
 * @brief Grids, discrete space-time flow fields and the vacuum-neighbourhood
 * mask shared by all other modules.
 *
 * Fields are stored frame-major: value(k, i) lives at index k * n_cells + i,
 * with frame k at time t_start + k * dt and cell i centred at
 * x_min + (i + 1/2) * dx. Two spatial geometries exist: planar 1D and the
 * radially symmetric reduction of 2D flow (dim = 2, r in [0, r_max]).
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eulervac/numerics.hpp"

namespace eulervac {

enum class Geometry { planar, radial };
enum class Extension { zero, constant };
enum class Role { weak, strong };

inline std::string to_string(Extension e) { return e == Extension::zero ? "zero" : "constant"; }
inline std::string to_string(Role r) { return r == Role::weak ? "weak" : "strong"; }

struct Grid {
    int dim = 1;
    double x_min = 0.0;
    double x_max = 1.0;
    int n_cells = 8;
    double t_start = 0.0;
    double t_end = 1.0;
    int n_steps = 2;

    Geometry geometry() const { return dim == 2 ? Geometry::radial : Geometry::planar; }
    double dx() const { return (x_max - x_min) / n_cells; }
    double dt() const { return (t_end - t_start) / (n_steps - 1); }
    double x(int i) const { return x_min + (i + 0.5) * dx(); }
    double t(int k) const { return t_start + k * dt(); }
    std::size_t size() const { return static_cast<std::size_t>(n_cells) * n_steps; }

    /// Spatial measure of cell i: dx (planar) or the annulus area 2 pi r_i dx.
    double cell_volume(int i) const
    {
        return geometry() == Geometry::radial ? 2.0 * std::numbers::pi * x(i) * dx() : dx();
    }

    std::vector<double> cell_volumes() const
    {
        std::vector<double> v(n_cells);
        for (int i = 0; i < n_cells; ++i) v[i] = cell_volume(i);
        return v;
    }

    void validate() const
    {
        if (dim != 1 && dim != 2) throw Error("Grid: dim must be 1 (planar) or 2 (radial)");
        if (!(x_min < x_max)) throw Error("Grid: x_min < x_max required");
        if (!(t_start < t_end)) throw Error("Grid: t_start < t_end required");
        if (n_cells < 8) throw Error("Grid: n_cells >= 8 required");
        if (n_steps < 2) throw Error("Grid: n_steps >= 2 required");
        if (dim == 2 && x_min != 0.0) throw Error("Grid: radial grids start at r = 0");
    }

    bool same_as(const Grid& o) const
    {
        return dim == o.dim && x_min == o.x_min && x_max == o.x_max && n_cells == o.n_cells &&
               t_start == o.t_start && t_end == o.t_end && n_steps == o.n_steps;
    }

    /// Index of the frame nearest to time t (clamped).
    int frame_at(double t) const
    {
        const double k = std::round((t - t_start) / dt());
        return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(n_steps - 1)));
    }
};

/// Analytic velocity on vacuum cells (Def. of strong solutions constrains u
/// there even though the weak formulation does not).
struct VelocityClosure {
    std::string name;
    std::vector<double> params;
    std::function<double(double t, double x)> u;

    double operator()(double t, double x) const { return u(t, x); }
};

/// u = c.
inline VelocityClosure constant_velocity(double c)
{
    return {"constant", {c}, [c](double, double) { return c; }};
}

/// u = x / (t0 + t): free streaming from a uniform expansion at t = -t0.
inline VelocityClosure expansion_velocity(double t0 = 1.0)
{
    return {"expansion", {t0}, [t0](double t, double x) { return x / (t0 + t); }};
}

/// u = a x, stationary in time.
inline VelocityClosure linear_velocity(double a)
{
    return {"linear", {a}, [a](double, double x) { return a * x; }};
}

inline VelocityClosure closure_from_name(const std::string& name, const std::vector<double>& p)
{
    auto need = [&](std::size_t n) {
        if (p.size() != n) throw Error("velocity closure '" + name + "' expects " + std::to_string(n) + " parameter(s)");
    };
    if (name == "constant") { need(1); return constant_velocity(p[0]); }
    if (name == "expansion") { need(1); return expansion_velocity(p[0]); }
    if (name == "linear") { need(1); return linear_velocity(p[0]); }
    throw Error("unknown velocity closure '" + name + "'");
}

/// Density and momentum on a space-time grid.
struct FlowField {
    Grid grid;
    std::vector<double> rho;
    std::vector<double> mom;
    Role role = Role::weak;
    Extension space_ext = Extension::zero;
    std::optional<VelocityClosure> exterior_velocity;

    std::size_t idx(int k, int i) const { return static_cast<std::size_t>(k) * grid.n_cells + i; }
    double rho_at(int k, int i) const { return rho[idx(k, i)]; }
    double mom_at(int k, int i) const { return mom[idx(k, i)]; }

    std::span<const double> rho_frame(int k) const { return {rho.data() + idx(k, 0), static_cast<std::size_t>(grid.n_cells)}; }
    std::span<const double> mom_frame(int k) const { return {mom.data() + idx(k, 0), static_cast<std::size_t>(grid.n_cells)}; }

    /// Velocity m / rho on non-vacuum cells; the exterior closure (or NaN
    /// without one) on vacuum cells.
    double velocity(int k, int i) const
    {
        const double r = rho_at(k, i);
        if (r > 0.0) return mom_at(k, i) / r;
        if (exterior_velocity) return (*exterior_velocity)(grid.t(k), grid.x(i));
        return std::nan("");
    }

    double frame_mass(int k) const
    {
        std::vector<double> t(grid.n_cells);
        for (int i = 0; i < grid.n_cells; ++i) t[i] = rho_at(k, i) * grid.cell_volume(i);
        return pairwise_sum(t);
    }

    void validate() const
    {
        grid.validate();
        if (rho.size() != grid.size() || mom.size() != grid.size()) throw Error("FlowField: storage does not match grid");
        for (std::size_t j = 0; j < rho.size(); ++j) {
            if (!std::isfinite(rho[j]) || !std::isfinite(mom[j])) throw Error("FlowField: non-finite value at index " + std::to_string(j));
            if (rho[j] < 0.0) throw Error("FlowField: negative density at index " + std::to_string(j));
            if (rho[j] == 0.0 && mom[j] != 0.0) throw Error("FlowField: momentum on vacuum at index " + std::to_string(j));
        }
    }
};

using SpaceTimeFn = std::function<double(double t, double x)>;

/// Sample density and velocity initialisers at cell centres of every frame.
/// Vacuum cells get zero momentum.
inline FlowField build_field(const Grid& grid, const SpaceTimeFn& rho_init, const SpaceTimeFn& u_init, Role role = Role::weak)
{
    grid.validate();
    FlowField f;
    f.grid = grid;
    f.role = role;
    f.rho.resize(grid.size());
    f.mom.resize(grid.size());
    for (int k = 0; k < grid.n_steps; ++k) {
        const double t = grid.t(k);
        for (int i = 0; i < grid.n_cells; ++i) {
            const double x = grid.x(i);
            const double r = rho_init(t, x);
            if (!std::isfinite(r) || r < 0.0)
                throw Error("build_field: invalid density " + std::to_string(r) + " at cell " + std::to_string(i) +
                            " (frame " + std::to_string(k) + ")");
            double m = 0.0;
            if (r > 0.0) {
                const double u = u_init(t, x);
                if (!std::isfinite(u)) throw Error("build_field: non-finite velocity at cell " + std::to_string(i));
                m = r * u;
            }
            f.rho[f.idx(k, i)] = r;
            f.mom[f.idx(k, i)] = m;
        }
    }
    return f;
}

/// Time-independent initialisers.
inline FlowField build_field(const Grid& grid, const std::function<double(double)>& rho_init,
                             const std::function<double(double)>& u_init, Role role = Role::weak)
{
    return build_field(
        grid, [&](double, double x) { return rho_init(x); }, [&](double, double x) { return u_init(x); }, role);
}

/// Frames with t in [t1, t2]; at least two frames must survive.
inline FlowField restrict_window(const FlowField& field, double t1, double t2)
{
    const Grid& g = field.grid;
    if (!(t1 < t2)) throw Error("restrict_window: empty window (t1 >= t2)");
    const double tol = 1e-9 * g.dt();
    if (t1 < g.t_start - tol || t2 > g.t_end + tol) throw Error("restrict_window: window outside field time range");
    const int k0 = static_cast<int>(std::ceil((t1 - g.t_start) / g.dt() - 1e-9));
    const int k1 = static_cast<int>(std::floor((t2 - g.t_start) / g.dt() + 1e-9));
    if (k1 - k0 + 1 < 2) throw Error("restrict_window: window holds fewer than two frames");
    FlowField out = field;
    out.grid.t_start = g.t(k0);
    out.grid.t_end = g.t(k1);
    out.grid.n_steps = k1 - k0 + 1;
    const std::size_t n = g.n_cells;
    out.rho.assign(field.rho.begin() + k0 * n, field.rho.begin() + (k1 + 1) * n);
    out.mom.assign(field.mom.begin() + k0 * n, field.mom.begin() + (k1 + 1) * n);
    return out;
}

/// Scalar quantity on a space-time grid (mollification input/output).
struct ScalarField {
    Grid grid;
    std::vector<double> values;
    Extension space_ext = Extension::zero;

    double at(int k, int i) const { return values[static_cast<std::size_t>(k) * grid.n_cells + i]; }
    double& at(int k, int i) { return values[static_cast<std::size_t>(k) * grid.n_cells + i]; }
};

inline ScalarField density_of(const FlowField& f) { return {f.grid, f.rho, f.space_ext}; }
inline ScalarField momentum_of(const FlowField& f) { return {f.grid, f.mom, f.space_ext}; }

/// W_eps[t1, t2] = {rho_eps > 0} on the frames inside [t1, t2].
struct VacuumNeighborhood {
    double epsilon = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    Grid grid;          ///< grid of the full field the mask refers to
    int k_first = 0;    ///< first frame inside [t1, t2]
    int k_last = 0;     ///< last frame inside [t1, t2]
    std::vector<char> mask;  ///< frame-major over the full grid; false outside the window

    bool contains(int k, int i) const { return mask[static_cast<std::size_t>(k) * grid.n_cells + i] != 0; }
    std::size_t count() const
    {
        std::size_t c = 0;
        for (char m : mask) c += (m != 0);
        return c;
    }
};

} // namespace eulervac
