#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/flux.hpp"
#include "sclab/grid.hpp"
#include "sclab/quadrature.hpp"
#include "sclab/waves.hpp"

namespace sclab {

enum class Scheme { EngquistOsher, LaxFriedrichs };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::EngquistOsher ? "engquist-osher" : "lax-friedrichs";
}

// ---------------------------------------------------------------------------
// Numerical fluxes
// ---------------------------------------------------------------------------

namespace detail {

inline double eo_abs_velocity_integral(const FluxModel& m, int axis, double uL, double uR) {
    // integral_{uL}^{uR} |a_axis(s)| ds, signed.
    return adaptive_simpson([&](double s) { return std::abs(m.a(axis, s)); }, uL, uR, 1e-10);
}

inline double lf_local_speed(const FluxModel& m, int axis, double uL, double uR) {
    const double lo = std::min(uL, uR), hi = std::max(uL, uR);
    double lam = 0.0;
    const int pts = 9;
    for (int k = 0; k < pts; ++k) {
        const double v = lo + (hi - lo) * k / (pts - 1);
        lam = std::max(lam, std::abs(m.a(axis, v)));
    }
    return lam;
}

} // namespace detail

/// Monotone two-point numerical flux for one scalar flux component.
///
/// Engquist-Osher: A(uL)/2 + A(uR)/2 - (1/2) integral_{uL}^{uR} |a(s)| ds,
/// with the integral either from the model's closed-form one-sided
/// antiderivatives (equivalent form A(0)+eo_plus(uL)+eo_minus(uR)) or by
/// adaptive Simpson to 1e-10.
///
/// Lax-Friedrichs: (A(uL)+A(uR))/2 - (lambda/2)(uR - uL) with lambda the
/// local max of |a| between the two states.
inline double numerical_flux(Scheme scheme, const FluxModel& model, int axis,
                             double uL, double uR) {
    model.require_in_interval(uL, "numerical_flux");
    model.require_in_interval(uR, "numerical_flux");
    if (scheme == Scheme::EngquistOsher) {
        if (model.has_eo_split())
            return model.A(axis, 0.0) + model.eo_plus(axis, uL) + model.eo_minus(axis, uR);
        return 0.5 * (model.A(axis, uL) + model.A(axis, uR)) -
               0.5 * detail::eo_abs_velocity_integral(model, axis, uL, uR);
    }
    const double lam = detail::lf_local_speed(model, axis, uL, uR);
    return 0.5 * (model.A(axis, uL) + model.A(axis, uR)) - 0.5 * lam * (uR - uL);
}

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

using InitialData = std::function<double(const std::array<double, 2>&)>;

inline InitialData constant_init(double c) {
    return [c](const std::array<double, 2>&) { return c; };
}

inline InitialData riemann_init(double uL, double uR, int axis, double x0 = 0.0) {
    return [=](const std::array<double, 2>& x) {
        return x[static_cast<std::size_t>(axis)] < x0 ? uL : uR;
    };
}

/// Compactly supported plateau perturbation (tensor product across axes).
struct Perturbation {
    double amplitude = 0.0;
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> width{1.0, 1.0}; // full support width per axis

    double value(int dim, const std::array<double, 2>& x) const {
        double v = amplitude;
        for (int j = 0; j < dim; ++j)
            v *= plateau_bump((x[static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)]) /
                              (0.5 * width[static_cast<std::size_t>(j)]));
        return v;
    }
};

inline InitialData rarefaction_init(const RarefactionWave& wave) {
    return [wave](const std::array<double, 2>& x) { return wave.evaluate(0.0, x); };
}

inline InitialData rarefaction_plus_bump_init(const RarefactionWave& wave, const Perturbation& pert,
                                              int dim) {
    return [wave, pert, dim](const std::array<double, 2>& x) {
        return wave.evaluate(0.0, x) + pert.value(dim, x);
    };
}

/// Values sampled at cell centers, used verbatim as cell averages.
inline InitialData table_init(Grid grid, std::vector<double> values) {
    if (values.size() != grid.total_cells())
        throw ConfigError("table_init: value count does not match grid");
    return [grid, values = std::move(values)](const std::array<double, 2>& x) {
        int ix = static_cast<int>(std::floor((x[0] - grid.lo[0]) / grid.spacing(0)));
        ix = std::clamp(ix, 0, grid.cells[0] - 1);
        int iy = 0;
        if (grid.dim == 2) {
            iy = static_cast<int>(std::floor((x[1] - grid.lo[1]) / grid.spacing(1)));
            iy = std::clamp(iy, 0, grid.cells[1] - 1);
        }
        return values[grid.index(ix, iy)];
    };
}

/// Project pointwise initial data onto cell averages with a 4-point Gauss
/// rule per cell (tensor rule in 2D).
inline SolutionField project_initial_data(const Grid& grid, const InitialData& init) {
    grid.validate();
    SolutionField f;
    f.grid = grid;
    f.time = 0.0;
    f.values.resize(grid.total_cells());
    if (grid.dim == 1) {
        for (int i = 0; i < grid.cells[0]; ++i) {
            const double a = grid.lo[0] + i * grid.spacing(0);
            f.values[static_cast<std::size_t>(i)] =
                gauss4_average([&](double x) { return init({x, 0.0}); }, a, a + grid.spacing(0));
        }
    } else {
        for (int iy = 0; iy < grid.cells[1]; ++iy)
            for (int ix = 0; ix < grid.cells[0]; ++ix) {
                const double ax = grid.lo[0] + ix * grid.spacing(0);
                const double ay = grid.lo[1] + iy * grid.spacing(1);
                f.values[grid.index(ix, iy)] =
                    gauss4_average_2d([&](double x, double y) { return init({x, y}); },
                                      ax, ax + grid.spacing(0), ay, ay + grid.spacing(1));
            }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Time stepping
// ---------------------------------------------------------------------------

struct SolveConfig {
    FluxModel flux;
    Grid grid;
    InitialData init;
    double end_time = 1.0;
    double cfl = 0.45;
    std::vector<double> snapshot_times;
    Scheme scheme = Scheme::EngquistOsher;

    void validate() const {
        grid.validate();
        if (!(end_time > 0.0)) throw ConfigError("SolveConfig: end_time must be positive");
        if (!(cfl > 0.0) || !(cfl < 1.0)) throw ConfigError("SolveConfig: CFL must lie in (0, 1)");
        // Unsplit forward Euler is stable for dt * sum_ax (speed/h_ax) <= 1;
        // with dt = cfl * min_h / speed that requires cfl * dim < 1.
        if (cfl * grid.dim >= 1.0)
            throw ConfigError("SolveConfig: CFL violates the unsplit stability bound cfl*dim < 1");
        for (double t : snapshot_times)
            if (t < 0.0 || t > end_time + 1e-12)
                throw ConfigError("SolveConfig: snapshot outside [0, end_time]");
        if (!init) throw ConfigError("SolveConfig: missing initial data");
    }
};

inline double stable_dt(const SolveConfig& cfg) {
    const double speed = cfg.flux.lipschitz_bound;
    if (speed <= 0.0) return cfg.end_time; // constant flux: any dt lands snapshots
    return cfg.cfl * cfg.grid.min_spacing() / speed;
}

namespace detail {

inline int ghost_index(int i, int n, Boundary b) {
    if (b == Boundary::Periodic) return (i % n + n) % n;
    return std::clamp(i, 0, n - 1);
}

/// One forward-Euler step of the unsplit conservative update. Each interface
/// flux is computed once and reused on both sides so that periodic sums
/// telescope bitwise.
inline void step_into(const SolutionField& f, const SolveConfig& cfg, double dt,
                      std::vector<double>& iface, SolutionField& out) {
    const Grid& g = f.grid;
    out.grid = g;
    out.time = f.time + dt;
    out.values = f.values;

    if (g.dim == 1) {
        const int n = g.cells[0];
        const double lam = dt / g.spacing(0);
        iface.resize(static_cast<std::size_t>(n) + 1);
        const Boundary b = g.boundary[0];
        for (int i = 0; i <= n; ++i) {
            const double uL = f.values[static_cast<std::size_t>(ghost_index(i - 1, n, b))];
            const double uR = f.values[static_cast<std::size_t>(ghost_index(i, n, b))];
            iface[static_cast<std::size_t>(i)] = numerical_flux(cfg.scheme, cfg.flux, 0, uL, uR);
        }
        for (int i = 0; i < n; ++i)
            out.values[static_cast<std::size_t>(i)] -=
                lam * (iface[static_cast<std::size_t>(i) + 1] - iface[static_cast<std::size_t>(i)]);
        return;
    }

    const int nx = g.cells[0], ny = g.cells[1];
    const double lamx = dt / g.spacing(0), lamy = dt / g.spacing(1);
    const Boundary bx = g.boundary[0], by = g.boundary[1];
    // x-sweep
    iface.resize(static_cast<std::size_t>(nx) + 1);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix <= nx; ++ix) {
            const double uL = f.values[g.index(ghost_index(ix - 1, nx, bx), iy)];
            const double uR = f.values[g.index(ghost_index(ix, nx, bx), iy)];
            iface[static_cast<std::size_t>(ix)] = numerical_flux(cfg.scheme, cfg.flux, 0, uL, uR);
        }
        for (int ix = 0; ix < nx; ++ix)
            out.values[g.index(ix, iy)] -=
                lamx * (iface[static_cast<std::size_t>(ix) + 1] - iface[static_cast<std::size_t>(ix)]);
    }
    // y-sweep (still reading the previous time level)
    iface.resize(static_cast<std::size_t>(ny) + 1);
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy <= ny; ++iy) {
            const double uL = f.values[g.index(ix, ghost_index(iy - 1, ny, by))];
            const double uR = f.values[g.index(ix, ghost_index(iy, ny, by))];
            iface[static_cast<std::size_t>(iy)] = numerical_flux(cfg.scheme, cfg.flux, 1, uL, uR);
        }
        for (int iy = 0; iy < ny; ++iy)
            out.values[g.index(ix, iy)] -=
                lamy * (iface[static_cast<std::size_t>(iy) + 1] - iface[static_cast<std::size_t>(iy)]);
    }
}

} // namespace detail

/// Advance one stable step (dt = CFL * min spacing / max speed).
inline SolutionField step(const SolutionField& field, const SolveConfig& cfg) {
    cfg.validate();
    field.validate();
    SolutionField out;
    std::vector<double> iface;
    detail::step_into(field, cfg, stable_dt(cfg), iface, out);
    return out;
}

/// Run to end_time, capping dt to land exactly on each snapshot time.
/// Returns the snapshots in request order (duplicates allowed).
inline std::vector<SolutionField> solve(const SolveConfig& cfg) {
    cfg.validate();
    std::vector<double> targets = cfg.snapshot_times;
    std::sort(targets.begin(), targets.end());

    SolutionField cur = project_initial_data(cfg.grid, cfg.init);
    std::vector<SolutionField> snaps;
    std::size_t next = 0;
    while (next < targets.size() && targets[next] <= 0.0) {
        snaps.push_back(cur);
        ++next;
    }
    if (next >= targets.size()) return snaps;

    const double dt0 = stable_dt(cfg);
    std::vector<double> iface;
    SolutionField work;
    while (next < targets.size()) {
        const double target = targets[next];
        double dt = dt0;
        bool landing = false;
        if (cur.time + dt >= target - 1e-12 * std::max(1.0, target)) {
            dt = target - cur.time;
            landing = true;
        }
        if (dt > 0.0) {
            detail::step_into(cur, cfg, dt, iface, work);
            std::swap(cur, work);
        }
        if (landing) {
            cur.time = target; // land bit-exactly on the requested time
            cur.validate();
            while (next < targets.size() &&
                   targets[next] <= target + 1e-12 * std::max(1.0, target)) {
                snaps.push_back(cur);
                ++next;
            }
        }
    }
    return snaps;
}

} // namespace sclab
