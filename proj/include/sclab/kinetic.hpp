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

namespace sclab {

/// Kinetic equilibrium profile chi_{[0,u]}(v), valued in {-1, 0, 1}:
/// +1 for 0 <= v <= u, -1 for u <= v <= 0, 0 otherwise. Both intervals are
/// closed; u = v = 0 returns 0. Integral quantities are insensitive to the
/// endpoint convention.
inline int kinetic_function(double u, double v) {
    if (u > 0.0 && v >= 0.0 && v <= u) return 1;
    if (u < 0.0 && v >= u && v <= 0.0) return -1;
    return 0;
}

/// Difference of two kinetic profiles, h = chi(u, .) - chi(u_tilde, .).
inline int h_value(double u, double u_tilde, double v) {
    return kinetic_function(u, v) - kinetic_function(u_tilde, v);
}

/// Uniform cell grid in the velocity variable.
struct VGrid {
    double lo = -1.0;
    double hi = 1.0;
    int cells = 2048;

    double width() const { return (hi - lo) / cells; }
    double center(int k) const { return lo + (static_cast<double>(k) + 0.5) * width(); }

    /// Default layout for level-set quadratures: [-Lambda-0.05, Lambda+0.05].
    static VGrid padded(double Lambda, int cells = 2048) {
        return VGrid{-Lambda - 0.05, Lambda + 0.05, cells};
    }
    /// Layout for the reconstruction identity: exactly [-Lambda, Lambda].
    static VGrid symmetric(double Lambda, int cells) { return VGrid{-Lambda, Lambda, cells}; }
};

/// Midpoint-rule integral of chi(u, .) over the v-grid; recovers u to within
/// one cell width.
inline double reconstruct_u(double u, const VGrid& grid) {
    if (std::abs(u) > std::max(std::abs(grid.lo), std::abs(grid.hi)))
        throw DomainError("reconstruct_u: |u| exceeds the velocity grid");
    const double dv = grid.width();
    double acc = 0.0;
    for (int k = 0; k < grid.cells; ++k)
        acc += static_cast<double>(kinetic_function(u, grid.center(k)));
    return acc * dv;
}

/// Level-set functional (u - u_tilde - ell)_+ = integral_{u_tilde+ell}^Lambda h dv
/// for 0 <= u, u_tilde <= Lambda. Callers shift their data nonnegative first.
inline double level_set_integral(double u, double u_tilde, double ell, double Lambda) {
    if (u < 0.0 || u_tilde < 0.0)
        throw DomainError("level_set_integral: states must be nonnegative (shift by m first)");
    if (u > Lambda || u_tilde > Lambda)
        throw DomainError("level_set_integral: states exceed Lambda");
    if (ell < 0.0) throw DomainError("level_set_integral: ell must be nonnegative");
    return std::max(u - u_tilde - ell, 0.0);
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

/// Snapshots of one solve at nearly uniform times (needed by the space-time
/// quadratures below).
inline double uniform_dt(const std::vector<SolutionField>& traj) {
    if (traj.size() < 2) throw GeometryError("trajectory: need at least two snapshots");
    const double dt = traj[1].time - traj[0].time;
    for (std::size_t m = 1; m + 1 < traj.size(); ++m) {
        const double d = traj[m + 1].time - traj[m].time;
        if (std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw GeometryError("trajectory: snapshot times are not uniform");
    }
    if (!(dt > 0.0)) throw GeometryError("trajectory: snapshot times must increase");
    return dt;
}

using ReferenceEvaluator = std::function<double(double, const std::array<double, 2>&)>;

// ---------------------------------------------------------------------------
// De Giorgi level-set energies
// ---------------------------------------------------------------------------

/// The truncation-energy sequence of the De Giorgi iteration:
///   r_k = 1 + 2^-k,   ell_k = K (1 - 2^-k),
///   A_k = space-time integral over B(center, r_k * scale) of
///         (u - u_tilde - ell_k)_+,
/// with balls in the Euclidean (t, x) norm and membership by cell center.
/// Radii shrink and levels rise with k, so A_k is nonincreasing exactly.
struct KineticLevelData {
    double K = 0.0;
    std::vector<double> radii;    // r_k
    std::vector<double> levels;   // ell_k
    std::vector<double> energies; // A_k
    double center_t = 0.0;
    std::array<double, 2> center_x{0.0, 0.0};
    double scale = 1.0;
};

inline KineticLevelData degiorgi_sequence(const std::vector<SolutionField>& traj,
                                          const ReferenceEvaluator& u_tilde,
                                          double center_t, const std::array<double, 2>& center_x,
                                          double scale, double K, int k_max) {
    if (!(K > 0.0)) throw DomainError("degiorgi_sequence: K must be positive");
    if (k_max < 0) throw DomainError("degiorgi_sequence: k_max must be >= 0");
    if (!(scale > 0.0)) throw DomainError("degiorgi_sequence: scale must be positive");
    const double dt = uniform_dt(traj);
    const Grid& g = traj.front().grid;

    // The outermost ball (radius 2*scale) must sit inside the sampled
    // space-time box.
    const double R = 2.0 * scale;
    if (center_t - R < traj.front().time - 0.5 * dt - 1e-12 ||
        center_t + R > traj.back().time + 0.5 * dt + 1e-12)
        throw GeometryError("degiorgi_sequence: ball exits the sampled time range");
    for (int ax = 0; ax < g.dim; ++ax) {
        if (center_x[static_cast<std::size_t>(ax)] - R < g.lo[static_cast<std::size_t>(ax)] - 1e-12 ||
            center_x[static_cast<std::size_t>(ax)] + R > g.hi[static_cast<std::size_t>(ax)] + 1e-12)
            throw GeometryError("degiorgi_sequence: ball exits the spatial domain");
    }

    KineticLevelData out;
    out.K = K;
    out.center_t = center_t;
    out.center_x = center_x;
    out.scale = scale;
    out.radii.resize(static_cast<std::size_t>(k_max) + 1);
    out.levels.resize(static_cast<std::size_t>(k_max) + 1);
    out.energies.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    for (int k = 0; k <= k_max; ++k) {
        const double pk = std::pow(0.5, k);
        out.radii[static_cast<std::size_t>(k)] = 1.0 + pk;
        out.levels[static_cast<std::size_t>(k)] = K * (1.0 - pk);
    }

    const double wt = dt * g.cell_volume();
    for (const auto& snap : traj) {
        const double dtc = snap.time - center_t;
        if (std::abs(dtc) > R) continue;
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            const auto xc = g.cell_center(i);
            double rho2 = dtc * dtc;
            for (int ax = 0; ax < g.dim; ++ax) {
                const double d = xc[static_cast<std::size_t>(ax)] - center_x[static_cast<std::size_t>(ax)];
                rho2 += d * d;
            }
            const double rho = std::sqrt(rho2) / scale;
            if (rho > 2.0) continue;
            const double diff = snap.values[i] - u_tilde(snap.time, xc);
            for (int k = 0; k <= k_max; ++k) {
                if (rho > out.radii[static_cast<std::size_t>(k)]) break; // radii decrease in k
                const double excess = diff - out.levels[static_cast<std::size_t>(k)];
                if (excess > 0.0) out.energies[static_cast<std::size_t>(k)] += wt * excess;
                // levels rise in k: once the excess is gone it stays gone
                else break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entropy dissipation pairing
// ---------------------------------------------------------------------------

struct DissipationReport {
    double entropy_level = 0.0; // k
    std::string test_function;
    double residual = 0.0;
    double grid_spacing = 0.0;
    int snapshot_count = 0;
};

/// Pairing of the Kruzhkov entropy inequality with a smooth nonnegative bump:
///   residual = int int ( |u-k| d_t phi + sgn(u-k)(A(u)-A(k)) . grad phi )
/// evaluated against the piecewise-constant trajectory with exact telescoping
/// differences of phi in each direction (so constants integrate to zero to
/// rounding). Entropy solutions give residual >= -O(dx); dissipative regions
/// give residual > 0 (this equals minus the distributional pairing).
inline DissipationReport entropy_dissipation_residual(const std::vector<SolutionField>& traj,
                                                      const FluxModel& flux, double k_level,
                                                      const SpaceTimeBump& bump) {
    const double dt = uniform_dt(traj);
    const Grid& g = traj.front().grid;
    if (bump.dim != g.dim) throw GeometryError("entropy_dissipation_residual: bump/grid dimension mismatch");

    // Bump support must sit strictly inside the sampled space-time box.
    if (bump.t_center - bump.t_halfwidth < traj.front().time - 0.5 * dt - 1e-12 ||
        bump.t_center + bump.t_halfwidth > traj.back().time + 0.5 * dt + 1e-12)
        throw GeometryError("entropy_dissipation_residual: bump leaves the sampled time range");
    for (int ax = 0; ax < g.dim; ++ax) {
        if (bump.x_center[static_cast<std::size_t>(ax)] - bump.x_halfwidth[static_cast<std::size_t>(ax)] <
                g.lo[static_cast<std::size_t>(ax)] - 1e-12 ||
            bump.x_center[static_cast<std::size_t>(ax)] + bump.x_halfwidth[static_cast<std::size_t>(ax)] >
                g.hi[static_cast<std::size_t>(ax)] + 1e-12)
            throw GeometryError("entropy_dissipation_residual: bump leaves the spatial domain");
    }

    const double vol = g.cell_volume();
    double acc = 0.0;
    for (const auto& snap : traj) {
        const double t = snap.time;
        if (std::abs(t - bump.t_center) > bump.t_halfwidth + 0.5 * dt) continue;
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            const auto xc = g.cell_center(i);
            const double u = snap.values[i];
            // time slab term: |u-k| * [phi(t+dt/2) - phi(t-dt/2)]
            acc += vol * std::abs(u - k_level) *
                   (bump.value(t + 0.5 * dt, xc) - bump.value(t - 0.5 * dt, xc));
            // flux terms: q_j(u) * [phi at right face - phi at left face]
            const double sgn = (u > k_level) ? 1.0 : (u < k_level ? -1.0 : 0.0);
            for (int ax = 0; ax < g.dim; ++ax) {
                const double q = sgn * (flux.A(ax, u) - flux.A(ax, k_level));
                if (q == 0.0) continue;
                auto xl = xc, xr = xc;
                xl[static_cast<std::size_t>(ax)] -= 0.5 * g.spacing(ax);
                xr[static_cast<std::size_t>(ax)] += 0.5 * g.spacing(ax);
                acc += dt * (vol / g.spacing(ax)) * q * (bump.value(t, xr) - bump.value(t, xl));
            }
        }
    }

    DissipationReport rep;
    rep.entropy_level = k_level;
    rep.residual = acc;
    rep.grid_spacing = g.min_spacing();
    rep.snapshot_count = static_cast<int>(traj.size());
    rep.test_function = "plateau bump";
    return rep;
}

// ---------------------------------------------------------------------------
// Localized variation bound (ratio check)
// ---------------------------------------------------------------------------

/// Lipschitz graph in the velocity variable used by the variation bound:
/// either a constant, or the reference solution plus a constant offset.
struct GraphDescriptor {
    bool constant = true;
    double value = 0.0;            // constant case
    double offset = 0.0;           // reference-plus-offset case
    double lip_bound_physical = 0.0; // space-time Lipschitz bound of the graph

    double eval(const ReferenceEvaluator& ref, double t, const std::array<double, 2>& x) const {
        return constant ? value : ref(t, x) + offset;
    }
};

struct VariationBoundResult {
    double lhs = 0.0;   // estimated dissipation mass above the graph in B_r
    double rhs = 0.0;   // (|a-bar| sup) * (Lip(w) + 1/(R-r)) * integral of |h|
    double ratio = 0.0;
    bool violation = false; // rhs == 0 while lhs > 0
};

/// Numerical counterpart of the localized variation bound: the dissipation
/// measure above the graph of w over the rescaled ball B_r, estimated by
/// pairing h with the test function
///   Phi(y, v) = phi(|y|) * zeta(v - w) * (v - w)_+,
/// against the transport operator (the sharp cutoff in v is replaced by a
/// smooth step of width 4 v-cells). Everything is computed in unit-scale
/// coordinates y = ((t,x) - center)/scale; solution values are invariant
/// under that rescaling.
inline VariationBoundResult variation_bound_ratio(const std::vector<SolutionField>& traj,
                                                  const ReferenceEvaluator& u_tilde,
                                                  const FluxModel& flux,
                                                  const GraphDescriptor& w,
                                                  double r, double R,
                                                  double center_t,
                                                  const std::array<double, 2>& center_x,
                                                  double scale, double Lambda,
                                                  const VGrid& vgrid) {
    if (!(0.0 < r && r < R && R <= 2.0))
        throw DomainError("variation_bound_ratio: need 0 < r < R <= 2");
    const double dt = uniform_dt(traj);
    const Grid& g = traj.front().grid;
    const double Rphys = R * scale;
    if (center_t - Rphys < traj.front().time - 0.5 * dt - 1e-12 ||
        center_t + Rphys > traj.back().time + 0.5 * dt + 1e-12)
        throw GeometryError("variation_bound_ratio: ball exits the sampled time range");
    for (int ax = 0; ax < g.dim; ++ax)
        if (center_x[static_cast<std::size_t>(ax)] - Rphys < g.lo[static_cast<std::size_t>(ax)] - 1e-12 ||
            center_x[static_cast<std::size_t>(ax)] + Rphys > g.hi[static_cast<std::size_t>(ax)] + 1e-12)
            throw GeometryError("variation_bound_ratio: ball exits the spatial domain");

    const double dv = vgrid.width();
    const double zeta_w = 4.0 * dv; // smooth partition step width
    const double lip_rescaled = w.lip_bound_physical * scale;
    const double inv_dr = 1.0 / (R - r);

    // sup over (0, Lambda) of the Euclidean norm of (1, a(v))
    double abar = 0.0;
    for (int s = 0; s <= 1000; ++s) {
        const double v = Lambda * s / 1000.0;
        double n2 = 1.0;
        for (int j = 0; j < g.dim; ++j) {
            const double aj = flux.a(j, v);
            n2 += aj * aj;
        }
        abar = std::max(abar, std::sqrt(n2));
    }

    const double cellw = dt * g.cell_volume() / std::pow(scale, g.dim + 1);
    double lhs = 0.0;
    double h_mass = 0.0;
    for (const auto& snap : traj) {
        const double yt = (snap.time - center_t) / scale;
        if (std::abs(yt) > R) continue;
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            const auto xc = g.cell_center(i);
            double rho2 = yt * yt;
            std::array<double, 2> yx{0.0, 0.0};
            for (int ax = 0; ax < g.dim; ++ax) {
                yx[static_cast<std::size_t>(ax)] =
                    (xc[static_cast<std::size_t>(ax)] - center_x[static_cast<std::size_t>(ax)]) / scale;
                rho2 += yx[static_cast<std::size_t>(ax)] * yx[static_cast<std::size_t>(ax)];
            }
            const double rho = std::sqrt(rho2);
            if (rho >= R) continue;

            const double u = snap.values[i];
            const double ut = u_tilde(snap.time, xc);
            const double wv = w.eval(u_tilde, snap.time, xc);

            // cutoff phi(rho) and its y-gradient (radial)
            double phi = 1.0, dphi = 0.0;
            if (rho > r) {
                const double q = (R - rho) * inv_dr;
                phi = smoothstep5(q);
                dphi = -smoothstep5_deriv(q) * inv_dr;
            }

            // h-mass above the graph for the right-hand side
            const double hi_v = std::max(u, ut);
            const double lo_v = std::min(u, ut);
            h_mass += cellw * std::max(hi_v - std::max(wv, lo_v), 0.0);

            if (hi_v <= wv) continue;
            // gradient of w in rescaled coordinates (finite differences of
            // the reference; zero for constant graphs)
            std::array<double, 3> gradw{0.0, 0.0, 0.0}; // (t, x0, x1)
            if (!w.constant) {
                const double eps = 1e-6 * std::max(1.0, scale);
                gradw[0] = scale * (u_tilde(snap.time + eps, xc) - u_tilde(snap.time - eps, xc)) / (2 * eps);
                for (int ax = 0; ax < g.dim; ++ax) {
                    auto xp = xc, xm = xc;
                    xp[static_cast<std::size_t>(ax)] += eps;
                    xm[static_cast<std::size_t>(ax)] -= eps;
                    gradw[static_cast<std::size_t>(ax) + 1] =
                        scale * (u_tilde(snap.time, xp) - u_tilde(snap.time, xm)) / (2 * eps);
                }
            }

            const int k_lo = std::max(0, static_cast<int>(std::floor((std::max(lo_v, wv) - vgrid.lo) / dv)) - 1);
            const int k_hi = std::min(vgrid.cells - 1,
                                      static_cast<int>(std::ceil((hi_v - vgrid.lo) / dv)) + 1);
            for (int k = k_lo; k <= k_hi; ++k) {
                const double v = vgrid.center(k);
                const int h = h_value(u, ut, v);
                if (h == 0) continue;
                const double s = v - wv;
                if (s <= 0.0) continue;
                const double zq = s / zeta_w;
                const double zeta = smoothstep5(zq);
                const double dzeta = smoothstep5_deriv(zq) / zeta_w;
                // a-bar(v) . grad_y Phi with a-bar = (1, a)
                const double radial = dphi * zeta * s; // times (y/rho) direction
                double adotgrad = 0.0;
                if (rho > 0.0) {
                    double adoty = yt; // time component of a-bar is 1
                    for (int ax = 0; ax < g.dim; ++ax)
                        adoty += flux.a(ax, v) * yx[static_cast<std::size_t>(ax)];
                    adotgrad += radial * adoty / rho;
                }
                const double dvpart = dzeta * s + zeta; // d/dv of zeta*(v-w)_+
                double adotgw = gradw[0];
                for (int ax = 0; ax < g.dim; ++ax)
                    adotgw += flux.a(ax, v) * gradw[static_cast<std::size_t>(ax) + 1];
                adotgrad -= phi * dvpart * adotgw;
                lhs += cellw * dv * static_cast<double>(h) * adotgrad;
            }
        }
    }

    VariationBoundResult res;
    res.lhs = lhs;
    res.rhs = abar * (lip_rescaled + inv_dr) * h_mass;
    if (res.rhs > 0.0) res.ratio = res.lhs / res.rhs;
    else if (std::abs(res.lhs) > 1e-10) res.violation = true;
    return res;
}

} // namespace sclab
