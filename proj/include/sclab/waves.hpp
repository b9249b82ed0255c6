#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/flux.hpp"

namespace sclab {

/// Planar rarefaction wave along a coordinate axis:
///   u(t, x) = uL                      for xi <  a_e(uL)
///             a_e^{-1}(xi)            for a_e(uL) <= xi <= a_e(uR)
///             uR                      for xi >  a_e(uR)
/// with xi = (x.e - x0)/(t + t0). The time offset t0 > 0 keeps the profile
/// globally Lipschitz on the simulated window. The flux component along the
/// axis must be strictly convex on [uL, uR] so a_e is invertible.
class RarefactionWave {
public:
    RarefactionWave(const FluxModel& flux, int axis, double uL, double uR,
                    double t0, double x0)
        : flux_(flux), axis_(axis), uL_(uL), uR_(uR), t0_(t0), x0_(x0) {
        if (axis < 0 || axis >= flux.dimension)
            throw ConfigError("RarefactionWave: axis outside flux dimension");
        if (!(uL < uR)) throw ConfigError("RarefactionWave: requires uL < uR");
        if (!(t0 > 0.0)) throw ConfigError("RarefactionWave: t0 must be positive");
        if (!flux.interval.contains(uL) || !flux.interval.contains(uR))
            throw ConfigError("RarefactionWave: states outside admissible interval");

        // Verify a_e strictly increasing on [uL, uR] and record its minimal
        // slope (= inf A_e'' over the fan values).
        const int samples = 4096;
        const double h = (uR - uL) / samples;
        double prev = flux.a(axis, uL);
        inf_aprime_ = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= samples; ++k) {
            const double v = uL + h * k;
            const double cur = flux.a(axis, v);
            if (!(cur > prev))
                throw ConfigError("RarefactionWave: flux component not strictly convex on [uL, uR]");
            inf_aprime_ = std::min(inf_aprime_, (cur - prev) / h);
            prev = cur;
        }
        a_lo_ = flux.a(axis, uL);
        a_hi_ = flux.a(axis, uR);
    }

    int axis() const { return axis_; }
    double left_state() const { return uL_; }
    double right_state() const { return uR_; }
    double time_offset() const { return t0_; }
    double center() const { return x0_; }

    double evaluate(double t, const std::array<double, 2>& x) const {
        if (!(t >= 0.0)) throw DomainError("RarefactionWave::evaluate: t must be >= 0");
        const double xi = (x[static_cast<std::size_t>(axis_)] - x0_) / (t + t0_);
        if (xi <= a_lo_) return uL_;
        if (xi >= a_hi_) return uR_;
        return invert_velocity(xi);
    }

    /// sup_x |grad u(t, .)|, attained where A'' is smallest inside the fan.
    double lipschitz_envelope(double t) const {
        if (!(t >= 0.0)) throw DomainError("RarefactionWave::lipschitz_envelope: t must be >= 0");
        return 1.0 / ((t + t0_) * inf_aprime_);
    }

    /// GammaBar = sup_t t * lipschitz_envelope(t) = 1 / inf A_e''.
    double gamma_bar() const { return 1.0 / inf_aprime_; }

    double inf_velocity_slope() const { return inf_aprime_; }

private:
    double invert_velocity(double xi) const {
        // Bisection on the strictly increasing a_e to 1e-12.
        double lo = uL_, hi = uR_;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            if (flux_.a(axis_, mid) < xi) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    FluxModel flux_;
    int axis_;
    double uL_, uR_, t0_, x0_;
    double a_lo_ = 0.0, a_hi_ = 0.0;
    double inf_aprime_ = 0.0;
};

/// One-sided slope diagnostic for 1D strictly convex fluxes:
///   sup over snapshots (t > 0) and adjacent cells of
///   t * (u_{i+1} - u_i)_+ / dx * inf A''.
/// The Oleinik estimate predicts a value <= 1 up to discretization error.
/// Snapshots are (time, cell values, dx) triples.
struct OleinikSnapshot {
    double time = 0.0;
    double dx = 0.0;
    const std::vector<double>* values = nullptr;
};

inline double oleinik_ratio(const std::vector<OleinikSnapshot>& snapshots, const FluxModel& flux) {
    if (flux.dimension != 1) throw ConfigError("oleinik_ratio: requires a 1D flux");
    // inf A'' over I, estimated from velocity increments on a dense grid.
    const int samples = 8192;
    const double h = flux.interval.length() / samples;
    double inf_aprime = std::numeric_limits<double>::infinity();
    double prev = flux.a(0, flux.interval.lo);
    for (int k = 1; k <= samples; ++k) {
        const double cur = flux.a(0, flux.interval.lo + h * k);
        inf_aprime = std::min(inf_aprime, (cur - prev) / h);
        prev = cur;
    }
    if (!(inf_aprime > 0.0))
        throw ConfigError("oleinik_ratio: flux is not strictly convex on its interval");

    double ratio = 0.0;
    for (const auto& s : snapshots) {
        if (!(s.time > 0.0) || s.values == nullptr || s.values->size() < 2) continue;
        const auto& u = *s.values;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double slope = (u[i + 1] - u[i]) / s.dx;
            if (slope > 0.0) ratio = std::max(ratio, s.time * slope * inf_aprime);
        }
    }
    return ratio;
}

} // namespace sclab
