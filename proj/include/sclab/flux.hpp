#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/fit.hpp"

namespace sclab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
    bool contains(double v, double slack = 0.0) const {
        return v >= lo - slack && v <= hi + slack;
    }
};

/// A flux A : R -> R^n with its characteristic velocity a = A', restricted to
/// an admissible value interval I. Components are exposed individually since
/// the solver works axis by axis. eo_plus/eo_minus, when present, are the
/// one-sided antiderivatives
///   eo_plus(v)  = integral_0^v max(a_j, 0),
///   eo_minus(v) = integral_0^v min(a_j, 0),
/// used as a closed-form fast path for the Engquist-Osher flux; models without
/// them fall back to adaptive Simpson on |a_j|.
struct FluxModel {
    std::string name = "custom";
    int dimension = 1;
    Interval interval;
    std::function<double(int, double)> A;  // component j of the flux at v
    std::function<double(int, double)> a;  // component j of the velocity at v
    double lipschitz_bound = 0.0;          // C1 = sup_I max_j |a_j|
    std::function<double(int, double)> eo_plus;   // optional
    std::function<double(int, double)> eo_minus;  // optional

    bool has_eo_split() const { return static_cast<bool>(eo_plus) && static_cast<bool>(eo_minus); }

    void require_in_interval(double v, const char* who) const {
        if (!interval.contains(v, 1e-12 * std::max(1.0, std::abs(interval.lo) + std::abs(interval.hi))))
            throw DomainError(std::string(who) + ": value outside admissible interval");
    }
};

/// Velocity vector a(v) = (a_1(v), ..., a_n(v)). v must lie in I.
inline std::vector<double> eval_velocity(const FluxModel& model, double v) {
    model.require_in_interval(v, "eval_velocity");
    std::vector<double> out(static_cast<std::size_t>(model.dimension));
    for (int j = 0; j < model.dimension; ++j) out[static_cast<std::size_t>(j)] = model.a(j, v);
    return out;
}

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

namespace detail {
inline double power_abs_max(int exponent, const Interval& I) {
    // |v^m| on an interval peaks at an endpoint.
    return std::max(std::pow(std::abs(I.lo), exponent), std::pow(std::abs(I.hi), exponent));
}
} // namespace detail

/// Multi-dimensional Burgers flux A_j(u) = u^(j+1)/(j+1), a_j(u) = u^j
/// (components indexed j = 1..n).
inline FluxModel burgers_flux(int n, Interval I) {
    if (n < 1) throw DomainError("burgers_flux: n must be >= 1");
    if (!(I.hi > I.lo)) throw DomainError("burgers_flux: empty interval");
    FluxModel m;
    m.name = "burgers";
    m.dimension = n;
    m.interval = I;
    m.A = [](int j, double v) { return std::pow(v, j + 2) / static_cast<double>(j + 2); };
    m.a = [](int j, double v) { return std::pow(v, j + 1); };
    double c1 = 0.0;
    for (int j = 1; j <= n; ++j) c1 = std::max(c1, detail::power_abs_max(j, I));
    m.lipschitz_bound = c1;
    // a_j(v) = v^m with m = j+1: for odd m the positive part lives on v > 0;
    // for even m the velocity is nonnegative everywhere.
    m.eo_plus = [](int j, double v) {
        const int mth = j + 2; // antiderivative power
        if (mth % 2 == 0) {    // a = v^odd
            return v > 0.0 ? std::pow(v, mth) / mth : 0.0;
        }
        return std::pow(v, mth) / mth; // a = v^even >= 0
    };
    m.eo_minus = [](int j, double v) {
        const int mth = j + 2;
        if (mth % 2 == 0) {
            return v < 0.0 ? std::pow(v, mth) / mth : 0.0;
        }
        return 0.0;
    };
    return m;
}

/// Scalar convex power flux A(u) = |u|^p / p, a(u) = |u|^(p-1) sign(u), p >= 2.
inline FluxModel convex_power_flux(double p, Interval I) {
    if (!(p >= 2.0)) throw DomainError("convex_power_flux: p must be >= 2");
    if (!(I.hi > I.lo)) throw DomainError("convex_power_flux: empty interval");
    FluxModel m;
    m.name = "convex-power";
    m.dimension = 1;
    m.interval = I;
    m.A = [p](int, double v) { return std::pow(std::abs(v), p) / p; };
    m.a = [p](int, double v) {
        const double mag = std::pow(std::abs(v), p - 1.0);
        return v >= 0.0 ? mag : -mag;
    };
    m.lipschitz_bound = std::pow(std::max(std::abs(I.lo), std::abs(I.hi)), p - 1.0);
    m.eo_plus = [p](int, double v) { return v > 0.0 ? std::pow(v, p) / p : 0.0; };
    m.eo_minus = [p](int, double v) { return v < 0.0 ? std::pow(-v, p) / p : 0.0; };
    return m;
}

/// Polynomial flux: per-axis coefficient lists for A_j (ascending powers).
/// The velocity is the exact symbolic derivative. No closed-form EO split;
/// the solver integrates |a_j| adaptively.
inline FluxModel polynomial_flux(std::vector<std::vector<double>> coeffs, Interval I) {
    if (coeffs.empty()) throw DomainError("polynomial_flux: no components");
    if (!(I.hi > I.lo)) throw DomainError("polynomial_flux: empty interval");
    FluxModel m;
    m.name = "custom-poly";
    m.dimension = static_cast<int>(coeffs.size());
    m.interval = I;
    auto shared = std::make_shared<std::vector<std::vector<double>>>(std::move(coeffs));
    m.A = [shared](int j, double v) {
        const auto& c = (*shared)[static_cast<std::size_t>(j)];
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * v + c[k];
        return acc;
    };
    m.a = [shared](int j, double v) {
        const auto& c = (*shared)[static_cast<std::size_t>(j)];
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) acc = acc * v + static_cast<double>(k) * c[k];
        return acc;
    };
    double c1 = 0.0;
    const int samples = 10001;
    for (int j = 0; j < m.dimension; ++j)
        for (int s = 0; s < samples; ++s) {
            const double v = I.lo + I.length() * s / (samples - 1);
            c1 = std::max(c1, std::abs(m.a(j, v)));
        }
    m.lipschitz_bound = c1;
    return m;
}

// ---------------------------------------------------------------------------
// Nondegeneracy sweep
// ---------------------------------------------------------------------------

/// Quasi-uniform deterministic point i of N on the unit sphere in R^ambient.
/// ambient 2: equally spaced circle; ambient 3: Fibonacci lattice;
/// higher ambient: seeded Gaussian directions (deterministic, pseudo-uniform).
inline std::vector<double> sphere_point(int ambient, std::int64_t i, std::int64_t N) {
    std::vector<double> p(static_cast<std::size_t>(ambient), 0.0);
    if (ambient < 2) throw DomainError("sphere_point: ambient dimension must be >= 2");
    if (ambient == 2) {
        const double th = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(N);
        p[0] = std::cos(th);
        p[1] = std::sin(th);
        return p;
    }
    if (ambient == 3) {
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(N);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = golden_angle * static_cast<double>(i);
        p[0] = z;
        p[1] = r * std::cos(th);
        p[2] = r * std::sin(th);
        return p;
    }
    std::mt19937_64 gen(0x5c1abull * 1000003ull + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> nd;
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& c : p) { c = nd(gen); norm2 += c * c; }
    } while (norm2 < 1e-12);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : p) c *= inv;
    return p;
}

/// Result of the brute-force measurement of the genuine-nonlinearity
/// parameters: for each delta, the sup over sphere directions (t, xi) of
/// |{v in I : |t + a(v).xi| < delta}|, and the power-law fit
/// worst_measure ~ C0 * delta^alpha.
struct NondegeneracyProfile {
    std::vector<double> delta_grid;     // strictly decreasing
    std::vector<double> worst_measure;  // same length
    double alpha_est = 0.0;
    double C0_est = 0.0;
    int sphere_sample_count = 0;
    int v_sample_count = 0;
    bool genuinely_nonlinear = true;    // false: measure floored as delta -> 0
    std::vector<int> fit_indices;       // delta indices used in the regression
};

inline NondegeneracyProfile nondegeneracy_profile(const FluxModel& model,
                                                  std::vector<double> delta_grid,
                                                  int sphere_samples, int v_samples) {
    if (delta_grid.empty()) throw DomainError("nondegeneracy_profile: empty delta grid");
    for (double d : delta_grid)
        if (!(d > 0.0)) throw DomainError("nondegeneracy_profile: deltas must be positive");
    for (std::size_t i = 1; i < delta_grid.size(); ++i)
        if (!(delta_grid[i] < delta_grid[i - 1]))
            throw DomainError("nondegeneracy_profile: delta grid must be strictly decreasing");
    if (sphere_samples < 100) throw DomainError("nondegeneracy_profile: need >= 100 sphere samples");
    if (v_samples < 1000) throw DomainError("nondegeneracy_profile: need >= 1000 v samples");

    const int n = model.dimension;
    const int ambient = n + 1;
    const double len = model.interval.length();
    const double h = len / static_cast<double>(v_samples - 1);

    // Closed uniform v-grid including endpoints; each node owns a cell of
    // width h (h/2 at the two endpoints), so the counted measure never
    // exceeds |I|.
    std::vector<double> atab(static_cast<std::size_t>(v_samples) * static_cast<std::size_t>(n));
    std::vector<double> wtab(static_cast<std::size_t>(v_samples), h);
    wtab.front() = 0.5 * h;
    wtab.back() = 0.5 * h;
    for (int k = 0; k < v_samples; ++k) {
        const double v = model.interval.lo + h * k;
        for (int j = 0; j < n; ++j)
            atab[static_cast<std::size_t>(k) * n + j] = model.a(j, v);
    }

    const std::size_t nd = delta_grid.size();
    auto sweep_chunk = [&](std::int64_t begin, std::int64_t end) {
        std::vector<double> worst(nd, 0.0);
        std::vector<double> meas(nd);
        for (std::int64_t i = begin; i < end; ++i) {
            const auto dir = sphere_point(ambient, i, sphere_samples);
            std::fill(meas.begin(), meas.end(), 0.0);
            for (int k = 0; k < v_samples; ++k) {
                double s = dir[0];
                const double* av = &atab[static_cast<std::size_t>(k) * n];
                for (int j = 0; j < n; ++j) s += dir[static_cast<std::size_t>(j + 1)] * av[j];
                const double mag = std::abs(s);
                for (std::size_t m = 0; m < nd; ++m) {
                    if (mag < delta_grid[m]) meas[m] += wtab[static_cast<std::size_t>(k)];
                    else break; // deltas decrease, remaining comparisons fail too
                }
            }
            for (std::size_t m = 0; m < nd; ++m) worst[m] = std::max(worst[m], meas[m]);
        }
        return worst;
    };

    // Embarrassingly parallel over sphere directions; max-merge is order
    // independent, so the result is deterministic under any scheduling.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::int64_t chunk = (sphere_samples + static_cast<std::int64_t>(hw) - 1) / hw;
    std::vector<std::future<std::vector<double>>> futs;
    for (std::int64_t b = 0; b < sphere_samples; b += chunk)
        futs.push_back(std::async(std::launch::async, sweep_chunk, b,
                                  std::min<std::int64_t>(b + chunk, sphere_samples)));
    std::vector<double> worst(nd, 0.0);
    for (auto& f : futs) {
        const auto part = f.get();
        for (std::size_t m = 0; m < nd; ++m) worst[m] = std::max(worst[m], part[m]);
    }

    NondegeneracyProfile prof;
    prof.delta_grid = std::move(delta_grid);
    prof.worst_measure = std::move(worst);
    prof.sphere_sample_count = sphere_samples;
    prof.v_sample_count = v_samples;

    bool all_zero = true;
    bool any_saturated = false;
    for (std::size_t m = 0; m < nd; ++m) {
        const double w = prof.worst_measure[m];
        if (w > 0.0) all_zero = false;
        if (w > 0.9 * len) any_saturated = true;
        if (w > 0.0 && w <= 0.9 * len) prof.fit_indices.push_back(static_cast<int>(m));
    }
    if (all_zero) throw FitError("nondegeneracy_profile: degenerate grid (all measures zero)");

    if (prof.fit_indices.size() < 2) {
        if (any_saturated) {
            // Measure stays pinned at |I| down the grid: flux not genuinely
            // nonlinear.
            prof.genuinely_nonlinear = false;
            prof.alpha_est = 0.0;
            prof.C0_est = *std::max_element(prof.worst_measure.begin(), prof.worst_measure.end());
            prof.fit_indices.clear();
            return prof;
        }
        throw FitError("nondegeneracy_profile: degenerate fit (fewer than two usable deltas)");
    }

    std::vector<double> fx, fy;
    fx.reserve(prof.fit_indices.size());
    fy.reserve(prof.fit_indices.size());
    for (int idx : prof.fit_indices) {
        fx.push_back(prof.delta_grid[static_cast<std::size_t>(idx)]);
        fy.push_back(prof.worst_measure[static_cast<std::size_t>(idx)]);
    }
    const LineFit fit = ols_loglog(fx, fy);
    prof.alpha_est = fit.slope;
    prof.C0_est = std::exp(fit.intercept);
    if (prof.alpha_est < 0.02) {
        prof.genuinely_nonlinear = false;
        prof.alpha_est = 0.0;
        prof.C0_est = *std::max_element(prof.worst_measure.begin(), prof.worst_measure.end());
    }
    return prof;
}

} // namespace sclab
