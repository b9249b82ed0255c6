#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "sclab/errors.hpp"

namespace sclab {

// ---------------------------------------------------------------------------
// Gauss-Legendre cell averages
// ---------------------------------------------------------------------------

namespace detail {
// 4-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 4> kGauss4Nodes = {
    -0.8611363115940526, -0.3399810435848563,
     0.3399810435848563,  0.8611363115940526};
inline constexpr std::array<double, 4> kGauss4Weights = {
     0.3478548451374538,  0.6521451548625461,
     0.6521451548625461,  0.3478548451374538};
} // namespace detail

/// Average of f over [a, b] by 4-point Gauss quadrature.
template <class F>
double gauss4_average(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k)
        acc += detail::kGauss4Weights[k] * f(mid + half * detail::kGauss4Nodes[k]);
    return 0.5 * acc;
}

/// Average of f over the rectangle [ax,bx] x [ay,by], tensor 4x4 Gauss rule.
template <class F>
double gauss4_average_2d(F&& f, double ax, double bx, double ay, double by) {
    const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    double acc = 0.0;
    for (int kx = 0; kx < 4; ++kx) {
        const double x = mx + hx * detail::kGauss4Nodes[kx];
        double row = 0.0;
        for (int ky = 0; ky < 4; ++ky)
            row += detail::kGauss4Weights[ky] * f(x, my + hy * detail::kGauss4Nodes[ky]);
        acc += detail::kGauss4Weights[kx] * row;
    }
    return 0.25 * acc;
}

// ---------------------------------------------------------------------------
// Adaptive Simpson
// ---------------------------------------------------------------------------

namespace detail {
template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] (signed) to absolute
/// tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (a == b) return 0.0;
    const double sign = (a < b) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double m = 0.5 * (lo + hi);
    const double flo = f(lo), fm = f(m), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    return sign * detail::adaptive_simpson_rec(f, lo, hi, flo, fm, fhi, whole, tol, max_depth);
}

// ---------------------------------------------------------------------------
// Smooth compactly supported test profiles
// ---------------------------------------------------------------------------

/// Quintic smoothstep: 0 for q<=0, 1 for q>=1, C^2 in between.
inline double smoothstep5(double q) {
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return 1.0;
    return q * q * q * (10.0 + q * (-15.0 + 6.0 * q));
}

inline double smoothstep5_deriv(double q) {
    if (q <= 0.0 || q >= 1.0) return 0.0;
    const double r = q * (1.0 - q);
    return 30.0 * r * r;
}

/// Plateau bump on [-1, 1]: identically 1 on |s| <= 1/2, smooth C^2 ramp to 0
/// at |s| = 1. Used both as a perturbation profile and as a test function.
inline double plateau_bump(double s) {
    return smoothstep5(2.0 * (1.0 - std::abs(s)));
}

inline double plateau_bump_deriv(double s) {
    const double q = 2.0 * (1.0 - std::abs(s));
    const double dq = (s >= 0.0) ? -2.0 : 2.0;
    return smoothstep5_deriv(q) * dq;
}

/// Integral of plateau_bump over [-1, 1] (plateau of width 1 plus two ramps).
inline constexpr double plateau_bump_mass() { return 1.5; }

/// Tensor-product space-time bump: plateau profile in t and in each space
/// axis, specified by center and half-widths. dim is the number of space
/// axes actually used (1 or 2).
struct SpaceTimeBump {
    int dim = 1;
    double t_center = 0.0;
    double t_halfwidth = 1.0;
    std::array<double, 2> x_center{0.0, 0.0};
    std::array<double, 2> x_halfwidth{1.0, 1.0};

    double value(double t, const std::array<double, 2>& x) const {
        double v = plateau_bump((t - t_center) / t_halfwidth);
        for (int j = 0; j < dim; ++j)
            v *= plateau_bump((x[j] - x_center[j]) / x_halfwidth[j]);
        return v;
    }

    double dt(double t, const std::array<double, 2>& x) const {
        double v = plateau_bump_deriv((t - t_center) / t_halfwidth) / t_halfwidth;
        for (int j = 0; j < dim; ++j)
            v *= plateau_bump((x[j] - x_center[j]) / x_halfwidth[j]);
        return v;
    }

    double dx(int axis, double t, const std::array<double, 2>& x) const {
        double v = plateau_bump((t - t_center) / t_halfwidth);
        for (int j = 0; j < dim; ++j) {
            const double s = (x[j] - x_center[j]) / x_halfwidth[j];
            v *= (j == axis) ? plateau_bump_deriv(s) / x_halfwidth[j] : plateau_bump(s);
        }
        return v;
    }
};

} // namespace sclab
