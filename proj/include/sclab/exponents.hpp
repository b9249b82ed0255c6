#pragma once

#include <cmath>

#include "sclab/errors.hpp"

namespace sclab {

/// The exponent bundle driving the decay estimate. All members are plain
/// double-precision arithmetic on the defining formulas:
///
///   theta = alpha / (alpha + 4)
///   beta  = (1 - theta)/2 + delta
///   gamma = delta / (beta + theta)         (in (0,1) when valid)
///   eta   = theta / (beta + theta)         (in (0, alpha/2) when valid)
///   gamma0 = 1 / (1 + n(n+1)/2)
///
/// valid is true exactly when 0 < delta < theta/(n+1).
struct ExponentSet {
    double alpha = 0.0;
    int n = 0;
    double theta = 0.0;
    double delta = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double gamma0 = 0.0;
    bool valid = false;
};

inline double compute_theta(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0)
        throw DomainError("compute_theta: alpha must lie in (0, 1]");
    return alpha / (alpha + 4.0);
}

inline double gamma0(int n) {
    if (n < 1) throw DomainError("gamma0: n must be >= 1");
    return 1.0 / (1.0 + 0.5 * static_cast<double>(n) * static_cast<double>(n + 1));
}

inline ExponentSet compute_exponents(double alpha, int n, double delta) {
    if (!std::isfinite(alpha) || !std::isfinite(delta))
        throw DomainError("compute_exponents: non-finite input");
    if (alpha <= 0.0 || alpha > 1.0)
        throw DomainError("compute_exponents: alpha must lie in (0, 1]");
    if (n < 1) throw DomainError("compute_exponents: n must be >= 1");
    if (delta <= 0.0) throw DomainError("compute_exponents: delta must be positive");

    ExponentSet e;
    e.alpha = alpha;
    e.n = n;
    e.delta = delta;
    e.theta = alpha / (alpha + 4.0);
    e.beta = 0.5 * (1.0 - e.theta) + delta;
    e.gamma = delta / (e.beta + e.theta);
    e.eta = e.theta / (e.beta + e.theta);
    e.gamma0 = gamma0(n);
    e.valid = delta < e.theta / static_cast<double>(n + 1);
    return e;
}

/// Largest-rate valid exponent set at a relative safety margin:
/// delta = (1 - margin) * theta/(n+1). gamma is strictly increasing in delta
/// on the valid range, so this is the best valid gamma at the given margin.
inline ExponentSet optimize_gamma(double alpha, int n, double margin) {
    if (!std::isfinite(margin) || margin <= 0.0 || margin >= 1.0)
        throw DomainError("optimize_gamma: margin must lie in (0, 1)");
    const double theta = compute_theta(alpha);
    if (n < 1) throw DomainError("optimize_gamma: n must be >= 1");
    const double delta = (1.0 - margin) * theta / static_cast<double>(n + 1);
    return compute_exponents(alpha, n, delta);
}

/// Decay envelope C (1 + GammaBar)^eta * l1_norm^gamma / t^(n gamma).
/// Lambda enters only through the fitted constant C and is accepted for
/// signature completeness.
inline double bound_envelope(const ExponentSet& exps, double /*Lambda*/, double GammaBar,
                             double l1_norm, double t, double C) {
    if (!exps.valid) throw DomainError("bound_envelope: exponent set is not valid");
    if (!(t > 0.0)) throw DomainError("bound_envelope: t must be positive");
    if (l1_norm < 0.0) throw DomainError("bound_envelope: l1_norm must be nonnegative");
    if (!(C > 0.0)) throw DomainError("bound_envelope: C must be positive");
    return C * std::pow(1.0 + GammaBar, exps.eta) * std::pow(l1_norm, exps.gamma) /
           std::pow(t, static_cast<double>(exps.n) * exps.gamma);
}

} // namespace sclab
