#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sclab/errors.hpp"

namespace sclab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t count = 0;
};

/// Ordinary least squares line y = slope*x + intercept, equal weights.
/// Fewer than two points, or coincident abscissae, are errors rather than
/// guesses.
inline LineFit ols_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw FitError("ols_line: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw FitError("ols_line: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (sxx == 0.0) throw FitError("ols_line: abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.count = n;
    return f;
}

/// Fit y ~ C * x^p in log-log space; returns {slope=p, intercept=log C}.
/// All samples must be strictly positive.
inline LineFit ols_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw FitError("ols_loglog: nonpositive abscissa");
        lx[i] = std::log(x[i]);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw FitError("ols_loglog: nonpositive ordinate");
        ly[i] = std::log(y[i]);
    }
    return ols_line(lx, ly);
}

} // namespace sclab
