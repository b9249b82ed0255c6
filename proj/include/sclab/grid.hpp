#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sclab/errors.hpp"

namespace sclab {

enum class Boundary { Periodic, Outflow };

/// Uniform Cartesian grid in 1 or 2 space dimensions with a per-axis
/// boundary policy. Cell i on an axis covers [lo + i*h, lo + (i+1)*h].
struct Grid {
    int dim = 1;
    std::array<int, 2> cells{4, 1};
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
    std::array<Boundary, 2> boundary{Boundary::Periodic, Boundary::Periodic};

    void validate() const {
        if (dim < 1 || dim > 2) throw ConfigError("Grid: dimension must be 1 or 2");
        for (int ax = 0; ax < dim; ++ax) {
            if (cells[static_cast<std::size_t>(ax)] < 4)
                throw ConfigError("Grid: need at least 4 cells per axis");
            if (!(hi[static_cast<std::size_t>(ax)] > lo[static_cast<std::size_t>(ax)]))
                throw ConfigError("Grid: empty axis extent");
        }
    }

    double spacing(int ax) const {
        return (hi[static_cast<std::size_t>(ax)] - lo[static_cast<std::size_t>(ax)]) /
               cells[static_cast<std::size_t>(ax)];
    }

    double min_spacing() const {
        double h = spacing(0);
        if (dim == 2) h = std::min(h, spacing(1));
        return h;
    }

    std::size_t total_cells() const {
        return static_cast<std::size_t>(cells[0]) * (dim == 2 ? static_cast<std::size_t>(cells[1]) : 1u);
    }

    double cell_volume() const {
        double v = spacing(0);
        if (dim == 2) v *= spacing(1);
        return v;
    }

    double center(int ax, int i) const {
        return lo[static_cast<std::size_t>(ax)] + (static_cast<double>(i) + 0.5) * spacing(ax);
    }

    std::size_t index(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(cells[0]) +
               static_cast<std::size_t>(ix);
    }

    std::array<double, 2> cell_center(std::size_t flat) const {
        const int ix = static_cast<int>(flat % static_cast<std::size_t>(cells[0]));
        const int iy = static_cast<int>(flat / static_cast<std::size_t>(cells[0]));
        std::array<double, 2> c{center(0, ix), 0.0};
        if (dim == 2) c[1] = center(1, iy);
        return c;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && cells == o.cells && lo == o.lo && hi == o.hi && boundary == o.boundary;
    }
};

/// Cell-averaged scalar field at one time level.
struct SolutionField {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    void validate() const {
        grid.validate();
        if (values.size() != grid.total_cells())
            throw ConfigError("SolutionField: value count does not match grid");
        for (double v : values)
            if (!std::isfinite(v)) throw ConfigError("SolutionField: non-finite value");
    }

    double min_value() const {
        double m = values.front();
        for (double v : values) m = std::min(m, v);
        return m;
    }
    double max_value() const {
        double m = values.front();
        for (double v : values) m = std::max(m, v);
        return m;
    }
};

/// Kahan-compensated sum; used for conservation ledgers and norms.
inline double stable_sum(const std::vector<double>& xs) {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

/// Total mass (integral of u) on the grid.
inline double total_mass(const SolutionField& f) {
    double sum = 0.0, c = 0.0;
    for (double x : f.values) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum * f.grid.cell_volume();
}

/// Discrete L1 distance between two fields on the same grid.
inline double l1_distance(const SolutionField& a, const SolutionField& b) {
    if (!(a.grid == b.grid)) throw ConfigError("l1_distance: grid mismatch");
    double sum = 0.0, c = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = std::abs(a.values[i] - b.values[i]) - c;
        const double t = sum + x;
        c = (t - sum) - x;
        sum = t;
    }
    return sum * a.grid.cell_volume();
}

/// Total variation of a 1D field (wrap term included for periodic grids).
inline double total_variation_1d(const SolutionField& f) {
    if (f.grid.dim != 1) throw ConfigError("total_variation_1d: field is not 1D");
    const auto& u = f.values;
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) tv += std::abs(u[i + 1] - u[i]);
    if (f.grid.boundary[0] == Boundary::Periodic) tv += std::abs(u.front() - u.back());
    return tv;
}

} // namespace sclab
