#pragma once

// Structured text configuration: one "dotted.key = value" pair per line,
// '#' comments. Values are parsed on demand.

#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/exponents.hpp"
#include "sclab/flux.hpp"
#include "sclab/harness.hpp"
#include "sclab/solver.hpp"
#include "sclab/waves.hpp"

namespace sclab {

class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str());
    }

    static ConfigMap parse_text(const std::string& text) {
        ConfigMap cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string val = trim(trimmed.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            cfg.values_[key] = val;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing config key: " + key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    int get_int(const std::string& key) const {
        const double d = get_double(key);
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d) throw ConfigError("config key is not an integer: " + key);
        return i;
    }
    int get_int(const std::string& key, int fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    std::vector<double> get_list(const std::string& key) const {
        const std::string s = get_string(key);
        std::vector<double> out;
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) out.push_back(to_double(key, trim(tok)));
        if (out.empty()) throw ConfigError("empty list for config key: " + key);
        return out;
    }

    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }
    static double to_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number for config key " + key + ": '" + s + "'");
        }
    }

    std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline FluxModel build_flux(const ConfigMap& cfg) {
    const std::string type = cfg.get_string("flux.type", "burgers");
    Interval I{cfg.get_double("flux.interval.lo", 0.0), cfg.get_double("flux.interval.hi", 1.0)};
    if (cfg.has("flux.interval")) {
        const auto v = cfg.get_list("flux.interval");
        if (v.size() != 2) throw ConfigError("flux.interval needs lo,hi");
        I = {v[0], v[1]};
    }
    if (type == "burgers") return burgers_flux(cfg.get_int("flux.n", 1), I);
    if (type == "convex-power") return convex_power_flux(cfg.get_double("flux.power", 2.0), I);
    if (type == "custom-poly") {
        // per-axis coefficient lists flux.coeffs.0, flux.coeffs.1, ...
        std::vector<std::vector<double>> coeffs;
        for (int ax = 0;; ++ax) {
            const std::string key = "flux.coeffs." + std::to_string(ax);
            if (!cfg.has(key)) break;
            coeffs.push_back(cfg.get_list(key));
        }
        if (coeffs.empty()) throw ConfigError("custom-poly flux needs flux.coeffs.0 = c0,c1,...");
        return polynomial_flux(std::move(coeffs), I);
    }
    throw ConfigError("unknown flux.type: " + type);
}

inline Boundary parse_boundary(const std::string& s) {
    if (s == "periodic") return Boundary::Periodic;
    if (s == "outflow") return Boundary::Outflow;
    throw ConfigError("unknown boundary policy: " + s);
}

inline Grid build_grid(const ConfigMap& cfg) {
    Grid g;
    const auto cells = cfg.get_list("grid.cells");
    g.dim = static_cast<int>(cells.size());
    if (g.dim < 1 || g.dim > 2) throw ConfigError("grid.cells must list 1 or 2 axes");
    for (int ax = 0; ax < g.dim; ++ax) {
        g.cells[static_cast<std::size_t>(ax)] = static_cast<int>(cells[static_cast<std::size_t>(ax)]);
        const auto box =
            cfg.get_list(g.dim == 1 ? "grid.box" : "grid.box." + std::to_string(ax));
        if (box.size() != 2) throw ConfigError("grid.box needs lo,hi");
        g.lo[static_cast<std::size_t>(ax)] = box[0];
        g.hi[static_cast<std::size_t>(ax)] = box[1];
        const std::string b =
            g.dim == 1 ? cfg.get_string("grid.boundary", "periodic")
                       : cfg.get_string("grid.boundary." + std::to_string(ax),
                                        cfg.get_string("grid.boundary", "periodic"));
        g.boundary[static_cast<std::size_t>(ax)] = parse_boundary(b);
    }
    g.validate();
    return g;
}

inline RarefactionWave build_wave(const ConfigMap& cfg, const FluxModel& flux) {
    return RarefactionWave(flux, cfg.get_int("init.rarefaction.axis", 0),
                           cfg.get_double("init.rarefaction.uL"),
                           cfg.get_double("init.rarefaction.uR"),
                           cfg.get_double("init.rarefaction.t0", 1.0),
                           cfg.get_double("init.rarefaction.x0", 0.0));
}

inline Perturbation build_perturbation(const ConfigMap& cfg, int dim) {
    Perturbation p;
    p.amplitude = cfg.get_double("init.bump.amplitude");
    const auto center = cfg.get_list("init.bump.center");
    const auto width = cfg.get_list("init.bump.width");
    if (static_cast<int>(center.size()) != dim || static_cast<int>(width.size()) != dim)
        throw ConfigError("init.bump.center/width must list one value per axis");
    for (int ax = 0; ax < dim; ++ax) {
        p.center[static_cast<std::size_t>(ax)] = center[static_cast<std::size_t>(ax)];
        p.width[static_cast<std::size_t>(ax)] = width[static_cast<std::size_t>(ax)];
    }
    return p;
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "engquist-osher") return Scheme::EngquistOsher;
    if (s == "lax-friedrichs") return Scheme::LaxFriedrichs;
    throw ConfigError("unknown scheme: " + s);
}

inline SolveConfig build_solve_config(const ConfigMap& cfg) {
    SolveConfig sc;
    sc.flux = build_flux(cfg);
    sc.grid = build_grid(cfg);
    sc.end_time = cfg.get_double("time.end");
    sc.cfl = cfg.get_double("time.cfl", sc.grid.dim == 1 ? 0.45 : 0.22);
    sc.scheme = parse_scheme(cfg.get_string("scheme", "engquist-osher"));
    if (cfg.has("time.snapshots")) sc.snapshot_times = cfg.get_list("time.snapshots");

    const std::string itype = cfg.get_string("init.type");
    if (itype == "constant") {
        sc.init = constant_init(cfg.get_double("init.value"));
    } else if (itype == "riemann") {
        sc.init = riemann_init(cfg.get_double("init.uL"), cfg.get_double("init.uR"),
                               cfg.get_int("init.axis", 0), cfg.get_double("init.x0", 0.0));
    } else if (itype == "rarefaction") {
        sc.init = rarefaction_init(build_wave(cfg, sc.flux));
    } else if (itype == "rarefaction-plus-bump") {
        sc.init = rarefaction_plus_bump_init(build_wave(cfg, sc.flux),
                                             build_perturbation(cfg, sc.grid.dim), sc.grid.dim);
    } else if (itype == "table") {
        const std::string path = cfg.get_string("init.table");
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open init.table file: " + path);
        std::vector<double> vals;
        double x;
        while (in >> x) vals.push_back(x);
        sc.init = table_init(sc.grid, std::move(vals));
    } else {
        throw ConfigError("unknown init.type: " + itype);
    }
    sc.validate();
    return sc;
}

/// Measurement times: either an explicit list or a geometric ladder
/// first:ratio:count.
inline std::vector<double> build_measure_times(const ConfigMap& cfg) {
    if (cfg.has("measure.times")) return cfg.get_list("measure.times");
    const double first = cfg.get_double("measure.first", 1.0);
    const double ratio = cfg.get_double("measure.ratio", 2.0);
    const int count = cfg.get_int("measure.count", 5);
    std::vector<double> times;
    double t = first;
    for (int i = 0; i < count; ++i, t *= ratio) times.push_back(t);
    return times;
}

inline ExperimentConfig build_experiment(const ConfigMap& cfg) {
    const FluxModel flux = build_flux(cfg);
    const Grid grid = build_grid(cfg);
    ExperimentConfig ec{flux,
                        grid,
                        build_wave(cfg, flux),
                        build_perturbation(cfg, grid.dim),
                        cfg.get_double("time.end"),
                        cfg.get_double("time.cfl", grid.dim == 1 ? 0.45 : 0.22),
                        parse_scheme(cfg.get_string("scheme", "engquist-osher")),
                        build_measure_times(cfg),
                        0.0,
                        std::numeric_limits<double>::infinity(),
                        ExponentSet{},
                        cfg.get_double("measure.rate_tolerance", 0.05)};
    if (cfg.has("measure.fit_window")) {
        const auto w = cfg.get_list("measure.fit_window");
        if (w.size() != 2) throw ConfigError("measure.fit_window needs tmin,tmax");
        ec.fit_tmin = w[0];
        ec.fit_tmax = w[1];
    }
    // Default alpha: 1/n for the Burgers family, 1/(p-1) for convex powers;
    // overridable.
    double alpha_default = 1.0;
    if (flux.name == "burgers") alpha_default = 1.0 / flux.dimension;
    if (flux.name == "convex-power") alpha_default = 1.0 / (cfg.get_double("flux.power", 2.0) - 1.0);
    const double alpha = cfg.get_double("exponents.alpha", alpha_default);
    const int n = cfg.get_int("exponents.n", flux.dimension);
    if (cfg.has("exponents.delta"))
        ec.exponents = compute_exponents(alpha, n, cfg.get_double("exponents.delta"));
    else
        ec.exponents = optimize_gamma(alpha, n, cfg.get_double("exponents.margin", 0.01));
    return ec;
}

} // namespace sclab
