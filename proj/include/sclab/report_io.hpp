#pragma once

// JSON reports and CSV snapshot files for the command-line tools.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sclab/config.hpp"
#include "sclab/flux.hpp"
#include "sclab/grid.hpp"
#include "sclab/harness.hpp"
#include "sclab/kinetic.hpp"

namespace sclab {

using json = nlohmann::json;

inline json to_json(const NondegeneracyProfile& p) {
    return json{{"delta_grid", p.delta_grid},
                {"worst_measure", p.worst_measure},
                {"alpha_est", p.alpha_est},
                {"C0_est", p.C0_est},
                {"sphere_sample_count", p.sphere_sample_count},
                {"v_sample_count", p.v_sample_count},
                {"genuinely_nonlinear", p.genuinely_nonlinear},
                {"fit_indices", p.fit_indices}};
}

inline json to_json(const ExponentSet& e) {
    return json{{"alpha", e.alpha}, {"n", e.n},         {"theta", e.theta},
                {"delta", e.delta}, {"beta", e.beta},   {"gamma", e.gamma},
                {"eta", e.eta},     {"gamma0", e.gamma0}, {"valid", e.valid}};
}

inline json to_json(const KineticLevelData& d) {
    return json{{"K", d.K},
                {"radii", d.radii},
                {"levels", d.levels},
                {"energies", d.energies},
                {"center_t", d.center_t},
                {"center_x", std::vector<double>{d.center_x[0], d.center_x[1]}},
                {"scale", d.scale}};
}

inline json to_json(const DissipationReport& r) {
    return json{{"entropy_level", r.entropy_level},
                {"test_function", r.test_function},
                {"residual", r.residual},
                {"grid_spacing", r.grid_spacing},
                {"snapshot_count", r.snapshot_count}};
}

inline json to_json(const DecayReport& r) {
    json j{{"times", r.times},
           {"linf_diff", r.linf_diff},
           {"l1_diff", r.l1_diff},
           {"envelope", r.envelope},
           {"rate_infinite", r.rate_infinite},
           {"gamma_bound", r.gamma_bound},
           {"envelope_constant", r.envelope_constant},
           {"l1_initial", r.l1_initial},
           {"lambda", r.lambda},
           {"gamma_bar", r.gamma_bar},
           {"pass", r.pass}};
    if (r.rate_infinite) j["fitted_rate"] = "inf";
    else j["fitted_rate"] = r.fitted_rate;
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Snapshot CSV + manifest
// ---------------------------------------------------------------------------

inline void write_snapshot_csv(const std::string& path, const SolutionField& f) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << std::setprecision(17);
    if (f.grid.dim == 1) {
        out << "x,u\n";
        for (std::size_t i = 0; i < f.values.size(); ++i)
            out << f.grid.cell_center(i)[0] << "," << f.values[i] << "\n";
    } else {
        out << "x,y,u\n";
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const auto c = f.grid.cell_center(i);
            out << c[0] << "," << c[1] << "," << f.values[i] << "\n";
        }
    }
}

inline json grid_to_json(const Grid& g) {
    json j{{"dim", g.dim}};
    for (int ax = 0; ax < g.dim; ++ax) {
        j["cells"].push_back(g.cells[static_cast<std::size_t>(ax)]);
        j["lo"].push_back(g.lo[static_cast<std::size_t>(ax)]);
        j["hi"].push_back(g.hi[static_cast<std::size_t>(ax)]);
        j["boundary"].push_back(g.boundary[static_cast<std::size_t>(ax)] == Boundary::Periodic
                                    ? "periodic"
                                    : "outflow");
    }
    return j;
}

inline Grid grid_from_json(const json& j) {
    Grid g;
    g.dim = j.at("dim").get<int>();
    for (int ax = 0; ax < g.dim; ++ax) {
        g.cells[static_cast<std::size_t>(ax)] = j.at("cells")[static_cast<std::size_t>(ax)].get<int>();
        g.lo[static_cast<std::size_t>(ax)] = j.at("lo")[static_cast<std::size_t>(ax)].get<double>();
        g.hi[static_cast<std::size_t>(ax)] = j.at("hi")[static_cast<std::size_t>(ax)].get<double>();
        g.boundary[static_cast<std::size_t>(ax)] =
            parse_boundary(j.at("boundary")[static_cast<std::size_t>(ax)].get<std::string>());
    }
    g.validate();
    return g;
}

/// Write snapshots as prefix_NNNN.csv plus prefix.manifest.json carrying the
/// times, a config echo, and the conservation ledger.
inline void write_trajectory(const std::string& prefix, const std::vector<SolutionField>& snaps,
                             const ConfigMap* config_echo = nullptr) {
    json manifest;
    manifest["times"] = json::array();
    manifest["files"] = json::array();
    manifest["mass"] = json::array();
    if (!snaps.empty()) manifest["grid"] = grid_to_json(snaps.front().grid);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        std::ostringstream name;
        name << prefix << "_" << std::setw(4) << std::setfill('0') << i << ".csv";
        write_snapshot_csv(name.str(), snaps[i]);
        manifest["times"].push_back(snaps[i].time);
        manifest["files"].push_back(name.str());
        manifest["mass"].push_back(total_mass(snaps[i]));
    }
    if (config_echo != nullptr) {
        json echo;
        for (const auto& [k, v] : config_echo->raw()) echo[k] = v;
        manifest["config"] = echo;
    }
    write_json_file(prefix + ".manifest.json", manifest);
}

inline std::vector<SolutionField> read_trajectory(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest: " + manifest_path);
    json manifest = json::parse(in);
    const Grid grid = grid_from_json(manifest.at("grid"));
    std::vector<SolutionField> snaps;
    for (std::size_t i = 0; i < manifest.at("files").size(); ++i) {
        SolutionField f;
        f.grid = grid;
        f.time = manifest.at("times")[i].get<double>();
        std::ifstream csv(manifest.at("files")[i].get<std::string>());
        if (!csv) throw ConfigError("cannot open snapshot csv listed in manifest");
        std::string line;
        std::getline(csv, line); // header
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            const auto pos = line.find_last_of(',');
            f.values.push_back(std::stod(line.substr(pos + 1)));
        }
        f.validate();
        snaps.push_back(std::move(f));
    }
    return snaps;
}

/// Decay series CSV with exactly the columns t, linf_diff, l1_diff,
/// bound_envelope.
inline void write_decay_csv(const std::string& path, const DecayReport& r) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << std::setprecision(17);
    out << "t,linf_diff,l1_diff,bound_envelope\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        out << r.times[i] << "," << r.linf_diff[i] << "," << r.l1_diff[i] << "," << r.envelope[i]
            << "\n";
}

} // namespace sclab
