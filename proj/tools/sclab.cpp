// Command-line front end: nondegeneracy sweeps, exponent algebra, solver
// runs, kinetic diagnostics, decay experiments, and trajectory audits.

#include <array>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sclab/config.hpp"
#include "sclab/exponents.hpp"
#include "sclab/flux.hpp"
#include "sclab/harness.hpp"
#include "sclab/kinetic.hpp"
#include "sclab/report_io.hpp"
#include "sclab/solver.hpp"

namespace {

std::vector<double> parse_deltas(const std::string& spec) {
    if (spec.rfind("geom:", 0) == 0) {
        // geom:first:ratio:count with ratio < 1
        double first = 0.0, ratio = 0.0;
        int count = 0;
        if (std::sscanf(spec.c_str(), "geom:%lf:%lf:%d", &first, &ratio, &count) != 3)
            throw sclab::ConfigError("bad --deltas geometric spec, expected geom:first:ratio:count");
        std::vector<double> out;
        double d = first;
        for (int i = 0; i < count; ++i, d *= ratio) out.push_back(d);
        return out;
    }
    std::vector<double> out;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

sclab::FluxModel flux_from_flags(const std::string& type, int n, const std::string& interval,
                                 double power, const std::string& coeffs) {
    const auto iv = parse_deltas(interval); // reuse the comma parser
    if (iv.size() != 2) throw sclab::ConfigError("--interval expects lo,hi");
    sclab::Interval I{iv[0], iv[1]};
    if (type == "burgers") return sclab::burgers_flux(n, I);
    if (type == "convex-power") return sclab::convex_power_flux(power, I);
    if (type == "custom-poly") {
        std::vector<std::vector<double>> cs;
        std::istringstream in(coeffs);
        std::string axis;
        while (std::getline(in, axis, ';')) cs.push_back(parse_deltas(axis));
        return sclab::polynomial_flux(std::move(cs), I);
    }
    throw sclab::ConfigError("unknown --flux type: " + type);
}

sclab::ReferenceEvaluator wave_evaluator(const sclab::RarefactionWave& wave) {
    return [wave](double t, const std::array<double, 2>& x) { return wave.evaluate(t, x); };
}

std::vector<sclab::SolutionField> dense_trajectory(const sclab::SolveConfig& base, double t0,
                                                   double t1, int count) {
    sclab::SolveConfig cfg = base;
    cfg.snapshot_times.clear();
    for (int i = 0; i < count; ++i)
        cfg.snapshot_times.push_back(t0 + (t1 - t0) * i / (count - 1));
    return sclab::solve(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sclab: desk-scale experiments for multi-dimensional scalar conservation laws"};
    app.require_subcommand(1);

    // --- nondeg ---
    auto* nondeg = app.add_subcommand("nondeg", "measure genuine-nonlinearity parameters");
    std::string nd_flux = "burgers", nd_interval = "-1,1", nd_deltas = "geom:0.125:0.5:8";
    std::string nd_coeffs, nd_out;
    int nd_n = 1, nd_sphere = 2000, nd_v = 20000;
    double nd_power = 2.0;
    nondeg->add_option("--flux", nd_flux, "burgers|convex-power|custom-poly");
    nondeg->add_option("--n", nd_n, "space dimension (burgers)");
    nondeg->add_option("--interval", nd_interval, "admissible interval lo,hi");
    nondeg->add_option("--deltas", nd_deltas, "comma list or geom:first:ratio:count");
    nondeg->add_option("--sphere-samples", nd_sphere);
    nondeg->add_option("--v-samples", nd_v);
    nondeg->add_option("--power", nd_power, "exponent for convex-power");
    nondeg->add_option("--coeffs", nd_coeffs, "custom-poly coefficients, axes ';'-separated");
    nondeg->add_option("--out", nd_out, "JSON report path");

    // --- exponents ---
    auto* expo = app.add_subcommand("exponents", "exponent bundle arithmetic");
    double ex_alpha = 1.0, ex_delta = -1.0, ex_margin = 0.01;
    int ex_n = 1;
    bool ex_opt = false;
    std::string ex_out;
    expo->add_option("--alpha", ex_alpha)->required();
    expo->add_option("--n", ex_n)->required();
    expo->add_option("--delta", ex_delta);
    expo->add_flag("--optimize", ex_opt, "use the best valid delta at --margin");
    expo->add_option("--margin", ex_margin);
    expo->add_option("--out", ex_out);

    // --- solve ---
    auto* solve_cmd = app.add_subcommand("solve", "run the finite-volume solver");
    std::string sv_config, sv_prefix;
    solve_cmd->add_option("--config", sv_config)->required();
    solve_cmd->add_option("--out-prefix", sv_prefix)->required();

    // --- kinetic ---
    auto* kin = app.add_subcommand("kinetic", "kinetic-formulation diagnostics");
    kin->require_subcommand(1);
    auto* kin_rt = kin->add_subcommand("roundtrip-check", "chi reconstruction identity");
    double rt_lambda = 1.0;
    int rt_cells = 2048, rt_trials = 1000;
    unsigned rt_seed = 2024;
    std::string rt_out;
    kin_rt->add_option("--lambda", rt_lambda);
    kin_rt->add_option("--vcells", rt_cells);
    kin_rt->add_option("--trials", rt_trials);
    kin_rt->add_option("--seed", rt_seed);
    kin_rt->add_option("--out", rt_out);

    auto* kin_dg = kin->add_subcommand("degiorgi", "level-set energy sequence");
    std::string dg_config, dg_center = "0,0", dg_out;
    double dg_scale = 1.0, dg_K = 0.1;
    int dg_kmax = 10, dg_snapshots = 81;
    kin_dg->add_option("--config", dg_config)->required();
    kin_dg->add_option("--center", dg_center, "t,x[,y]");
    kin_dg->add_option("--scale", dg_scale);
    kin_dg->add_option("--K", dg_K);
    kin_dg->add_option("--kmax", dg_kmax);
    kin_dg->add_option("--snapshots", dg_snapshots);
    kin_dg->add_option("--out", dg_out);

    auto* kin_ds = kin->add_subcommand("dissipation", "entropy dissipation residual");
    std::string ds_config, ds_bump = "1,0,0.5,0.5", ds_out;
    double ds_k = 0.0;
    int ds_snapshots = 81;
    kin_ds->add_option("--config", ds_config)->required();
    kin_ds->add_option("--k", ds_k, "entropy level");
    kin_ds->add_option("--bump", ds_bump, "tc,xc[,yc],ht,hx[,hy]");
    kin_ds->add_option("--snapshots", ds_snapshots);
    kin_ds->add_option("--out", ds_out);

    // --- decay ---
    auto* decay = app.add_subcommand("decay", "perturbed-wave decay experiment");
    std::string dc_config, dc_out, dc_csv;
    decay->add_option("--config", dc_config)->required();
    decay->add_option("--out", dc_out, "JSON report path");
    decay->add_option("--csv", dc_csv, "series CSV path");

    // --- audit ---
    auto* audit = app.add_subcommand("audit", "contraction / maximum-principle audit");
    std::string au_a, au_b;
    audit->add_option("--a", au_a, "first trajectory manifest")->required();
    audit->add_option("--b", au_b, "second trajectory manifest")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*nondeg) {
            const auto model = flux_from_flags(nd_flux, nd_n, nd_interval, nd_power, nd_coeffs);
            const auto prof =
                sclab::nondegeneracy_profile(model, parse_deltas(nd_deltas), nd_sphere, nd_v);
            const auto j = sclab::to_json(prof);
            if (!nd_out.empty()) sclab::write_json_file(nd_out, j);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*expo) {
            const auto e = ex_opt ? sclab::optimize_gamma(ex_alpha, ex_n, ex_margin)
                                  : sclab::compute_exponents(ex_alpha, ex_n,
                                                             ex_delta > 0 ? ex_delta : 0.01);
            const auto j = sclab::to_json(e);
            if (!ex_out.empty()) sclab::write_json_file(ex_out, j);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*solve_cmd) {
            const auto cfg = sclab::ConfigMap::parse_file(sv_config);
            const auto sc = sclab::build_solve_config(cfg);
            const auto snaps = sclab::solve(sc);
            sclab::write_trajectory(sv_prefix, snaps, &cfg);
            std::cout << "wrote " << snaps.size() << " snapshots to " << sv_prefix << "_*.csv\n";
            return 0;
        }
        if (*kin_rt) {
            std::mt19937_64 gen(rt_seed);
            std::uniform_real_distribution<double> U(-rt_lambda, rt_lambda);
            const auto grid = sclab::VGrid::symmetric(rt_lambda, rt_cells);
            double worst = 0.0;
            for (int i = 0; i < rt_trials; ++i) {
                const double u = U(gen);
                worst = std::max(worst, std::abs(sclab::reconstruct_u(u, grid) - u));
            }
            sclab::json j{{"lambda", rt_lambda},
                          {"v_cells", rt_cells},
                          {"trials", rt_trials},
                          {"worst_error", worst},
                          {"cell_width", grid.width()},
                          {"pass", worst <= grid.width()}};
            if (!rt_out.empty()) sclab::write_json_file(rt_out, j);
            std::cout << j.dump(2) << "\n";
            return j["pass"].get<bool>() ? 0 : 1;
        }
        if (*kin_dg || *kin_ds) {
            const std::string path = *kin_dg ? dg_config : ds_config;
            const auto cfg = sclab::ConfigMap::parse_file(path);
            const auto sc = sclab::build_solve_config(cfg);
            if (*kin_dg) {
                const auto center = parse_deltas(dg_center);
                if (static_cast<int>(center.size()) != sc.grid.dim + 1)
                    throw sclab::ConfigError("--center needs t plus one coordinate per axis");
                const double tc = center[0];
                std::array<double, 2> xc{center[1], sc.grid.dim == 2 ? center[2] : 0.0};
                const auto traj = dense_trajectory(sc, std::max(0.0, tc - 2 * dg_scale),
                                                   std::min(sc.end_time, tc + 2 * dg_scale),
                                                   dg_snapshots);
                const auto wave = sclab::build_wave(cfg, sc.flux);
                const auto data = sclab::degiorgi_sequence(traj, wave_evaluator(wave), tc, xc,
                                                           dg_scale, dg_K, dg_kmax);
                const auto j = sclab::to_json(data);
                if (!dg_out.empty()) sclab::write_json_file(dg_out, j);
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            const auto b = parse_deltas(ds_bump);
            sclab::SpaceTimeBump bump;
            bump.dim = sc.grid.dim;
            if (static_cast<int>(b.size()) != 2 * (sc.grid.dim + 1))
                throw sclab::ConfigError("--bump needs tc,xc[,yc],ht,hx[,hy]");
            bump.t_center = b[0];
            bump.x_center = {b[1], sc.grid.dim == 2 ? b[2] : 0.0};
            bump.t_halfwidth = b[static_cast<std::size_t>(sc.grid.dim) + 1];
            bump.x_halfwidth = {b[static_cast<std::size_t>(sc.grid.dim) + 2],
                                sc.grid.dim == 2 ? b[5] : 1.0};
            const auto traj =
                dense_trajectory(sc, std::max(0.0, bump.t_center - bump.t_halfwidth),
                                 std::min(sc.end_time, bump.t_center + bump.t_halfwidth),
                                 ds_snapshots);
            const auto rep = sclab::entropy_dissipation_residual(traj, sc.flux, ds_k, bump);
            const auto j = sclab::to_json(rep);
            if (!ds_out.empty()) sclab::write_json_file(ds_out, j);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*decay) {
            const auto cfg = sclab::ConfigMap::parse_file(dc_config);
            const auto ec = sclab::build_experiment(cfg);
            const auto rep = sclab::run_decay_experiment(ec);
            const auto j = sclab::to_json(rep);
            if (!dc_out.empty()) sclab::write_json_file(dc_out, j);
            if (!dc_csv.empty()) sclab::write_decay_csv(dc_csv, rep);
            std::cout << j.dump(2) << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*audit) {
            const auto ta = sclab::read_trajectory(au_a);
            const auto tb = sclab::read_trajectory(au_b);
            const auto diffs = sclab::contraction_audit(ta, tb);
            const bool contraction = sclab::nonincreasing_within(diffs, 1e-12);
            auto hull_ok = [](const std::vector<sclab::SolutionField>& t) {
                const double lo = t.front().min_value(), hi = t.front().max_value();
                for (const auto& f : t)
                    if (f.min_value() < lo || f.max_value() > hi) return false;
                return true;
            };
            const bool max_principle = hull_ok(ta) && hull_ok(tb);
            sclab::json j{{"l1_diff", diffs},
                          {"contraction_pass", contraction},
                          {"max_principle_pass", max_principle}};
            std::cout << j.dump(2) << "\n";
            return (contraction && max_principle) ? 0 : 1;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
