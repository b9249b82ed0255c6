#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sclab/kinetic.hpp"
#include "sclab/solver.hpp"
#include "sclab/waves.hpp"
#include "oracles.hpp"

using namespace sclab;

namespace {

std::vector<double> uniform_times(double t0, double t1, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (count - 1);
    return out;
}

/// Synthetic trajectory sampling an evaluator at cell centers.
std::vector<SolutionField> synthetic_trajectory(const Grid& g, const ReferenceEvaluator& f,
                                                const std::vector<double>& times) {
    std::vector<SolutionField> out;
    for (double t : times) {
        SolutionField s;
        s.grid = g;
        s.time = t;
        s.values.resize(g.total_cells());
        for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f(t, g.cell_center(i));
        out.push_back(std::move(s));
    }
    return out;
}

Grid grid1d(int n, double lo, double hi, Boundary b = Boundary::Outflow) {
    Grid g;
    g.dim = 1;
    g.cells = {n, 1};
    g.lo = {lo, 0.0};
    g.hi = {hi, 1.0};
    g.boundary = {b, b};
    return g;
}

} // namespace

TEST_CASE("kinetic function chi") {
    CHECK(kinetic_function(0.7, 0.3) == 1);
    CHECK(kinetic_function(-0.5, -0.2) == -1);
    CHECK(kinetic_function(0.7, 0.9) == 0);
    // closed endpoints
    CHECK(kinetic_function(0.7, 0.7) == 1);
    CHECK(kinetic_function(0.7, 0.0) == 1);
    CHECK(kinetic_function(-0.5, -0.5) == -1);
    CHECK(kinetic_function(0.0, 0.0) == 0);
    CHECK(kinetic_function(0.5, -0.1) == 0);
}

TEST_CASE("reconstruction roundtrip") {
    const double Lambda = 1.0;
    SECTION("named cases") {
        const auto g = VGrid::symmetric(Lambda, 1000);
        CHECK(std::abs(reconstruct_u(0.5, g) - 0.5) <= 0.002);
        CHECK(reconstruct_u(0.0, g) == 0.0);
        CHECK(std::abs(reconstruct_u(-Lambda, g) + Lambda) <= g.width());
        CHECK_THROWS_AS(reconstruct_u(1.5, g), DomainError);
    }
    SECTION("1000 random states within one cell") {
        const auto g = VGrid::symmetric(Lambda, 2048);
        std::mt19937_64 gen(77);
        std::uniform_real_distribution<double> U(-Lambda, Lambda);
        for (int i = 0; i < 1000; ++i) {
            const double u = U(gen);
            CHECK(std::abs(reconstruct_u(u, g) - u) <= g.width());
        }
    }
}

TEST_CASE("h equals the indicator of (u_tilde, u)") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        double ut = U(gen), u = U(gen);
        if (ut > u) std::swap(ut, u);
        if (u - ut < 1e-6) continue;
        const double inside = ut + (u - ut) * 0.5;
        CHECK(h_value(u, ut, inside) == 1);
        CHECK(h_value(u, ut, u + 0.01) == 0);
        CHECK(h_value(u, ut, std::max(0.0, ut - 0.01)) == 0);
        CHECK(h_value(u, ut, 1.5) == 0);
    }
}

TEST_CASE("level set integral") {
    SECTION("examples") {
        CHECK(level_set_integral(0.9, 0.3, 0.2, 1.0) == Catch::Approx(0.4).margin(1e-15));
        CHECK(level_set_integral(0.9, 0.3, 0.7, 1.0) == 0.0);
        CHECK(level_set_integral(0.55, 0.55, 0.0, 1.0) == 0.0);
        CHECK(level_set_integral(0.55, 0.55, 0.3, 1.0) == 0.0);
    }
    SECTION("domain errors") {
        CHECK_THROWS_AS(level_set_integral(-0.1, 0.3, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(level_set_integral(0.4, -0.3, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(level_set_integral(0.4, 0.3, -0.1, 1.0), DomainError);
        CHECK_THROWS_AS(level_set_integral(1.4, 0.3, 0.1, 1.0), DomainError);
    }
    SECTION("matches the v-quadrature of h above u_tilde + ell") {
        const double Lambda = 1.0;
        const int cells = 2048;
        const double dv = 2.1 / cells; // padded grid layout
        std::mt19937_64 gen(21);
        std::uniform_real_distribution<double> U(0.0, Lambda);
        for (int i = 0; i < 1000; ++i) {
            const double u = U(gen), ut = U(gen), ell = 0.5 * U(gen);
            const double direct = level_set_integral(u, ut, ell, Lambda);
            const double quad = oracle::midpoint_v_integral(
                [&](double v) { return v >= ut + ell ? static_cast<double>(h_value(u, ut, v)) : 0.0; },
                -Lambda - 0.05, Lambda + 0.05, cells);
            CHECK(std::abs(direct - quad) <= dv);
        }
    }
}

TEST_CASE("degiorgi sequence basics") {
    const auto flux = burgers_flux(1, {-0.5, 1.6});
    const RarefactionWave wave(flux, 0, 0.0, 1.0, 1.0, 0.0);
    const auto ref = [&wave](double t, const std::array<double, 2>& x) { return wave.evaluate(t, x); };
    const auto g = grid1d(256, -4.0, 8.0);
    const auto times = uniform_times(2.0, 6.0, 81);

    SECTION("u identical to the reference gives zero energies") {
        const auto traj = synthetic_trajectory(g, ref, times);
        const auto d = degiorgi_sequence(traj, ref, 4.0, {2.0, 0.0}, 1.0, 0.3, 8);
        REQUIRE(d.energies.size() == 9);
        CHECK(d.radii.front() == 2.0);
        CHECK(d.levels.front() == 0.0);
        for (double a : d.energies) CHECK(a == 0.0);
    }
    SECTION("levels exhaust the difference range") {
        const auto shifted = [&](double t, const std::array<double, 2>& x) { return ref(t, x) + 0.1; };
        const auto traj = synthetic_trajectory(g, shifted, times);
        const auto d = degiorgi_sequence(traj, ref, 4.0, {2.0, 0.0}, 1.0, 0.2, 12);
        CHECK(d.energies.front() > 0.0);
        // ell_12 = 0.2 (1 - 2^-12) > 0.1, so the last level empties the set
        CHECK(d.energies.back() == 0.0);
        for (std::size_t k = 0; k + 1 < d.energies.size(); ++k)
            CHECK(d.energies[k + 1] <= d.energies[k]);
    }
    SECTION("sequence geometry") {
        const auto traj = synthetic_trajectory(g, ref, times);
        const auto d = degiorgi_sequence(traj, ref, 4.0, {2.0, 0.0}, 1.0, 0.5, 10);
        for (std::size_t k = 0; k + 1 < d.radii.size(); ++k) {
            CHECK(d.radii[k] > d.radii[k + 1]);
            CHECK(d.levels[k] < d.levels[k + 1]);
        }
        CHECK(d.radii.back() > 1.0);
        CHECK(d.levels.back() < d.K);
    }
    SECTION("ball leaving the sampled window is a geometry error") {
        const auto traj = synthetic_trajectory(g, ref, times);
        CHECK_THROWS_AS(degiorgi_sequence(traj, ref, 2.5, {2.0, 0.0}, 1.0, 0.3, 4), GeometryError);
        CHECK_THROWS_AS(degiorgi_sequence(traj, ref, 4.0, {7.5, 0.0}, 1.0, 0.3, 4), GeometryError);
    }
}

TEST_CASE("degiorgi on a perturbed rarefaction run", "[slow]") {
    const auto flux = burgers_flux(1, {-0.1, 1.45});
    const RarefactionWave wave(flux, 0, 0.0, 1.0, 1.0, 0.0);
    const auto ref = [&wave](double t, const std::array<double, 2>& x) { return wave.evaluate(t, x); };

    auto run = [&](int cells) {
        SolveConfig cfg;
        cfg.flux = flux;
        cfg.grid = grid1d(cells, -4.0, 10.0);
        Perturbation pert{0.3, {0.5, 0.0}, {0.8, 1.0}};
        cfg.init = rarefaction_plus_bump_init(wave, pert, 1);
        cfg.end_time = 6.0;
        cfg.snapshot_times = uniform_times(2.0, 6.0, 81);
        const auto traj = solve(cfg);
        // center the ball on the bulk of the perturbation at t = 4
        return degiorgi_sequence(traj, ref, 4.0, {2.5, 0.0}, 1.0, 0.12, 10);
    };

    const auto coarse = run(512);
    CHECK(coarse.energies.front() > 0.0);
    for (std::size_t k = 0; k + 1 < coarse.energies.size(); ++k)
        CHECK(coarse.energies[k + 1] <= coarse.energies[k]);
    CHECK(coarse.energies.back() < coarse.energies.front());

    const auto fine = run(1024);
    CHECK(fine.energies.front() ==
          Catch::Approx(coarse.energies.front()).epsilon(0.3)); // refined-grid cross check
}

TEST_CASE("entropy dissipation residual") {
    const auto flux = burgers_flux(1, {-1.0, 1.0});

    SECTION("constant solution pairs to zero") {
        SolveConfig cfg;
        cfg.flux = flux;
        cfg.grid = grid1d(256, -2.0, 2.0, Boundary::Periodic);
        cfg.init = constant_init(0.4);
        cfg.end_time = 3.0;
        cfg.snapshot_times = uniform_times(0.0, 3.0, 121);
        const auto traj = solve(cfg);
        SpaceTimeBump bump;
        bump.dim = 1;
        bump.t_center = 1.5;
        bump.t_halfwidth = 1.2;
        bump.x_center = {0.0, 0.0};
        bump.x_halfwidth = {1.0, 1.0};
        const auto rep = entropy_dissipation_residual(traj, flux, 0.1, bump);
        CHECK(std::abs(rep.residual) < 1e-12);
    }

    SECTION("stationary shock dissipates at the analytic jump rate") {
        // q(uL) - q(uR) with q = sgn(u) u^2/2: 1/2 - (-1/2) = 1 per unit time
        const double jump_rate = 1.0;
        SolveConfig cfg;
        cfg.flux = flux;
        cfg.grid = grid1d(2048, -2.0, 2.0);
        cfg.init = riemann_init(1.0, -1.0, 0);
        cfg.end_time = 3.0;
        cfg.snapshot_times = uniform_times(0.0, 3.0, 151);
        const auto traj = solve(cfg);
        SpaceTimeBump bump;
        bump.dim = 1;
        bump.t_center = 1.5;
        bump.t_halfwidth = 1.2;
        bump.x_center = {0.0, 0.0};
        bump.x_halfwidth = {1.0, 1.0};
        const auto rep = entropy_dissipation_residual(traj, flux, 0.0, bump);
        const double window_weight = bump.t_halfwidth * plateau_bump_mass(); // integral of phi(t, 0)
        CHECK(rep.residual / window_weight == Catch::Approx(jump_rate).epsilon(0.10));
    }

    SECTION("smooth rarefaction region vanishes with the mesh") {
        auto residual_at = [&](int cells) {
            SolveConfig cfg;
            cfg.flux = burgers_flux(1, {-0.1, 1.1});
            cfg.grid = grid1d(cells, -4.0, 6.0);
            const RarefactionWave wave(cfg.flux, 0, 0.0, 1.0, 1.0, 0.0);
            cfg.init = rarefaction_init(wave);
            cfg.end_time = 2.0;
            cfg.snapshot_times = uniform_times(0.0, 2.0, 161);
            const auto traj = solve(cfg);
            SpaceTimeBump bump;
            bump.dim = 1;
            bump.t_center = 1.0;
            bump.t_halfwidth = 0.5;
            bump.x_center = {0.75, 0.0};
            bump.x_halfwidth = {0.5, 0.5};
            return entropy_dissipation_residual(traj, cfg.flux, 0.3, bump).residual;
        };
        const double coarse = residual_at(512);
        const double fine = residual_at(1024);
        CHECK(std::abs(coarse) < 0.02);
        CHECK(std::abs(fine) <= std::max(0.65 * std::abs(coarse), 2e-5));
        // entropy solutions never pair negatively beyond discretization error
        CHECK(coarse > -0.01);
        CHECK(fine > -0.005);
    }

    SECTION("bump outside the sampled window is a geometry error") {
        SolveConfig cfg;
        cfg.flux = flux;
        cfg.grid = grid1d(64, -2.0, 2.0, Boundary::Periodic);
        cfg.init = constant_init(0.0);
        cfg.end_time = 1.0;
        cfg.snapshot_times = uniform_times(0.0, 1.0, 21);
        const auto traj = solve(cfg);
        SpaceTimeBump bump;
        bump.dim = 1;
        bump.t_center = 0.9;
        bump.t_halfwidth = 0.5; // sticks out past t = 1
        bump.x_center = {0.0, 0.0};
        bump.x_halfwidth = {1.0, 1.0};
        CHECK_THROWS_AS(entropy_dissipation_residual(traj, flux, 0.0, bump), GeometryError);
        bump.t_center = 0.5;
        bump.t_halfwidth = 0.3;
        bump.x_center = {1.8, 0.0}; // sticks out of the box
        CHECK_THROWS_AS(entropy_dissipation_residual(traj, flux, 0.0, bump), GeometryError);
    }
}

TEST_CASE("variation bound ratio") {
    const auto flux = burgers_flux(1, {-0.1, 1.45});
    const RarefactionWave wave(flux, 0, 0.0, 1.0, 1.0, 0.0);
    const auto ref = [&wave](double t, const std::array<double, 2>& x) { return wave.evaluate(t, x); };
    const auto g = grid1d(512, -4.0, 10.0);
    const auto times = uniform_times(1.0, 5.0, 81);
    const VGrid vg = VGrid::padded(1.45);

    SECTION("identical solutions give zero mass and ratio zero") {
        const auto traj = synthetic_trajectory(g, ref, times);
        GraphDescriptor w;
        w.constant = true;
        w.value = 0.2;
        const auto res = variation_bound_ratio(traj, ref, flux, w, 1.0, 2.0, 3.0, {2.0, 0.0}, 1.0,
                                               1.45, vg);
        CHECK(res.lhs == 0.0);
        CHECK(res.ratio == 0.0);
        CHECK_FALSE(res.violation);
    }
    SECTION("smooth numerical reference has a small ratio") {
        SolveConfig cfg;
        cfg.flux = flux;
        cfg.grid = g;
        cfg.init = rarefaction_init(wave);
        cfg.end_time = 5.0;
        cfg.snapshot_times = times;
        const auto traj = solve(cfg);
        GraphDescriptor w;
        w.constant = false;
        w.offset = 0.05;
        w.lip_bound_physical = std::sqrt(2.0) * wave.lipschitz_envelope(1.0);
        const auto res = variation_bound_ratio(traj, ref, flux, w, 1.0, 2.0, 3.0, {2.0, 0.0}, 1.0,
                                               1.45, vg);
        CHECK_FALSE(res.violation);
        CHECK(std::abs(res.ratio) < 0.5);
    }
    SECTION("geometry validation") {
        const auto traj = synthetic_trajectory(g, ref, times);
        GraphDescriptor w;
        w.constant = true;
        w.value = 0.2;
        CHECK_THROWS_AS(variation_bound_ratio(traj, ref, flux, w, 1.0, 2.5, 3.0, {2.0, 0.0}, 1.0,
                                              1.45, vg),
                        DomainError); // R > 2
        CHECK_THROWS_AS(variation_bound_ratio(traj, ref, flux, w, 1.0, 2.0, 1.5, {2.0, 0.0}, 1.0,
                                              1.45, vg),
                        GeometryError); // ball leaves the time range
    }
}
