#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sclab/solver.hpp"
#include "sclab/waves.hpp"
#include "oracles.hpp"

using namespace sclab;

namespace {
RarefactionWave unit_burgers_wave() {
    return RarefactionWave(burgers_flux(1, {-0.5, 1.5}), 0, 0.0, 1.0, 1.0, 0.0);
}
} // namespace

TEST_CASE("rarefaction evaluate") {
    const auto w = unit_burgers_wave();
    CHECK(w.evaluate(1.0, {1.0, 0.0}) == Catch::Approx(0.5).margin(1e-11)); // xi = 1/2 in the fan
    CHECK(w.evaluate(0.0, {-5.0, 0.0}) == 0.0);
    CHECK(w.evaluate(3.0, {10.0, 0.0}) == 1.0);
    CHECK_THROWS_AS(w.evaluate(-0.5, {0.0, 0.0}), DomainError);

    // matches the closed-form fan at random points
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> T(0.0, 8.0), X(-4.0, 12.0);
    for (int i = 0; i < 500; ++i) {
        const double t = T(gen), x = X(gen);
        CHECK(w.evaluate(t, {x, 0.0}) ==
              Catch::Approx(oracle::burgers_fan(t, x, 0.0, 1.0, 1.0, 0.0)).margin(1e-10));
    }
}

TEST_CASE("rarefaction construction errors") {
    const auto flux = burgers_flux(1, {-0.5, 1.5});
    CHECK_THROWS_AS(RarefactionWave(flux, 0, 1.0, 0.0, 1.0, 0.0), ConfigError); // uL >= uR
    CHECK_THROWS_AS(RarefactionWave(flux, 0, 0.0, 1.0, 0.0, 0.0), ConfigError); // t0 = 0
    CHECK_THROWS_AS(RarefactionWave(flux, 1, 0.0, 1.0, 1.0, 0.0), ConfigError); // axis out of range
    // nonconvex restriction: a(v) = v^2 is not increasing through v = 0
    const auto m2 = burgers_flux(2, {-1.0, 1.0});
    CHECK_THROWS_AS(RarefactionWave(m2, 1, -0.5, 0.5, 1.0, 0.0), ConfigError);
    // but fine on [0, 1] where the restriction is strictly convex
    CHECK_NOTHROW(RarefactionWave(burgers_flux(2, {0.0, 1.0}), 1, 0.1, 0.9, 1.0, 0.0));
}

TEST_CASE("lipschitz envelope and gamma bar") {
    const auto w = unit_burgers_wave();
    CHECK(w.lipschitz_envelope(1.0) == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(w.lipschitz_envelope(0.0) == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(w.gamma_bar() == Catch::Approx(1.0).epsilon(1e-9));
    // t * envelope is nondecreasing and bounded by gamma bar
    double prev = 0.0;
    for (double t = 0.0; t <= 50.0; t += 0.5) {
        const double te = t * w.lipschitz_envelope(t);
        CHECK(te >= prev - 1e-12);
        CHECK(te <= w.gamma_bar() + 1e-12);
        prev = te;
    }
}

TEST_CASE("fan satisfies the conservation law pointwise") {
    const auto w = unit_burgers_wave();
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> T(0.5, 6.0), XI(0.05, 0.95);
    const double h = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        const double t = T(gen);
        const double x = XI(gen) * (t + 1.0); // inside the fan
        const double ut = (w.evaluate(t + h, {x, 0.0}) - w.evaluate(t - h, {x, 0.0})) / (2 * h);
        const double ux = (w.evaluate(t, {x + h, 0.0}) - w.evaluate(t, {x - h, 0.0})) / (2 * h);
        const double u = w.evaluate(t, {x, 0.0});
        CHECK(std::abs(ut + u * ux) < 100 * h);
    }
}

TEST_CASE("2D wave is monotone along its axis and constant transversally") {
    const auto flux = burgers_flux(2, {0.0, 1.0});
    const RarefactionWave w(flux, 0, 0.1, 0.9, 1.0, 0.0);
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> X(-3.0, 3.0), T(0.0, 4.0);
    for (int i = 0; i < 300; ++i) {
        const double t = T(gen), x = X(gen), y1 = X(gen), y2 = X(gen);
        CHECK(w.evaluate(t, {x, y1}) == w.evaluate(t, {x, y2}));
        const double step = 0.05;
        CHECK(w.evaluate(t, {x + step, y1}) >= w.evaluate(t, {x, y1}) - 1e-12);
        const double u = w.evaluate(t, {x, y1});
        CHECK(u >= 0.1);
        CHECK(u <= 0.9);
    }
}

TEST_CASE("oleinik ratio") {
    const auto flux = burgers_flux(1, {-0.5, 1.5});
    const auto w = unit_burgers_wave();

    SECTION("exact fan sampled on a grid approaches t/(t+t0)") {
        std::vector<std::vector<double>> storage;
        storage.reserve(3);
        std::vector<OleinikSnapshot> snaps;
        const int n = 2048;
        const double dx = 20.0 / n;
        for (double t : {1.0, 2.0, 4.0}) {
            std::vector<double> u(n);
            for (int i = 0; i < n; ++i) u[i] = w.evaluate(t, {-5.0 + (i + 0.5) * dx, 0.0});
            storage.push_back(std::move(u));
            snaps.push_back({t, dx, &storage.back()});
        }
        const double ratio = oleinik_ratio(snaps, flux);
        CHECK(ratio == Catch::Approx(4.0 / 5.0).epsilon(0.02));
        CHECK(ratio < 1.0);
    }
    SECTION("constant state gives zero") {
        std::vector<double> u(64, 0.7);
        std::vector<OleinikSnapshot> snaps{{2.0, 0.1, &u}};
        CHECK(oleinik_ratio(snaps, flux) == 0.0);
    }
    SECTION("nonconvex flux is rejected") {
        std::vector<double> u(64, 0.0);
        std::vector<OleinikSnapshot> snaps{{1.0, 0.1, &u}};
        CHECK_THROWS_AS(oleinik_ratio(snaps, burgers_flux(2, {-1.0, 1.0})), ConfigError);
    }
}
