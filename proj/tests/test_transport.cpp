#include <cmath>
#include <random>

#include <doctest.h>

#include "huescan/quantize.hpp"
#include "huescan/transport.hpp"
#include "oracles.hpp"

using namespace huescan;

namespace {

Palette single(const Hsv& c) {
    Palette p;
    p.entries.push_back({c, 1.0});
    p.effective_k = 1;
    return p;
}

Palette random_palette(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> uh(0.0, 360.0);
    std::uniform_real_distribution<double> u01(0.05, 1.0);
    Palette p;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        const double w = u01(rng);
        p.entries.push_back({Hsv{uh(rng), u01(rng), u01(rng)}, w});
        total += w;
    }
    for (auto& e : p.entries) {
        e.weight /= total;
    }
    p.effective_k = k;
    return p;
}

} // namespace

TEST_SUITE("transport") {

TEST_CASE("identity: distance to self is zero") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Palette p = random_palette(rng, 1 + static_cast<int>(rng() % 4));
        CHECK(palette_distance(p, p) == 0.0);
    }
}

TEST_CASE("red vs blue single-entry palettes: chord sqrt(3)") {
    const double d = palette_distance(single({0.0, 1.0, 1.0}), single({240.0, 1.0, 1.0}));
    CHECK(d == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("half-red-half-blue vs all-red: 0.5 * sqrt(3), and oracle agrees") {
    Palette mix;
    mix.entries.push_back({{0.0, 1.0, 1.0}, 0.5});
    mix.entries.push_back({{240.0, 1.0, 1.0}, 0.5});
    mix.effective_k = 2;
    const Palette red = single({0.0, 1.0, 1.0});

    const double d = palette_distance(mix, red);
    CHECK(d == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-9));

    // Independent check on the same 2x1 instance.
    const CylPoint r = hsv_to_cyl({0.0, 1.0, 1.0});
    const CylPoint b = hsv_to_cyl({240.0, 1.0, 1.0});
    const double oracle =
        oracles::transport_cost({0.5, 0.5}, {1.0}, {distance(r, r), distance(b, r)});
    CHECK(d == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("solver matches basis-enumeration oracle on random instances") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % 4);
        std::vector<double> supply(m);
        std::vector<double> demand(n);
        std::vector<double> cost(static_cast<std::size_t>(m) * n);
        double ssum = 0.0;
        double dsum = 0.0;
        for (double& s : supply) {
            s = u(rng);
            ssum += s;
        }
        for (double& d : demand) {
            d = u(rng);
            dsum += d;
        }
        for (double& s : supply) {
            s /= ssum;
        }
        for (double& d : demand) {
            d /= dsum;
        }
        for (double& c : cost) {
            c = u(rng) * 2.0;
        }
        const double got = solve_transport(supply, demand, cost);
        const double want = oracles::transport_cost(supply, demand, cost);
        INFO("trial ", trial, " m=", m, " n=", n);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("symmetry of palette_distance") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 30; ++i) {
        const Palette a = random_palette(rng, 1 + static_cast<int>(rng() % 5));
        const Palette b = random_palette(rng, 1 + static_cast<int>(rng() % 5));
        CHECK(palette_distance(a, b) == doctest::Approx(palette_distance(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("triangle inequality over random palette triples") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 100; ++i) {
        const Palette a = random_palette(rng, 1 + static_cast<int>(rng() % 4));
        const Palette b = random_palette(rng, 1 + static_cast<int>(rng() % 4));
        const Palette c = random_palette(rng, 1 + static_cast<int>(rng() % 4));
        const double ab = palette_distance(a, b);
        const double bc = palette_distance(b, c);
        const double ac = palette_distance(a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("positivity for distinct palettes") {
    Palette a = single({0.0, 1.0, 1.0});
    Palette b = single({0.0, 1.0, 0.9});
    CHECK(palette_distance(a, b) > 0.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS(solve_transport({0.5, 0.5}, {1.0}, {1.0})); // cost shape mismatch
    CHECK_THROWS(solve_transport({1.0}, {1.0}, {-0.5}));     // negative cost
    CHECK_THROWS(solve_transport({}, {1.0}, {}));            // empty side
    CHECK_THROWS(solve_transport({0.0}, {1.0}, {1.0}));      // zero total mass
}

} // TEST_SUITE
