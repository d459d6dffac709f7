#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tricorn/potential.hpp"
#include "tricorn/rng.hpp"

using tricorn::complex;
using Catch::Approx;

TEST_CASE("green potential closed forms", "[potential]") {
    auto g = tricorn::green_potential(complex{0, 0}, complex{3, 0});
    CHECK(g.escaped);
    CHECK(g.value == Approx(std::log(3.0)).epsilon(1e-12));

    auto h = tricorn::green_potential(complex{-2, 0}, complex{3, 0});
    CHECK(h.value == Approx(oracles::chebyshev_green(complex{3, 0})).epsilon(1e-12));
    CHECK(h.value == Approx(0.9624236501192069).epsilon(1e-12));
    CHECK(h.resid < 1e-12);

    auto on_k = tricorn::green_potential(complex{-2, 0}, complex{2, 0});
    CHECK_FALSE(on_k.escaped);
    CHECK(on_k.value == 0.0);
}

TEST_CASE("boettcher closed forms", "[potential]") {
    CHECK(std::abs(tricorn::boettcher(complex{0, 0}, complex{2, 1}) - complex{2, 1}) < 1e-12);

    complex phi = tricorn::boettcher(complex{-2, 0}, complex{3, 0});
    CHECK(std::abs(phi - oracles::chebyshev_boettcher(complex{3, 0})) < 1e-11);
    CHECK(phi.real() == Approx(2.618033988749895).epsilon(1e-12));

    CHECK_THROWS_AS(tricorn::boettcher(complex{-2, 0}, complex{0.3, 0.0}), tricorn::numerical_error);
}

TEST_CASE("boettcher functional equation on random samples", "[potential]") {
    tricorn::CounterRng rng{2024};
    int tested = 0;
    for (int i = 0; tested < 1000 && i < 6000; ++i) {
        complex c{4.0 * rng.uniform01(4 * i) - 2.0, 4.0 * rng.uniform01(4 * i + 1) - 2.0};
        complex z{8.0 * rng.uniform01(4 * i + 2) - 4.0, 8.0 * rng.uniform01(4 * i + 3) - 4.0};
        if (!tricorn::escape_time(c, z, 60, 2.0 + std::abs(c)).escaped) continue;
        try {
            complex a = tricorn::boettcher(c, tricorn::apply(c, z));
            complex b = std::conj(tricorn::boettcher(c, z));
            b *= b;
            REQUIRE(std::abs(a - b) < 1e-9 * std::abs(b));
            ++tested;
        } catch (const tricorn::numerical_error&) {
            // branch-ambiguous samples are excluded, not failures
        }
    }
    CHECK(tested == 1000);
}

TEST_CASE("green doubling and angle doubling", "[potential]") {
    tricorn::CounterRng rng{777};
    int tested = 0;
    for (int i = 0; tested < 1000 && i < 8000; ++i) {
        complex c{4.0 * rng.uniform01(4 * i) - 2.0, 4.0 * rng.uniform01(4 * i + 1) - 2.0};
        complex z{8.0 * rng.uniform01(4 * i + 2) - 4.0, 8.0 * rng.uniform01(4 * i + 3) - 4.0};
        auto g = tricorn::green_potential(c, z, 200);
        if (!g.escaped || g.value < 1e-3) continue;
        auto gf = tricorn::green_potential(c, tricorn::apply(c, z), 200);
        REQUIRE(std::abs(gf.value - 2.0 * g.value) < 1e-9);
        try {
            double a0 = std::arg(tricorn::boettcher(c, z));
            double a1 = std::arg(tricorn::boettcher(c, tricorn::apply(c, z)));
            double diff = std::remainder(a1 + 2.0 * a0, 2.0 * oracles::pi);
            REQUIRE(std::abs(diff) < 1e-8);
        } catch (const tricorn::numerical_error&) {
            continue;
        }
        ++tested;
    }
    CHECK(tested >= 900);
}
