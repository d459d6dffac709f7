#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tricorn/core.hpp"
#include "tricorn/orbits.hpp"
#include "tricorn/rng.hpp"

using tricorn::complex;
using Catch::Approx;

TEST_CASE("apply matches hand arithmetic", "[core]") {
    CHECK(tricorn::apply(complex{-2, 0}, complex{2, 0}) == complex{2, 0});

    // orbit of 0 at c = -2 is preperiodic: 0 -> -2 -> 2 -> 2
    complex z{0, 0};
    z = tricorn::apply(complex{-2, 0}, z);
    CHECK(z == complex{-2, 0});
    z = tricorn::apply(complex{-2, 0}, z);
    CHECK(z == complex{2, 0});
    z = tricorn::apply(complex{-2, 0}, z);
    CHECK(z == complex{2, 0});

    complex w = tricorn::apply(complex{0, 1}, complex{1, 1});
    CHECK(std::abs(w - complex{0, -1}) < 1e-15);

    CHECK_THROWS_AS(tricorn::apply(complex{0, 0}, complex{1.0 / 0.0, 0}), std::invalid_argument);
}

TEST_CASE("second iterate", "[core]") {
    CHECK(tricorn::apply_second(complex{-2, 0}, complex{0, 0}) == complex{2, 0});

    // c = 0: z -> z^4
    complex z{0.7, 0.4};
    complex z4 = z * z * z * z;
    CHECK(std::abs(tricorn::apply_second(complex{0, 0}, z) - z4) < 1e-15);

    CHECK(tricorn::apply_second(complex{0.25, 0}, complex{0.5, 0}) == complex{0.5, 0});
}

TEST_CASE("second iterate equals two applications within 8 ulps", "[core]") {
    tricorn::CounterRng rng{12345};
    for (int i = 0; i < 500; ++i) {
        complex c{4.0 * rng.uniform01(4 * i) - 2.0, 4.0 * rng.uniform01(4 * i + 1) - 2.0};
        complex z{4.0 * rng.uniform01(4 * i + 2) - 2.0, 4.0 * rng.uniform01(4 * i + 3) - 2.0};
        complex a = tricorn::apply_second(c, z);
        complex b = tricorn::apply(c, tricorn::apply(c, z));
        CHECK(std::abs(a.real() - b.real()) <= 8 * tricorn::ulp_of(std::max(std::abs(a.real()), 1e-30)));
        CHECK(std::abs(a.imag() - b.imag()) <= 8 * tricorn::ulp_of(std::max(std::abs(a.imag()), 1e-30)));
    }
}

TEST_CASE("escape_time examples", "[core]") {
    auto r = tricorn::escape_time(complex{1, 0}, complex{0, 0}, 100, 4.0);
    CHECK(r.escaped);
    CHECK(r.iterations == 3);  // orbit 0, 1, 2, 5
    CHECK(r.final_modulus == Approx(5.0));

    auto s = tricorn::escape_time(complex{-2, 0}, complex{0, 0}, 1000, 4.0);
    CHECK_FALSE(s.escaped);
    CHECK(s.iterations == 1000);
    CHECK(s.potential == 0.0);

    auto t = tricorn::escape_time(complex{0, 0}, complex{3, 0}, 100, 2.0);
    CHECK(t.escaped);
    CHECK(t.iterations == 0);
    CHECK(t.final_modulus == Approx(3.0));

    CHECK_THROWS_AS(tricorn::escape_time(complex{1, 0}, complex{0, 0}, 0, 4.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(tricorn::escape_time(complex{1, 0}, complex{0, 0}, 10, 1.0),
                    std::invalid_argument);
}

TEST_CASE("membership examples", "[core]") {
    CHECK(tricorn::tricorn_member(complex{0, 0}));
    CHECK_FALSE(tricorn::tricorn_member(complex{2, 0}));
    CHECK(tricorn::tricorn_member(complex{oracles::airplane_center(), 0.0}));
}

TEST_CASE("threefold symmetry of membership", "[core]") {
    const complex omega = oracles::omega();
    tricorn::CounterRng rng{987654321};
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        double ang = 2.0 * oracles::pi * rng.uniform01(2 * i);
        double rad = 2.0 * std::sqrt(rng.uniform01(2 * i + 1));
        complex c = rad * complex{std::cos(ang), std::sin(ang)};
        bool m0 = tricorn::tricorn_member(c, 200);
        CHECK(m0 == tricorn::tricorn_member(std::conj(c), 200));
        CHECK(m0 == tricorn::tricorn_member(omega * c, 200));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("escape monotonicity beyond the radius", "[core]") {
    tricorn::CounterRng rng{55};
    for (int i = 0; i < 200; ++i) {
        complex c{4.0 * rng.uniform01(3 * i) - 2.0, 4.0 * rng.uniform01(3 * i + 1) - 2.0};
        complex z{6.0 * rng.uniform01(3 * i + 2) - 3.0, 1.0};
        double radius = 2.0 + std::abs(c);
        tricorn::AntiQuadratic f{c};
        double prev = -1.0;
        for (int k = 0; k < 60; ++k) {
            double m = std::abs(z);
            if (prev > radius) CHECK(m > prev);
            if (m > 1e100) break;
            prev = m;
            z = f(z);
        }
    }
}

TEST_CASE("counter rng is reproducible and splittable", "[core]") {
    tricorn::CounterRng a{42}, b{42};
    CHECK(a.at(7) == b.at(7));
    CHECK(a.split(3).at(1) != a.split(4).at(1));
    double u = a.uniform01(123);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}
