#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tricorn/koenigs.hpp"
#include "tricorn/rng.hpp"
#include "tricorn/scaling.hpp"

using tricorn::complex;
using Catch::Approx;

TEST_CASE("chart at -2 reproduces the Chebyshev data", "[koenigs]") {
    auto ch = tricorn::build_chart(complex{-2, 0});
    CHECK(std::abs(ch.beta - complex{2, 0}) < 1e-13);
    CHECK(std::abs(ch.lambda - complex{16, 0}) < 1e-12);
    CHECK(std::abs(ch.a_c - complex{-2.0 / oracles::pi, 0}) < 1e-12);

    CHECK(std::abs(tricorn::koenigs_eval(ch, complex{0, 0}) - complex{1, 0}) < 1e-14);
    CHECK(std::abs(tricorn::koenigs_eval(ch, complex{1, 0}) - complex{4.0 / 9.0, 0}) < 1e-12);
    CHECK(std::abs(tricorn::koenigs_eval(ch, complex{-1, 0}) - complex{16.0 / 9.0, 0}) < 1e-12);
    CHECK(std::abs(tricorn::koenigs_eval(ch, complex{2, 0})) < 1e-13);
}

TEST_CASE("poincare closed form at -2", "[koenigs]") {
    auto ch = tricorn::build_chart(complex{-2, 0});
    CHECK(std::abs(tricorn::poincare_eval(ch, complex{4, 0}) - complex{-2, 0}) < 1e-10);
    CHECK(std::abs(tricorn::poincare_eval(ch, complex{1, 0})) < 1e-12);
    CHECK(std::abs(tricorn::poincare_eval(ch, complex{0, 0}) - complex{2, 0}) < 1e-13);

    double sup = 0.0;
    for (double w = 0.0; w <= 4.0 + 1e-12; w += 0.01) {
        complex z = tricorn::poincare_eval(ch, complex{w, 0});
        sup = std::max(sup, std::abs(z - oracles::chebyshev_poincare(complex{w, 0})));
    }
    CHECK(sup < 1e-8);
}

TEST_CASE("chart at c_1 has lambda near 16", "[koenigs]") {
    auto rec = tricorn::solve_c_n(1);
    auto ch = tricorn::build_chart(complex{rec.c_n, 0});
    CHECK(std::abs(ch.lambda - complex{16, 0}) < 0.5);
}

TEST_CASE("linearization equation and inverse consistency", "[koenigs]") {
    for (complex c : {complex{-2, 0}, complex{-1.99, 0.001}}) {
        auto ch = tricorn::build_chart(c);
        tricorn::CounterRng rng{99};
        int tested = 0;
        for (int i = 0; tested < 1000 && i < 4000; ++i) {
            // the functional equation needs kappa(z) <= 1/4 so that one more
            // doubling stays on the interval branch: sample near beta
            double x = 1.45 + 0.54 * rng.uniform01(2 * i);
            double y = 2e-3 * (rng.uniform01(2 * i + 1) - 0.5);
            complex z{x, y};
            complex kz, kfz;
            try {
                kz = tricorn::koenigs_eval(ch, z);
                kfz = tricorn::koenigs_eval(ch, tricorn::apply_second(c, z));
            } catch (const tricorn::numerical_error&) {
                continue;
            }
            complex lk = ch.lambda * kz;
            REQUIRE(std::abs(kfz - lk) < 1e-9 * (1.0 + std::abs(lk)));
            complex back = tricorn::poincare_eval(ch, kz);
            REQUIRE(std::abs(back - z) < 1e-8);
            ++tested;
        }
        CHECK(tested == 1000);

        // inverse consistency on the wider interval branch
        for (int i = 0; i < 400; ++i) {
            double x = -1.6 + 3.5 * rng.uniform01(9000 + i);
            complex z{x, 0.0};
            complex back = tricorn::poincare_eval(ch, tricorn::koenigs_eval(ch, z));
            REQUIRE(std::abs(back - z) < 1e-8);
        }
    }
}

TEST_CASE("coefficients A_i", "[koenigs]") {
    complex a0 = tricorn::coefficient_A(complex{-2, 0}, 0);
    CHECK(std::abs(a0) < 1e-10);

    complex a2 = tricorn::coefficient_A(complex{-2, 0}, 2);
    double expect = 64.0 / (oracles::pi * oracles::pi);
    CHECK(std::abs(a2 - complex{expect, 0}) < 1e-6 * expect);

    for (int n = 0; n <= 5; ++n) {
        auto rec = tricorn::solve_c_n(n);
        complex a0n = tricorn::coefficient_A(complex{rec.c_n, 0}, 0);
        double lam_pow = 1.0;
        for (int j = 0; j < n; ++j) lam_pow *= rec.lambda_n;
        CHECK(std::abs(a0n - complex{1.0 / lam_pow, 0}) < 1e-6 / lam_pow);
    }
}

TEST_CASE("B constants of the parameter expansion", "[koenigs]") {
    auto [b0, b0s] = tricorn::estimate_B_constants();
    double pi2 = oracles::pi * oracles::pi;
    double b0_expect = 896.0 / (15.0 * pi2);
    double b0s_expect = -256.0 / (15.0 * pi2);
    CHECK(std::abs(b0 - complex{b0_expect, 0}) < 1e-4 * std::abs(b0_expect));
    CHECK(std::abs(b0s - complex{b0s_expect, 0}) < 1e-4 * std::abs(b0s_expect));
    CHECK(std::abs(b0.imag()) < 1e-4);
    CHECK(std::abs(b0s.imag()) < 1e-4);
    // derived invariant |b0|^2 - |b0*|^2 ~ 33.64
    double lim = tricorn::abs2(b0) - tricorn::abs2(b0s);
    CHECK(lim == Approx(33.64).margin(0.01));
}
