#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tricorn/parabolic.hpp"

using tricorn::complex;
using tricorn::FatouChart;
using Catch::Approx;

TEST_CASE("deltoid parametrization", "[parabolic]") {
    auto p0 = tricorn::deltoid_parabolic(0.0);
    CHECK(std::abs(p0.c - complex{0.25, 0}) < 1e-15);
    CHECK(std::abs(p0.x - complex{0.5, 0}) < 1e-15);

    auto pw = tricorn::deltoid_parabolic(2.0 * oracles::pi / 3.0);
    CHECK(std::abs(pw.c - oracles::omega() / 4.0) < 1e-14);
    CHECK(std::abs(pw.x - oracles::omega() / 2.0) < 1e-14);

    auto pp = tricorn::deltoid_parabolic(oracles::pi);
    CHECK(std::abs(pp.c - complex{-0.75, 0}) < 1e-14);
    CHECK(std::abs(pp.x - complex{-0.5, 0}) < 1e-14);
    CHECK(std::abs(pp.petal_coeff) < 1e-6);  // cusp

    for (int j = 0; j < 64; ++j) {
        double phi = 2.0 * oracles::pi * j / 64.0;
        auto pd = tricorn::deltoid_parabolic(phi);
        CHECK(std::abs(tricorn::apply(pd.c, pd.x) - pd.x) < 1e-12);
        CHECK(std::abs(tricorn::abs2(2.0 * pd.x) - 1.0) < 1e-12);
    }
}

TEST_CASE("attracting chart at c=1/4", "[parabolic]") {
    auto pp = tricorn::deltoid_parabolic(0.0);
    auto ch = tricorn::make_fatou_chart(pp, FatouChart::Kind::attracting);
    CHECK(std::abs(ch.residual_re_c) < 1e-6);

    // critical Ecalle height vanishes
    CHECK(std::abs(tricorn::ecalle_height(ch, pp.c)) < 1e-6);
    // real pin at the critical value
    CHECK(std::abs(tricorn::fatou_eval(ch, pp.c).real()) < 1e-9);

    // Abel equation, double-step Abel equation, height parity
    double worst = 0.0, worst2 = 0.0, worst_par = 0.0;
    for (double uu : {12.0, 25.0, 60.0, 150.0}) {
        for (double vv : {0.0, 0.5, -0.8, 2.0}) {
            complex z = ch.petal.x + ch.petal.d_of(complex{uu, vv});
            complex a = tricorn::fatou_eval(ch, tricorn::apply(pp.c, z));
            complex b = std::conj(tricorn::fatou_eval(ch, z)) + 0.5;
            worst = std::max(worst, std::abs(a - b));
            complex a2 = tricorn::fatou_eval(ch, tricorn::apply_second(pp.c, z));
            worst2 = std::max(worst2, std::abs(a2 - tricorn::fatou_eval(ch, z) - 1.0));
            worst_par = std::max(worst_par, std::abs(tricorn::ecalle_height(ch, tricorn::apply(pp.c, z)) +
                                                     tricorn::ecalle_height(ch, z)));
        }
    }
    CHECK(worst < 1e-6);
    CHECK(worst2 < 1e-6);
    CHECK(worst_par < 1e-6);
}

TEST_CASE("heights are normalization independent", "[parabolic]") {
    auto pp = tricorn::deltoid_parabolic(0.0);
    auto ch = tricorn::make_fatou_chart(pp, FatouChart::Kind::attracting);
    auto shifted = ch;
    shifted.normalization_anchor = ch.petal.x + ch.petal.d_of(complex{30.0, 1.0});
    shifted.re_shift = -(tricorn::detail::raw_coordinate(shifted, shifted.normalization_anchor)
                             .value.real());
    complex z = ch.petal.x + ch.petal.d_of(complex{20.0, 0.7});
    CHECK(std::abs(tricorn::ecalle_height(ch, z) - tricorn::ecalle_height(shifted, z)) < 1e-8);
    // the real parts differ by a constant
    complex z2 = ch.petal.x + ch.petal.d_of(complex{33.0, -0.4});
    double d1 = tricorn::fatou_eval(ch, z).real() - tricorn::fatou_eval(shifted, z).real();
    double d2 = tricorn::fatou_eval(ch, z2).real() - tricorn::fatou_eval(shifted, z2).real();
    CHECK(d1 == Approx(d2).margin(1e-8));
}

TEST_CASE("critical Ecalle height at omega/4 and real arc points", "[parabolic]") {
    auto pw = tricorn::deltoid_parabolic(2.0 * oracles::pi / 3.0);
    CHECK(std::abs(tricorn::critical_ecalle_height(pw)) < 1e-6);
    CHECK(std::abs(tricorn::critical_ecalle_height(tricorn::deltoid_parabolic(0.0))) < 1e-6);
}

TEST_CASE("repelling chart and Psi at c=1/4", "[parabolic]") {
    auto pp = tricorn::deltoid_parabolic(0.0);
    auto ch = tricorn::make_fatou_chart(pp, FatouChart::Kind::repelling);

    // Psi on the real axis stays real (the 0-ray)
    for (double x = -3.0; x < 3.0; x += 0.37)
        CHECK(std::abs(tricorn::repelling_fatou_inverse(ch, complex{x, 0}).imag()) < 1e-8);

    // functional identity f(Psi(v)) = Psi(conj(v) + 1/2)
    double worst = 0.0;
    for (double re : {0.0, 0.25, 0.5, 0.75})
        for (double im : {-0.3, 0.0, 0.4}) {
            complex w{re, im};
            complex a = tricorn::apply(pp.c, tricorn::repelling_fatou_inverse(ch, w));
            complex b = tricorn::repelling_fatou_inverse(ch, std::conj(w) + 0.5);
            worst = std::max(worst, std::abs(a - b));
        }
    CHECK(worst < 1e-6);

    // asymptote: Psi(w) -> x monotonically along a horizontal line deep in the petal
    double prev = 1e300;
    for (double re = -40.0; re > -44.0; re -= 1.0) {
        double d = std::abs(tricorn::repelling_fatou_inverse(ch, complex{re, 0.1}) - pp.x);
        CHECK(d < prev + 1e-8);
        prev = d;
    }

    // repelling Abel residual
    double worst_abel = 0.0;
    for (double uu : {-12.0, -30.0, -80.0})
        for (double vv : {0.0, 0.7, -1.1}) {
            complex z = ch.petal.x + ch.petal.d_of(complex{uu, vv});
            complex a = tricorn::fatou_eval(ch, tricorn::apply(pp.c, z));
            complex b = std::conj(tricorn::fatou_eval(ch, z)) + 0.5;
            worst_abel = std::max(worst_abel, std::abs(a - b));
        }
    CHECK(worst_abel < 1e-6);
}

TEST_CASE("accessibility at the period-1 co-root point", "[parabolic]") {
    auto pw = tricorn::deltoid_parabolic(2.0 * oracles::pi / 3.0);
    auto rep = tricorn::accessibility_test(pw, 0.05);
    CHECK(rep.accessible_evidence);
    CHECK(rep.escape_fraction == 1.0);
    CHECK(rep.undetermined == 0);
    CHECK(std::abs(rep.e_crit) < 1e-6);
}

TEST_CASE("high-cylinder samples hit the filled Julia set", "[parabolic]") {
    // far above the critical height the cylinder enters the parabolic basin,
    // so Psi eventually maps into K and the sample does not escape
    auto pp = tricorn::deltoid_parabolic(0.0);
    auto ch = tricorn::make_fatou_chart(pp, tricorn::FatouChart::Kind::repelling);
    bool found_bounded = false;
    double radius = 2.0 + std::abs(pp.c);
    for (double im = 0.5; im <= 6.0 && !found_bounded; im += 0.25) {
        for (double re : {0.1, 0.45, 0.8}) {
            complex z = tricorn::repelling_fatou_inverse(ch, complex{re, im});
            if (!tricorn::escape_time(pp.c, z, 50000, radius).escaped) {
                found_bounded = true;
                break;
            }
        }
    }
    CHECK(found_bounded);
}

TEST_CASE("find_parabolic_on_arc period 1 lands on the omega co-root", "[parabolic]") {
    auto pp = tricorn::find_parabolic_on_arc(1, complex{0, 0}, 0.0);
    CHECK(pp.period == 1);
    CHECK(std::abs(pp.c - oracles::omega() / 4.0) < 1e-3);
    CHECK(std::abs(tricorn::abs2(2.0 * pp.x) - 1.0) < 1e-10);
    CHECK(std::abs(tricorn::critical_ecalle_height(pp)) < 1e-6);

    // conjugation symmetry: the conjugate parameter carries the opposite height
    auto ph = tricorn::find_parabolic_on_arc(1, complex{0, 0}, 0.02);
    tricorn::ParabolicPoint conj_pp{std::conj(ph.c), 1, std::conj(ph.x), std::conj(ph.petal_coeff)};
    CHECK(tricorn::critical_ecalle_height(conj_pp) == Approx(-0.02).margin(2e-6));
}

TEST_CASE("find_parabolic_on_arc period 3 co-root point", "[parabolic]") {
    double c0 = oracles::airplane_center();
    auto pp = tricorn::find_parabolic_on_arc(3, complex{c0, 0}, 0.0);
    CHECK(pp.period == 3);
    CHECK(pp.c.imag() > 1e-4);  // off the real axis: genuinely co-root
    CHECK(pp.c.real() > -1.79);
    CHECK(pp.c.real() < -1.74);
    // multiplier-1 residual through the cycle product
    complex z = pp.x;
    double lam = 1.0;
    for (int j = 0; j < 3; ++j) {
        lam *= 4.0 * tricorn::abs2(z);
        z = tricorn::apply(pp.c, z);
    }
    CHECK(std::abs(lam - 1.0) < 1e-10);
    CHECK(std::abs(tricorn::apply_iter(pp.c, pp.x, 3) - pp.x) < 1e-10);
    CHECK(std::abs(tricorn::critical_ecalle_height(pp)) < 1e-6);

    auto rep = tricorn::accessibility_test(pp, 0.05);
    CHECK(rep.accessible_evidence);
}

TEST_CASE("lifted phase is real and consistent", "[parabolic]") {
    auto pp = tricorn::deltoid_parabolic(0.0);
    auto attr = tricorn::make_fatou_chart(pp, FatouChart::Kind::attracting);
    auto rep = tricorn::make_fatou_chart(pp, FatouChart::Kind::repelling);

    complex c_pert = pp.c + 1e-10 * complex{std::cos(0.3), std::sin(0.3)};
    complex z = attr.petal.x + attr.petal.d_of(complex{25.0, 0.4});

    complex C = tricorn::lifted_phase(c_pert, z, pp, attr, rep);
    CHECK(std::abs(C.imag()) < 1e-4);

    complex C2 = tricorn::lifted_phase(c_pert, tricorn::apply_second(c_pert, z), pp, attr, rep);
    CHECK(std::abs(C2 - C) < 1e-4);  // the lifted phase is a constant of the transit

    // heights transported through the gate: E_rep(transit point) = E_attr(z)
    const auto& pd = attr.petal;
    const double enter = tricorn::detail::entry_threshold(pd);
    complex zt = z;
    long n = 0;
    for (long j = 0; j < 3000000; ++j) {
        complex d = zt - pd.x;
        if (std::abs(d) < 0.5 * pd.rT) {
            double re_u = pd.u_of(d).real();
            if (re_u < -enter && re_u > -std::max(4.0 * enter, enter + 50.0)) break;
        }
        zt = tricorn::apply_second(c_pert, zt);
        ++n;
    }
    double e_rep = tricorn::ecalle_height(rep, zt);
    double e_attr = tricorn::ecalle_height(attr, z);
    CHECK(std::abs(e_rep - e_attr) < 1e-4);
}
