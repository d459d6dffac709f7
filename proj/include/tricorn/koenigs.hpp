#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "tricorn/core.hpp"
#include "tricorn/orbits.hpp"

namespace tricorn {

namespace detail {

inline constexpr int kKoenigsOrder = 12;   // series order for seed/inverse seed
inline constexpr int kKoenigsMaxPull = 400;

template <std::size_t N>
inline void series_mul(const std::array<complex, N>& a, const std::array<complex, N>& b,
                       std::array<complex, N>& out) {
    out.fill({});
    for (std::size_t i = 0; i < N; ++i) {
        if (a[i] == complex{}) continue;
        for (std::size_t j = 0; i + j < N; ++j) out[i + j] += a[i] * b[j];
    }
}

}  // namespace detail

// Koenigs linearizer at the repelling beta fixed point of F = f_c^2,
// normalized kappa(beta) = 0, kappa(0) = 1.  Evaluation runs in offset
// coordinates delta = z - beta via the exact quartic Taylor of F at beta, so
// no cancellation occurs near the fixed point.
struct KoenigsChart {
    complex c;
    complex beta;
    complex lambda;    // F'(beta), |lambda| > 1
    complex a_c;       // kappa'(0), nonzero
    double lin_radius; // seed-series trust radius in |delta|

    // exact Taylor of F(beta + delta) - beta: g1 d + g2 d^2 + g3 d^3 + g4 d^4
    std::array<complex, 5> taylor{};
    // kappa(beta + d) = sum k_j d^j and its reversion psi(v) = sum p_j v^j
    std::array<complex, detail::kKoenigsOrder + 1> kappa_series{};
    std::array<complex, detail::kKoenigsOrder + 1> psi_series{};
    complex u0_raw;    // kappa_raw(0); the chart rescales by 1/u0_raw
};

namespace detail {

inline complex chart_taylor_eval(const KoenigsChart& ch, complex d) {
    complex v{};
    for (int i = 4; i >= 1; --i) v = v * d + ch.taylor[static_cast<std::size_t>(i)];
    return v * d;
}

inline complex chart_taylor_deriv(const KoenigsChart& ch, complex d) {
    complex v{};
    for (int i = 4; i >= 1; --i) v = v * d + static_cast<double>(i) * ch.taylor[static_cast<std::size_t>(i)];
    return v;
}

// One inverse step of the offset map: solve F_delta(d') = d for the branch
// fixing 0, Newton from d / lambda.  The result must contract toward beta.
inline complex chart_pull(const KoenigsChart& ch, complex d) {
    complex x = d / ch.lambda;
    for (int it = 0; it < 80; ++it) {
        complex step = (chart_taylor_eval(ch, x) - d) / chart_taylor_deriv(ch, x);
        x -= step;
        if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
    if (!is_finite(x) || std::abs(x) > 0.78 * std::abs(d))
        throw numerical_error("koenigs: inverse branch lost (point outside the chart's reach)");
    return x;
}

struct RawKoenigs {
    complex value;
    complex deriv;  // d(kappa_raw)/dz
};

inline RawKoenigs kappa_raw(const KoenigsChart& ch, complex z) {
    complex d = z - ch.beta;
    complex dprod{1.0, 0.0};
    int m = 0;
    while (std::abs(d) > ch.lin_radius) {
        complex d2 = chart_pull(ch, d);
        dprod *= chart_taylor_deriv(ch, d2);
        d = d2;
        if (++m > kKoenigsMaxPull) throw numerical_error("koenigs: inverse iteration stalled");
    }
    complex val{}, dv{};
    for (int j = kKoenigsOrder; j >= 1; --j) {
        val = val * d + ch.kappa_series[static_cast<std::size_t>(j)];
        dv = dv * d + static_cast<double>(j) * ch.kappa_series[static_cast<std::size_t>(j)];
    }
    val *= d;
    complex lam_m{1.0, 0.0};
    for (int j = 0; j < m; ++j) lam_m *= ch.lambda;
    return {val * lam_m, lam_m * dv / dprod};
}

}  // namespace detail

inline KoenigsChart build_chart(complex c) {
    require_finite(c, "build_chart: c");
    KoenigsChart ch;
    ch.c = c;
    ch.beta = beta_fixed_point(c);
    complex w0 = ch.beta * ch.beta + std::conj(c);
    ch.lambda = 4.0 * ch.beta * w0;
    if (std::abs(ch.lambda) <= 1.0) throw numerical_error("build_chart: beta is not repelling");

    ch.taylor = {complex{}, ch.lambda, 2.0 * w0 + 4.0 * ch.beta * ch.beta, 4.0 * ch.beta,
                 complex{1.0, 0.0}};
    ch.lin_radius = 1e-3 * std::max(1.0, std::abs(ch.beta));

    // kappa series from kappa(G(d)) = lambda * kappa(d), then reversion.
    constexpr int J = detail::kKoenigsOrder;
    std::array<complex, J + 1> G{};
    for (int i = 1; i <= 4; ++i) G[static_cast<std::size_t>(i)] = ch.taylor[static_cast<std::size_t>(i)];
    std::vector<std::array<complex, J + 1>> Gpow(static_cast<std::size_t>(J) + 1);
    Gpow[0].fill({});
    Gpow[0][0] = {1.0, 0.0};
    Gpow[1] = G;
    for (int i = 2; i <= J; ++i) detail::series_mul(Gpow[static_cast<std::size_t>(i) - 1], G, Gpow[static_cast<std::size_t>(i)]);

    auto& k = ch.kappa_series;
    k.fill({});
    k[1] = {1.0, 0.0};
    complex lam_pow = ch.lambda;
    for (int j = 2; j <= J; ++j) {
        lam_pow *= ch.lambda;  // lambda^j
        complex s{};
        for (int i = 1; i < j; ++i) s += k[static_cast<std::size_t>(i)] * Gpow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        k[static_cast<std::size_t>(j)] = s / (ch.lambda - lam_pow);
    }

    std::vector<std::array<complex, J + 1>> kpow(static_cast<std::size_t>(J) + 1);
    kpow[0].fill({});
    kpow[0][0] = {1.0, 0.0};
    kpow[1] = k;
    for (int i = 2; i <= J; ++i) detail::series_mul(kpow[static_cast<std::size_t>(i) - 1], k, kpow[static_cast<std::size_t>(i)]);
    auto& p = ch.psi_series;
    p.fill({});
    p[1] = {1.0, 0.0};
    for (int j = 2; j <= J; ++j) {
        complex s{};
        for (int i = 1; i < j; ++i) s += p[static_cast<std::size_t>(i)] * kpow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        p[static_cast<std::size_t>(j)] = -s;
    }

    // Normalization kappa(0) = 1: continue the branch from beta to 0 by
    // inverse iteration and rescale.
    auto raw0 = detail::kappa_raw(ch, complex{});
    if (raw0.value == complex{}) throw numerical_error("build_chart: kappa(0) vanished");
    ch.u0_raw = raw0.value;
    ch.a_c = raw0.deriv / ch.u0_raw;
    if (ch.a_c == complex{}) throw numerical_error("build_chart: a_c vanished");
    return ch;
}

// kappa_c(z), normalized kappa(beta) = 0, kappa(0) = 1.
inline complex koenigs_eval(const KoenigsChart& ch, complex z) {
    require_finite(z, "koenigs_eval: z");
    return detail::kappa_raw(ch, z).value / ch.u0_raw;
}

// Poincare map Psi_c = kappa_c^{-1}: entire, evaluated as F^k of the seed
// series at lambda^{-k} u.  k is capped at 60 iterate doublings.
inline complex poincare_eval(const KoenigsChart& ch, complex u) {
    require_finite(u, "poincare_eval: u");
    complex v = u * ch.u0_raw;
    int k = 0;
    while (std::abs(v) > ch.lin_radius) {
        v /= ch.lambda;
        if (++k > 60) throw numerical_error("poincare_eval: iterate count overflow");
    }
    complex d{};
    for (int j = detail::kKoenigsOrder; j >= 1; --j) d = d * v + ch.psi_series[static_cast<std::size_t>(j)];
    d *= v;
    complex z = ch.beta + d;
    for (int j = 0; j < k; ++j) z = apply_second(ch.c, z);
    return z;
}

// Coefficient A_i(c) of kappa_c(f_c^3(z)) = sum A_i(c) conj(z)^i, extracted
// as the least-squares/DFT fit on a 64-point circle of radius r_fit.
inline complex coefficient_A(complex c, int i, double r_fit = 1e-3) {
    if (i < 0 || i > 4) throw std::invalid_argument("coefficient_A: i in 0..4");
    KoenigsChart ch = build_chart(c);
    constexpr int M = 64;
    constexpr double two_pi = 2.0 * 3.141592653589793238462643;
    complex acc{};
    for (int j = 0; j < M; ++j) {
        double ang = two_pi * j / M;
        complex z = r_fit * complex{std::cos(ang), std::sin(ang)};
        complex z3 = apply_iter(c, z, 3);
        complex w = koenigs_eval(ch, z3);
        // conj(z_j)^i has angle -i*ang; project it out
        acc += w * complex{std::cos(i * ang), std::sin(i * ang)};
    }
    return acc / (static_cast<double>(M) * std::pow(r_fit, i));
}

// b0 = dA0/dc and b0* = dA0/dconj(c) at c = -2, by central Wirtinger
// differences with two Richardson levels (h, h/2, h/4).  The default step is
// noise-limited: the truncation orders are gone after Richardson, so a wider
// stencil sharpens the constants.
inline std::pair<complex, complex> estimate_B_constants(double h = 4e-3) {
    auto wirtinger = [](double hh) {
        complex ap = coefficient_A(complex{-2.0 + hh, 0.0}, 0);
        complex am = coefficient_A(complex{-2.0 - hh, 0.0}, 0);
        complex bp = coefficient_A(complex{-2.0, hh}, 0);
        complex bm = coefficient_A(complex{-2.0, -hh}, 0);
        complex dx = (ap - am) / (2.0 * hh);
        complex dy = (bp - bm) / (2.0 * hh);
        complex b = (dx - complex{0.0, 1.0} * dy) / 2.0;
        complex bs = (dx + complex{0.0, 1.0} * dy) / 2.0;
        return std::pair<complex, complex>{b, bs};
    };
    auto d1 = wirtinger(h);
    auto d2 = wirtinger(h / 2);
    auto d3 = wirtinger(h / 4);
    auto rich = [](complex a, complex b) { return (4.0 * b - a) / 3.0; };
    auto rich2 = [](complex a, complex b) { return (16.0 * b - a) / 15.0; };
    complex b0 = rich2(rich(d1.first, d2.first), rich(d2.first, d3.first));
    complex b0s = rich2(rich(d1.second, d2.second), rich(d2.second, d3.second));
    return {b0, b0s};
}

}  // namespace tricorn
