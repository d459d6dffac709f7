#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "tricorn/core.hpp"
#include "tricorn/detail/parallel.hpp"

namespace tricorn {

namespace detail {

// Dense Gaussian elimination with partial pivoting, for the small bordered
// systems and Abel-tail fits below.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0) throw numerical_error("solve_dense: singular system");
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[col * n + k], A[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double m = A[r * n + col] / A[col * n + col];
            if (m == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) A[r * n + k] -= m * A[col * n + k];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
        x[r] = s / A[r * n + r];
    }
    return x;
}

}  // namespace detail

struct ParabolicPoint {
    complex c;
    int period = 1;        // odd
    complex x;             // parabolic periodic point whose basin holds the critical value
    complex petal_coeff;   // quadratic coefficient a of f^{2p} at x
};

namespace detail {

inline constexpr int kPetalOrder = 16;

// Local model of the return map F = f^{2p} and the half map f^p at the
// parabolic point, as Taylor series in delta = z - x.  The constant and
// linear terms are idealized to the exact parabolic values (0 and 1, |h1|=1):
// the distance of the floating-point parameter from the true arc is below
// what double orbits can resolve anyway.
struct PetalData {
    complex c;
    int p = 1;
    complex x;
    double rT = 0.0;                                  // series trust radius
    std::array<complex, kPetalOrder + 1> full{};      // F(x+d) - x, holomorphic in d
    std::array<complex, kPetalOrder + 1> half{};      // f^p(x+d) - x, series in conj(d)
    complex a;                                        // full[2]
    complex sigma;                                    // 1 - full[3]/a^2

    complex eval_full(complex d) const {
        complex v{};
        for (int j = kPetalOrder; j >= 1; --j) v = v * d + full[static_cast<std::size_t>(j)];
        return v * d;
    }
    complex eval_full_deriv(complex d) const {
        complex v{};
        for (int j = kPetalOrder; j >= 1; --j)
            v = v * d + static_cast<double>(j) * full[static_cast<std::size_t>(j)];
        return v;
    }
    // branch of F^{-1} fixing 0; Newton seeded by the Abel shift u -> u - 1
    complex pull_full(complex d) const {
        complex u = -1.0 / (a * d);
        complex y = -1.0 / (a * (u - 1.0));
        for (int it = 0; it < 80; ++it) {
            complex step = (eval_full(y) - d) / eval_full_deriv(y);
            y -= step;
            if (std::abs(step) <= 1e-16 * std::abs(y)) break;
        }
        if (!is_finite(y)) throw numerical_error("petal: inverse step diverged");
        return y;
    }
    complex eval_half(complex d) const {
        complex dc = std::conj(d);
        complex v{};
        for (int j = kPetalOrder; j >= 1; --j) v = v * dc + half[static_cast<std::size_t>(j)];
        return v * dc;
    }

    complex u_of(complex d) const { return -1.0 / (a * d); }
    complex d_of(complex u) const { return -1.0 / (a * u); }
};

// Newton on (f^{2p})'(x) = 1.  The parabolic point is a well-conditioned
// simple root of F' - 1 even though F(x) = x itself is a double root.
inline complex parabolic_center(complex c, int p, complex seed) {
    auto Fprime = [&](complex z) {
        OrbitDerivative od{z};
        for (int j = 0; j < 2 * p; ++j) od.step(c);
        return od.deriv;
    };
    complex x = seed;
    for (int it = 0; it < 200; ++it) {
        double h = 1e-7;
        complex d = Fprime(x);
        complex g2 = (Fprime(x + h) - Fprime(x - h)) / (2.0 * h);
        if (g2 == complex{}) throw numerical_error("parabolic_center: F'' vanished (cusp?)");
        complex step = (d - 1.0) / g2;
        if (std::abs(step) > 1e-3) step *= 1e-3 / std::abs(step);
        x -= step;
        if (std::abs(step) < 3e-15) break;
    }
    if (std::abs(x - seed) > 0.02)
        throw numerical_error("parabolic_center: wandered off the seed cycle point");
    return x;
}

inline PetalData make_petal(complex c, int p, complex x_seed) {
    PetalData pd;
    pd.c = c;
    pd.p = p;
    pd.x = parabolic_center(c, p, x_seed);

    // keep the sample circle away from the other cycle points
    double gap = 1e9;
    complex z = pd.x;
    for (int j = 0; j < p - 1; ++j) {
        z = tricorn::apply(c, z);
        gap = std::min(gap, std::abs(z - pd.x));
    }
    double rT = std::min(0.04, 0.15 * gap);

    constexpr int M = 256;
    constexpr double two_pi = 2.0 * 3.141592653589793238462643;
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::array<complex, M> fullv{}, halfv{};
        for (int j = 0; j < M; ++j) {
            double ang = two_pi * j / M;
            complex zj = pd.x + rT * complex{std::cos(ang), std::sin(ang)};
            complex w = zj;
            for (int s = 0; s < p; ++s) w = tricorn::apply(c, w);
            halfv[static_cast<std::size_t>(j)] = w - pd.x;
            for (int s = 0; s < p; ++s) w = tricorn::apply(c, w);
            fullv[static_cast<std::size_t>(j)] = w - pd.x;
        }
        for (int i = 0; i <= kPetalOrder; ++i) {
            complex af{}, ah{};
            for (int j = 0; j < M; ++j) {
                double ang = two_pi * j * i / M;
                complex em{std::cos(ang), -std::sin(ang)};
                af += fullv[static_cast<std::size_t>(j)] * em;               // coeff of d^i
                ah += halfv[static_cast<std::size_t>(j)] * std::conj(em);    // coeff of conj(d)^i
            }
            double scale = static_cast<double>(M) * std::pow(rT, i);
            pd.full[static_cast<std::size_t>(i)] = af / scale;
            pd.half[static_cast<std::size_t>(i)] = ah / scale;
        }
        double tail = std::abs(pd.full[kPetalOrder]) * std::pow(rT, kPetalOrder);
        if (tail < 1e-11 || attempt == 5) break;
        rT *= 0.5;
    }
    pd.rT = rT;
    pd.full[0] = {};
    pd.full[1] = {1.0, 0.0};
    pd.half[0] = {};
    if (pd.half[1] == complex{}) throw numerical_error("make_petal: degenerate half map");
    pd.half[1] /= std::abs(pd.half[1]);
    pd.a = pd.full[2];
    if (std::abs(pd.a) < 1e-6) throw numerical_error("make_petal: cusp (petal coefficient ~ 0)");
    pd.sigma = 1.0 - pd.full[3] / (pd.a * pd.a);
    return pd;
}

}  // namespace detail

// Parabolic parameter of period 1 on the boundary of the main component:
// x = e^{i phi}/2, c = x - conj(x)^2, multiplier |2x|^2 = 1.
inline ParabolicPoint deltoid_parabolic(double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("deltoid_parabolic: phi");
    complex x{0.5 * std::cos(phi), 0.5 * std::sin(phi)};
    complex c = x - std::conj(x) * std::conj(x);
    ParabolicPoint pp{c, 1, x, {}};
    // cusps phi = pi/3, pi, 5pi/3 have vanishing petal coefficient
    try {
        pp.petal_coeff = detail::make_petal(c, 1, x).a;
    } catch (const numerical_error&) {
        pp.petal_coeff = {};
    }
    return pp;
}

// Locate the parabolic cycle point whose petal owns the critical value, by
// settling the critical orbit onto the cycle.
inline ParabolicPoint make_parabolic_point(complex c, int p) {
    require_finite(c, "make_parabolic_point: c");
    if (p < 1 || p % 2 == 0) throw std::invalid_argument("make_parabolic_point: odd period");
    complex orb = c;
    for (int j = 0; j < 5000 * p; ++j) orb = tricorn::apply(c, orb);
    // settle further until consecutive return points nearly agree
    complex prev = orb;
    for (int j = 0; j < 2000000; ++j) {
        for (int s = 0; s < 2 * p; ++s) orb = tricorn::apply(c, orb);
        if (std::abs(orb - prev) < 5e-4) break;
        prev = orb;
    }
    detail::PetalData pd = detail::make_petal(c, p, orb);
    return {c, p, pd.x, pd.a};
}

struct FatouChart {
    enum class Kind { attracting, repelling };

    Kind kind = Kind::attracting;
    ParabolicPoint base;
    complex normalization_anchor;  // Re Phi(anchor) = 0
    int depth = 40000;             // deepest Abel checkpoint |u|

    detail::PetalData petal;
    double im_shift = 0.0;   // intrinsic: makes Phi(f^p z) = conj(Phi z) + 1/2
    double re_shift = 0.0;   // anchor pin, heights unaffected
    double tail_log = 0.0;   // fitted log|u|/u coefficient of the Abel tail
    double tail_const = 0.0; // fitted 1/u coefficient
    double residual_re_c = 0.0;  // Re of the normalization constant; ~0 intrinsically
};

namespace detail {

struct AbelFit {
    complex value;      // the Abel coordinate (raw, unshifted)
    double tail_log;    // L/u coefficient
    double tail_const;  // 1/u coefficient
};

inline AbelFit abel_fit(const std::vector<std::pair<complex, complex>>& checkpoints) {
    const std::size_t n = checkpoints.size();
    std::vector<double> A(n * n);
    std::vector<double> bx(n), by(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = std::abs(checkpoints[i].first.real());
        double L = std::log(u);
        double row[5] = {1.0, L / u, 1.0 / u, (L / u) * (L / u), L / (u * u)};
        for (std::size_t j = 0; j < n; ++j) A[i * n + j] = row[j];
        bx[i] = checkpoints[i].second.real();
        by[i] = checkpoints[i].second.imag();
    }
    auto cx = solve_dense(A, bx);
    auto cy = solve_dense(std::move(A), by);
    return {complex{cx[0], cy[0]}, cx[1], cx[2]};
}

inline double entry_threshold(const PetalData& pd) {
    return std::max({8.0, 1.0 / (std::abs(pd.a) * 0.5 * pd.rT), 3.0 * std::abs(pd.sigma)});
}

inline std::array<double, 5> checkpoint_targets(const PetalData& pd, int depth, double u_entry) {
    // the first checkpoint must lie strictly beyond the entry coordinate
    // (perturbed-gate evaluations can enter very deep)
    double base = std::max({static_cast<double>(depth) / 16.0, 2.0 * entry_threshold(pd),
                            1.1 * std::abs(u_entry)});
    return {base, 2 * base, 4 * base, 8 * base, 16 * base};
}

// Raw attracting Abel coordinate: plain orbit into the petal, offset-series
// orbit out to the checkpoints, tail fit.
inline AbelFit attracting_raw(const PetalData& pd, complex z, int depth) {
    const complex c = pd.c;
    const double enter = entry_threshold(pd);
    long k = 0;
    bool in = false;
    for (long j = 0; j < 3000000; ++j) {
        complex d = z - pd.x;
        if (std::abs(d) < 0.5 * pd.rT) {
            complex u = pd.u_of(d);
            if (u.real() > enter) { in = true; break; }
        }
        for (int s = 0; s < 2 * pd.p; ++s) z = tricorn::apply(c, z);
        ++k;
    }
    if (!in) throw numerical_error("attracting_fatou: orbit never entered the petal");

    complex d = z - pd.x;
    auto targets = checkpoint_targets(pd, depth, pd.u_of(d).real());
    std::vector<std::pair<complex, complex>> cps;
    std::size_t next = 0;
    while (next < targets.size()) {
        complex u = pd.u_of(d);
        if (u.real() >= targets[next]) {
            cps.emplace_back(u, u - static_cast<double>(k) - pd.sigma * std::log(u));
            ++next;
        } else {
            d = pd.eval_full(d);
            ++k;
            if (k > 100000000) throw numerical_error("attracting_fatou: checkpoint overflow");
        }
    }
    return abel_fit(cps);
}

// Raw repelling Abel coordinate via the backward branch.
inline AbelFit repelling_raw(const PetalData& pd, complex z, int depth) {
    const complex c = pd.c;
    const double enter = entry_threshold(pd);
    long k = 0;
    bool in = false;
    for (long j = 0; j < 1000000; ++j) {
        complex d = z - pd.x;
        if (std::abs(d) < 0.5 * pd.rT) {
            complex u = pd.u_of(d);
            if (u.real() < -enter) { in = true; break; }
        }
        // plain-space backward Newton on f^{2p}(y) = z
        complex useed = pd.u_of(z - pd.x) - 1.0;
        complex y = pd.x + pd.d_of(useed);
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
            OrbitDerivative od{y};
            for (int s = 0; s < 2 * pd.p; ++s) od.step(c);
            complex step = (od.value - z) / od.deriv;
            y -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) { ok = true; break; }
        }
        if (!ok || !is_finite(y)) throw numerical_error("repelling_fatou: backward step failed");
        z = y;
        ++k;
    }
    if (!in) throw numerical_error("repelling_fatou: orbit never entered the petal");

    complex d = z - pd.x;
    auto targets = checkpoint_targets(pd, depth, pd.u_of(d).real());
    std::vector<std::pair<complex, complex>> cps;
    std::size_t next = 0;
    while (next < targets.size()) {
        complex u = pd.u_of(d);
        if (-u.real() >= targets[next]) {
            cps.emplace_back(u, u + static_cast<double>(k) - pd.sigma * std::log(-u));
            ++next;
        } else {
            d = pd.pull_full(d);
            ++k;
            if (k > 100000000) throw numerical_error("repelling_fatou: checkpoint overflow");
        }
    }
    return abel_fit(cps);
}

inline AbelFit raw_coordinate(const FatouChart& ch, complex z) {
    return ch.kind == FatouChart::Kind::attracting ? attracting_raw(ch.petal, z, ch.depth)
                                                   : repelling_raw(ch.petal, z, ch.depth);
}

}  // namespace detail

inline complex fatou_eval(const FatouChart& ch, complex z) {
    require_finite(z, "fatou_eval: z");
    complex raw = detail::raw_coordinate(ch, z).value;
    return raw + complex{ch.re_shift, ch.im_shift};
}

inline FatouChart make_fatou_chart(const ParabolicPoint& pp, FatouChart::Kind kind,
                                   int depth = 40000) {
    if (std::abs(pp.petal_coeff) < 1e-6)
        throw numerical_error("make_fatou_chart: cusp parameter rejected");
    FatouChart ch;
    ch.kind = kind;
    ch.base = pp;
    ch.depth = depth;
    ch.petal = detail::make_petal(pp.c, pp.period, pp.x);

    // Intrinsic imaginary normalization: psi(z) := conj(Phi(f^p z)) - 1/2 is
    // another Abel coordinate, so psi - Phi is constant; the anti-equation
    // pins its imaginary part to zero (the real part vanishes identically).
    double uref = std::max(40.0, 5.0 * std::abs(ch.petal.sigma));
    complex zref = ch.petal.x + ch.petal.d_of(kind == FatouChart::Kind::attracting
                                                  ? complex{uref, 0.0}
                                                  : complex{-uref, 0.0});
    auto fit0 = detail::raw_coordinate(ch, zref);
    complex zref_p = zref;
    for (int s = 0; s < pp.period; ++s) zref_p = tricorn::apply(pp.c, zref_p);
    auto fit1 = detail::raw_coordinate(ch, zref_p);
    complex C = std::conj(fit1.value) - 0.5 - fit0.value;
    ch.im_shift = C.imag() / 2.0;
    ch.residual_re_c = C.real();
    ch.tail_log = fit0.tail_log;
    ch.tail_const = fit0.tail_const;

    // Real pin: Re Phi = 0 at the critical value (attracting) or at a marked
    // petal-axis anchor (repelling).
    if (kind == FatouChart::Kind::attracting) {
        ch.normalization_anchor = pp.c;
    } else {
        ch.normalization_anchor = ch.petal.x + ch.petal.d_of(complex{-1.5 * uref, 0.0});
    }
    ch.re_shift = -(detail::raw_coordinate(ch, ch.normalization_anchor).value.real());
    return ch;
}

inline complex attracting_fatou(const FatouChart& ch, complex z) {
    if (ch.kind != FatouChart::Kind::attracting)
        throw std::invalid_argument("attracting_fatou: chart kind mismatch");
    return fatou_eval(ch, z);
}

inline double ecalle_height(const FatouChart& ch, complex z) { return fatou_eval(ch, z).imag(); }

inline double critical_ecalle_height(const ParabolicPoint& pp) {
    FatouChart ch = make_fatou_chart(pp, FatouChart::Kind::attracting);
    return ecalle_height(ch, pp.c);
}

inline double critical_ecalle_height(complex c, int p) {
    return critical_ecalle_height(make_parabolic_point(c, p));
}

// Psi_c = Phi_rep^{-1}, extended to the plane by the half-map recursion
// Psi(w) = f^p(Psi(conj(w) - 1/2)).  Deep targets are inverted through the
// fitted Abel tail; the unwinding runs in offset-series space while close to
// the parabolic point.
inline complex repelling_fatou_inverse(const FatouChart& ch, complex w) {
    if (ch.kind != FatouChart::Kind::repelling)
        throw std::invalid_argument("repelling_fatou_inverse: chart kind mismatch");
    require_finite(w, "repelling_fatou_inverse: w");
    const detail::PetalData& pd = ch.petal;
    const double W0 = std::max(2.0e4, 4.0 * detail::entry_threshold(pd));

    complex wr = w - complex{ch.re_shift, ch.im_shift};
    int m = 0;
    while (wr.real() > -W0) {
        wr = std::conj(wr) - 0.5;
        if (++m > 2000000) throw numerical_error("repelling_fatou_inverse: recursion depth");
    }
    // invert u - sigma Log(-u) + (tail_log L + tail_const)/(-u) = wr
    complex u = wr;
    for (int it = 0; it < 300; ++it) {
        complex L = std::log(-u);
        complex un = wr + pd.sigma * L - (ch.tail_log * L + ch.tail_const) / (-u);
        if (std::abs(un - u) <= 1e-16 * std::abs(un)) { u = un; break; }
        u = un;
    }
    complex d = pd.d_of(u);
    for (int j = 0; j < m; ++j) {
        if (std::abs(d) < 0.6 * pd.rT) {
            d = pd.eval_half(d);
        } else {
            complex z = pd.x + d;
            for (int s = 0; s < pd.p; ++s) z = tricorn::apply(pd.c, z);
            d = z - pd.x;
        }
        if (!is_finite(d)) throw numerical_error("repelling_fatou_inverse: unwind diverged");
    }
    return pd.x + d;
}

struct AccessReport {
    complex c;
    int period = 1;
    double e_crit = 0.0;
    double epsilon = 0.0;
    int grid_re = 32;
    int grid_im = 17;
    double escape_fraction = 0.0;
    int undetermined = 0;
    bool accessible_evidence = false;
};

// Theorem-style strip test: sample one fundamental domain
// {Re w in [0,1), |Im w - E_crit| < eps} of the repelling cylinder, map by
// Psi, and require every sample to escape.
inline AccessReport accessibility_test(const ParabolicPoint& pp, double epsilon,
                                       int grid_re = 32, int grid_im = 17,
                                       int escape_budget = 100000, int threads = 0) {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw std::invalid_argument("accessibility_test: epsilon in (0,1)");
    if (std::abs(pp.petal_coeff) < 1e-6)
        throw numerical_error("accessibility_test: cusp parameter rejected");

    AccessReport rep;
    rep.c = pp.c;
    rep.period = pp.period;
    rep.epsilon = epsilon;
    rep.grid_re = grid_re;
    rep.grid_im = grid_im;
    rep.e_crit = critical_ecalle_height(pp);
    FatouChart chr = make_fatou_chart(pp, FatouChart::Kind::repelling);

    const int total = grid_re * grid_im;
    std::vector<int> status(static_cast<std::size_t>(total), 0);  // 1 escaped, 0 not, -1 undetermined
    double radius = 2.0 + std::abs(pp.c);
    detail::parallel_for(static_cast<std::size_t>(total), [&](std::size_t idx) {
        int j = static_cast<int>(idx) % grid_re;
        int k = static_cast<int>(idx) / grid_re;
        double re = (j + 0.5) / grid_re;
        double im = rep.e_crit + epsilon * (grid_im == 1 ? 0.0 : (2.0 * k / (grid_im - 1) - 1.0));
        try {
            complex z = repelling_fatou_inverse(chr, complex{re, im});
            status[idx] = escape_time(pp.c, z, escape_budget, radius).escaped ? 1 : 0;
        } catch (const numerical_error&) {
            status[idx] = -1;
        }
    }, threads, 8);

    int escaped = 0;
    for (int s : status) {
        if (s == 1) ++escaped;
        if (s == -1) ++rep.undetermined;
    }
    rep.escape_fraction = static_cast<double>(escaped) / total;
    rep.accessible_evidence = (escaped == total);
    return rep;
}

// Lifted phase C = Phi_rep(f^{2pn}(z)) - Phi_attr(z) - n for a perturbed
// parameter just outside the component: the transit runs under f_{c_pert},
// the endpoint coordinates are the parabolic charts at pp.c (the limit
// normalization).
inline complex lifted_phase(complex c_pert, complex z, const ParabolicPoint& pp,
                            const FatouChart& attr, const FatouChart& rep) {
    require_finite(c_pert, "lifted_phase: c_pert");
    const detail::PetalData& pd = attr.petal;
    const double enter = detail::entry_threshold(pd);
    // Fire in a shallow window just past the gate.  Deep in the petal the
    // chart-proxy error grows like |a| u^2 |c_pert - c| (the parabolic point
    // of the chart is offset from the perturbed orbit's ghost), and right at
    // the gate the discrete orbit can land within O(|c_pert - c|) of x.
    const double u_fire = std::max(4.0 * enter, enter + 50.0);
    complex zt = z;
    long n = 0;
    bool out = false;
    for (long j = 0; j < 3000000; ++j) {
        complex d = zt - pd.x;
        if (std::abs(d) < 0.5 * pd.rT) {
            double re_u = pd.u_of(d).real();
            if (re_u < -enter && re_u > -u_fire) { out = true; break; }
        }
        for (int s = 0; s < 2 * pp.period; ++s) zt = tricorn::apply(c_pert, zt);
        ++n;
    }
    if (!out) throw numerical_error("lifted_phase: orbit never transited to the repelling side");
    complex phi_rep = fatou_eval(rep, zt);
    complex phi_attr = fatou_eval(attr, z);
    return phi_rep - phi_attr - static_cast<double>(n);
}

inline complex lifted_phase(complex c_pert, complex z, const ParabolicPoint& pp) {
    FatouChart attr = make_fatou_chart(pp, FatouChart::Kind::attracting);
    FatouChart rep = make_fatou_chart(pp, FatouChart::Kind::repelling);
    return lifted_phase(c_pert, z, pp, attr, rep);
}

// ---------------------------------------------------------------------------
// Arc following: the multiplier-1 locus of an odd period p, parametrized by
// the bordered system {cycle equations, 4^p prod|z_j|^2 = 1, arclength}.

namespace detail {

struct ArcState {
    std::vector<complex> cycle;  // p points
    complex c;
};

inline double arc_multiplier(const std::vector<complex>& cyc) {
    double m = 1.0;
    for (complex z : cyc) m *= 4.0 * abs2(z);
    return m;
}

inline std::vector<double> arc_equations(const std::vector<double>& X, int p, complex c_pred,
                                         complex tang) {
    std::vector<double> out(static_cast<std::size_t>(2 * p) + 2);
    std::vector<complex> z(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) z[static_cast<std::size_t>(j)] = {X[2 * j], X[2 * j + 1]};
    complex c{X[static_cast<std::size_t>(2 * p)], X[static_cast<std::size_t>(2 * p) + 1]};
    for (int j = 0; j < p; ++j) {
        complex e = std::conj(z[static_cast<std::size_t>(j)]) * std::conj(z[static_cast<std::size_t>(j)]) + c -
                    z[static_cast<std::size_t>((j + 1) % p)];
        out[static_cast<std::size_t>(2 * j)] = e.real();
        out[static_cast<std::size_t>(2 * j) + 1] = e.imag();
    }
    out[static_cast<std::size_t>(2 * p)] = arc_multiplier(z) - 1.0;
    out[static_cast<std::size_t>(2 * p) + 1] = ((c - c_pred) * std::conj(tang)).real();
    return out;
}

inline ArcState arc_correct(const ArcState& st, complex c_pred, complex tang) {
    const int p = static_cast<int>(st.cycle.size());
    const std::size_t dim = static_cast<std::size_t>(2 * p) + 2;
    std::vector<double> X(dim);
    for (int j = 0; j < p; ++j) {
        X[static_cast<std::size_t>(2 * j)] = st.cycle[static_cast<std::size_t>(j)].real();
        X[static_cast<std::size_t>(2 * j) + 1] = st.cycle[static_cast<std::size_t>(j)].imag();
    }
    X[dim - 2] = st.c.real();
    X[dim - 1] = st.c.imag();

    for (int it = 0; it < 80; ++it) {
        auto F0 = arc_equations(X, p, c_pred, tang);
        std::vector<double> J(dim * dim);
        const double h = 1e-8;
        for (std::size_t i = 0; i < dim; ++i) {
            auto Xp = X;
            Xp[i] += h;
            auto Fp = arc_equations(Xp, p, c_pred, tang);
            for (std::size_t r = 0; r < dim; ++r) J[r * dim + i] = (Fp[r] - F0[r]) / h;
        }
        for (auto& v : F0) v = -v;
        auto dX = solve_dense(std::move(J), F0);
        double worst = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            X[i] += dX[i];
            worst = std::max(worst, std::abs(dX[i]));
        }
        if (worst < 1e-14) break;
    }
    ArcState out;
    out.cycle.resize(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j)
        out.cycle[static_cast<std::size_t>(j)] = {X[static_cast<std::size_t>(2 * j)], X[static_cast<std::size_t>(2 * j) + 1]};
    out.c = {X[dim - 2], X[dim - 1]};
    auto res = arc_equations(X, p, c_pred, tang);
    double worst = 0.0;
    for (double v : res) worst = std::max(worst, std::abs(v));
    if (worst > 1e-9) throw numerical_error("arc_correct: corrector did not converge");
    return out;
}

// Arc tangent from the nullspace of the (cycle, multiplier) Jacobian over
// (z_0..z_{p-1}, c), normalized against a hint row.  The cycle itself is
// singular in c on the arc, so no plain fixed-point tracking appears here.
inline complex arc_tangent(const ArcState& st, complex hint) {
    const int p = static_cast<int>(st.cycle.size());
    const std::size_t dim = static_cast<std::size_t>(2 * p) + 2;
    std::vector<double> X(dim);
    for (int j = 0; j < p; ++j) {
        X[static_cast<std::size_t>(2 * j)] = st.cycle[static_cast<std::size_t>(j)].real();
        X[static_cast<std::size_t>(2 * j) + 1] = st.cycle[static_cast<std::size_t>(j)].imag();
    }
    X[dim - 2] = st.c.real();
    X[dim - 1] = st.c.imag();

    // rows: 2p cycle equations + multiplier; the closing row pins the
    // projection of the c-components onto the hint direction to 1
    auto rows_at = [&](const std::vector<double>& Y) {
        std::vector<complex> z(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j) z[static_cast<std::size_t>(j)] = {Y[2 * j], Y[2 * j + 1]};
        complex c{Y[dim - 2], Y[dim - 1]};
        std::vector<double> out(static_cast<std::size_t>(2 * p) + 1);
        for (int j = 0; j < p; ++j) {
            complex e = std::conj(z[static_cast<std::size_t>(j)]) * std::conj(z[static_cast<std::size_t>(j)]) + c -
                        z[static_cast<std::size_t>((j + 1) % p)];
            out[static_cast<std::size_t>(2 * j)] = e.real();
            out[static_cast<std::size_t>(2 * j) + 1] = e.imag();
        }
        out[static_cast<std::size_t>(2 * p)] = arc_multiplier(z);
        return out;
    };

    auto F0 = rows_at(X);
    std::vector<double> J(dim * dim, 0.0);
    const double h = 1e-8;
    for (std::size_t i = 0; i < dim; ++i) {
        auto Xp = X;
        Xp[i] += h;
        auto Fp = rows_at(Xp);
        for (std::size_t r = 0; r + 1 < dim; ++r) J[r * dim + i] = (Fp[r] - F0[r]) / h;
    }
    J[(dim - 1) * dim + (dim - 2)] = hint.real();
    J[(dim - 1) * dim + (dim - 1)] = hint.imag();
    std::vector<double> rhs(dim, 0.0);
    rhs[dim - 1] = 1.0;
    auto v = solve_dense(std::move(J), std::move(rhs));
    complex tc{v[dim - 2], v[dim - 1]};
    if (!is_finite(tc) || std::abs(tc) == 0.0)
        throw numerical_error("arc_tangent: degenerate tangent");
    return tc / std::abs(tc);
}

inline ArcState arc_step(const ArcState& st, double h, complex hint) {
    complex tang = arc_tangent(st, hint);
    if ((tang * std::conj(hint)).real() < 0.0) tang = -tang;
    if (h < 0) tang = -tang;
    complex c_pred = st.c + std::abs(h) * tang;
    return arc_correct(st, c_pred, tang);
}

inline double arc_e_crit(const ArcState& st, int p) {
    // the critical orbit settles into the owner petal
    complex orb = st.c;
    for (int j = 0; j < 4000 * p; ++j) orb = tricorn::apply(st.c, orb);
    double best = 1e18;
    complex seed = st.cycle[0];
    for (int j = 0; j < 200000; ++j) {
        for (complex q : st.cycle) {
            double dq = std::abs(orb - q);
            if (dq < best) {
                best = dq;
                seed = q;
            }
        }
        if (best < 2e-4) break;
        for (int s = 0; s < 2 * p; ++s) orb = tricorn::apply(st.c, orb);
    }
    detail::PetalData pd = detail::make_petal(st.c, p, seed);
    ParabolicPoint pp{st.c, p, pd.x, pd.a};
    return critical_ecalle_height(pp);
}

}  // namespace detail

// Follow the multiplier-1 boundary of the period-p component containing
// c_seed (walking out along +i hits a co-root arc for the components used
// here), then slide along the arc until the critical Ecalle height matches
// target_height.
inline ParabolicPoint find_parabolic_on_arc(int p, complex c_seed, double target_height) {
    if (p < 1 || p % 2 == 0) throw std::invalid_argument("find_parabolic_on_arc: odd period");

    // attracting cycle at the seed (centers carry the critical point)
    std::vector<complex> cyc;
    {
        complex z{};
        bool ok = false;
        auto try_seed = [&](complex zs) {
            complex y = zs;
            for (int it = 0; it < 120; ++it) {
                OrbitDerivative od{y};
                for (int j = 0; j < 2 * p; ++j) od.step(c_seed);
                complex den = od.deriv - 1.0;
                if (std::abs(den) < 1e-12) den += complex{1e-9, 0.0};
                complex step = (od.value - y) / den;
                y -= step;
                if (!is_finite(y) || std::abs(y) > 8.0) return false;
                if (std::abs(step) < 1e-13) break;
            }
            if (std::abs(apply_iter(c_seed, y, p) - y) > 1e-7) return false;
            z = y;
            return true;
        };
        ok = try_seed(complex{});
        for (int r = 1; r <= 3 && !ok; ++r)
            for (int j = 0; j < 12 && !ok; ++j) {
                double ang = 2.0 * 3.141592653589793 * j / 12;
                ok = try_seed(0.02 * r * complex{std::cos(ang), std::sin(ang)});
            }
        if (!ok) throw numerical_error("find_parabolic_on_arc: no period-p cycle at the seed");
        cyc = {z};
        for (int j = 1; j < p; ++j) cyc.push_back(tricorn::apply(c_seed, cyc.back()));
    }

    // Walk +i with plain tracking only while the cycle is safely attracting;
    // the last stretch (the tracker degenerates as the multiplier approaches
    // 1) runs as a homotopy in the multiplier: solve
    // {cycle equations, multiplier = s, c on the +i ray} for s -> 1.
    auto lam_plain = [&](complex c, complex& zwarm) -> bool {
        complex z = zwarm;
        for (int it = 0; it < 80; ++it) {
            OrbitDerivative od{z};
            for (int j = 0; j < 2 * p; ++j) od.step(c);
            complex den = od.deriv - 1.0;
            if (std::abs(den) < 1e-9) den += complex{1e-9, 0.0};
            complex step = (od.value - z) / den;
            z -= step;
            if (!is_finite(z) || std::abs(z) > 8.0) return false;
            if (std::abs(step) < 1e-13) break;
        }
        if (std::abs(apply_iter(c, z, p) - z) > 1e-6) return false;
        zwarm = z;
        return true;
    };

    complex zw = cyc[0];
    complex c = c_seed;
    {
        double step = 2e-3;
        for (;;) {
            complex cn = c + complex{0, step};
            complex zw2 = zw;
            if (!lam_plain(cn, zw2)) {
                step *= 0.5;
                if (step < 1e-9)
                    throw numerical_error("find_parabolic_on_arc: tracking lost in the safe region");
                continue;
            }
            std::vector<complex> cc{zw2};
            for (int j = 1; j < p; ++j) cc.push_back(tricorn::apply(cn, cc.back()));
            if (detail::arc_multiplier(cc) >= 0.85) break;
            c = cn;
            zw = zw2;
            if (std::abs(c - c_seed) > 3.0)
                throw numerical_error("find_parabolic_on_arc: walked out without a boundary");
        }
    }

    // multiplier homotopy along the ray c = c_base + i t
    detail::ArcState st;
    {
        const std::size_t dim = static_cast<std::size_t>(2 * p) + 1;
        std::vector<double> X(dim);
        for (int j = 0; j < p; ++j) {
            complex zj = j == 0 ? zw : tricorn::apply(c, complex{X[2 * j - 2], X[2 * j - 1]});
            X[static_cast<std::size_t>(2 * j)] = zj.real();
            X[static_cast<std::size_t>(2 * j) + 1] = zj.imag();
        }
        X[dim - 1] = 0.0;  // t offset above c
        auto eqs = [&](const std::vector<double>& Y, double s) {
            std::vector<complex> z(static_cast<std::size_t>(p));
            for (int j = 0; j < p; ++j) z[static_cast<std::size_t>(j)] = {Y[2 * j], Y[2 * j + 1]};
            complex cc = c + complex{0.0, Y[dim - 1]};
            std::vector<double> out(dim);
            for (int j = 0; j < p; ++j) {
                complex e = std::conj(z[static_cast<std::size_t>(j)]) * std::conj(z[static_cast<std::size_t>(j)]) +
                            cc - z[static_cast<std::size_t>((j + 1) % p)];
                out[static_cast<std::size_t>(2 * j)] = e.real();
                out[static_cast<std::size_t>(2 * j) + 1] = e.imag();
            }
            out[dim - 1] = detail::arc_multiplier(z) - s;
            return out;
        };
        auto newton = [&](double s) {
            for (int it = 0; it < 60; ++it) {
                auto F0 = eqs(X, s);
                std::vector<double> J(dim * dim);
                const double h = 1e-8;
                for (std::size_t i = 0; i < dim; ++i) {
                    auto Xp = X;
                    Xp[i] += h;
                    auto Fp = eqs(Xp, s);
                    for (std::size_t r = 0; r < dim; ++r) J[r * dim + i] = (Fp[r] - F0[r]) / h;
                }
                for (auto& v : F0) v = -v;
                auto dX = detail::solve_dense(std::move(J), std::move(F0));
                double worst = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    X[i] += dX[i];
                    worst = std::max(worst, std::abs(dX[i]));
                }
                if (worst < 1e-14) return;
            }
        };
        {
            std::vector<complex> cc{zw};
            for (int j = 1; j < p; ++j) cc.push_back(tricorn::apply(c, cc.back()));
            double s0 = detail::arc_multiplier(cc);
            for (double s = s0; s < 1.0; s = std::min(1.0, s + 0.025)) {
                newton(s);
                if (s == 1.0) break;
            }
            newton(1.0);
        }
        st.cycle.resize(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j)
            st.cycle[static_cast<std::size_t>(j)] = {X[static_cast<std::size_t>(2 * j)],
                                                     X[static_cast<std::size_t>(2 * j) + 1]};
        st.c = c + complex{0.0, X[dim - 1]};
        if (std::abs(detail::arc_multiplier(st.cycle) - 1.0) > 1e-10)
            throw numerical_error("find_parabolic_on_arc: homotopy missed the boundary");
    }

    auto finish = [p](const detail::ArcState& s) {
        // report the cycle point whose petal owns the critical value
        complex orb = s.c;
        for (int j = 0; j < 4000 * p; ++j) orb = tricorn::apply(s.c, orb);
        double bd = 1e18;
        complex seed = s.cycle[0];
        for (int j = 0; j < 200000 && bd >= 2e-4; ++j) {
            for (complex q : s.cycle) {
                double dq = std::abs(orb - q);
                if (dq < bd) { bd = dq; seed = q; }
            }
            for (int k = 0; k < 2 * p; ++k) orb = tricorn::apply(s.c, orb);
        }
        detail::PetalData pd = detail::make_petal(s.c, p, seed);
        return ParabolicPoint{s.c, p, pd.x, pd.a};
    };

    double E0 = detail::arc_e_crit(st, p);
    complex hint{1.0, 0.0};
    if (std::abs(E0 - target_height) < 1e-7) return finish(st);

    // corrector failures (predictor overshooting a curved stretch) retry at
    // half the step
    auto guarded_step = [&](const detail::ArcState& from, double hh,
                            complex hn) -> detail::ArcState {
        for (int k = 0; k < 14; ++k) {
            try {
                return detail::arc_step(from, hh, hn);
            } catch (const numerical_error&) {
                hh *= 0.5;
            }
        }
        throw numerical_error("find_parabolic_on_arc: arc step kept failing");
    };

    // direction probe
    detail::ArcState sp = guarded_step(st, 1e-3, hint);
    detail::ArcState sm = guarded_step(st, -1e-3, hint);
    double Ep = detail::arc_e_crit(sp, p);
    double Em = detail::arc_e_crit(sm, p);
    detail::ArcState cur;
    double E_cur;
    if (std::abs(Ep - target_height) <= std::abs(Em - target_height)) {
        cur = sp;
        E_cur = Ep;
    } else {
        cur = sm;
        E_cur = Em;
    }
    hint = (cur.c - st.c) / std::abs(cur.c - st.c);
    detail::ArcState prev = st;
    double E_prev = E0;

    // march until the target height is bracketed
    int guard = 0;
    while ((E_prev - target_height) * (E_cur - target_height) > 0.0) {
        detail::ArcState next = guarded_step(cur, 2e-3, hint);
        hint = (next.c - cur.c) / std::abs(next.c - cur.c);
        prev = cur;
        E_prev = E_cur;
        cur = next;
        // make_petal inside arc_e_crit rejects cusps (petal coefficient -> 0)
        E_cur = detail::arc_e_crit(cur, p);
        if (++guard > 2000)
            throw numerical_error("find_parabolic_on_arc: no height bracket on the arc");
    }

    // bisect along the arc between prev and cur
    detail::ArcState best = cur;
    double E_best = E_cur;
    double lo = 0.0, hi = std::abs(cur.c - prev.c);
    complex dir = (cur.c - prev.c) / std::abs(cur.c - prev.c);
    for (int it = 0; it < 60 && std::abs(E_best - target_height) > 1e-7; ++it) {
        double mid = 0.5 * (lo + hi);
        detail::ArcState sm2 = guarded_step(prev, mid, dir);
        double Emid = detail::arc_e_crit(sm2, p);
        if (std::abs(Emid - target_height) < std::abs(E_best - target_height)) {
            best = sm2;
            E_best = Emid;
        }
        if ((Emid - target_height) * (E_prev - target_height) > 0.0) lo = mid;
        else hi = mid;
    }
    if (std::abs(E_best - target_height) > 1e-6)
        throw numerical_error("find_parabolic_on_arc: height bisection did not reach tolerance");
    return finish(best);
}

}  // namespace tricorn
