#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "tricorn/core.hpp"
#include "tricorn/detail/dd.hpp"

namespace tricorn {

namespace detail {

// Fixed points of f_c are among the roots of the holomorphic quartic
// P(z) = (z^2 + conj(c))^2 + c - z.
inline complex fixed_point_quartic(complex c, complex z) {
    complex w = z * z + std::conj(c);
    return w * w + c - z;
}

inline complex fixed_point_quartic_d(complex c, complex z) {
    complex w = z * z + std::conj(c);
    return 4.0 * z * w - 1.0;
}

}  // namespace detail

// beta fixed point: Newton on the quartic from the large-real seed 2 + |c|
// (the landing point of R_c(0)).  Falls back to multiplicity-2 steps when the
// root is parabolic-degenerate (e.g. c = 1/4).
inline complex beta_fixed_point(complex c) {
    require_finite(c, "beta_fixed_point: c");
    complex z = 2.0 + std::abs(c);
    for (int it = 0; it < 200; ++it) {
        complex p = detail::fixed_point_quartic(c, z);
        complex dp = detail::fixed_point_quartic_d(c, z);
        if (dp == complex{}) break;
        complex dz = p / dp;
        z -= dz;
        if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    complex best = z;
    double best_res = std::abs(tricorn::apply(c, best) - best);
    // double-root polish
    complex z2 = z;
    for (int it = 0; it < 60; ++it) {
        complex p = detail::fixed_point_quartic(c, z2);
        complex dp = detail::fixed_point_quartic_d(c, z2);
        if (dp == complex{}) break;
        z2 -= 2.0 * p / dp;
        if (!is_finite(z2)) { z2 = z; break; }
    }
    if (is_finite(z2)) {
        double res2 = std::abs(tricorn::apply(c, z2) - z2);
        if (res2 < best_res && std::abs(z2 - z) < 0.1 * std::max(1.0, std::abs(z))) {
            best = z2;
            best_res = res2;
        }
    }
    if (best_res > 1e-10 * std::max(1.0, std::abs(best)))
        throw numerical_error("beta_fixed_point: Newton did not converge");
    return best;
}

// Multiplier with the parity convention: for even period p the complex
// derivative of f_c^p along the cycle; for odd p the non-negative real
// |d/dconj(z) f_c^p|^2.
inline complex multiplier(complex c, std::span<const complex> orbit) {
    if (orbit.empty()) throw std::invalid_argument("multiplier: empty orbit");
    OrbitDerivative od{orbit[0]};
    for (std::size_t i = 0; i < orbit.size(); ++i) od.step(c);
    if (orbit.size() % 2 == 0) return od.deriv;
    return {abs2(od.deriv), 0.0};
}

struct PeriodicOrbit {
    complex c;
    int period = 1;               // exact period under f_c
    std::vector<complex> points;  // one full cycle, starting at the representative
    complex multiplier;
};

struct PeriodicPointSet {
    std::vector<PeriodicOrbit> orbits;
    bool complete = false;  // all 4^p fixed points of f^{2p} accounted for
};

// All solutions of f_c^p(z) = z, organized into cycles of exact period
// dividing p.  Newton targets the holomorphic fixed-point equation of f^{2p}
// from a seed grid; roots with f^p(z) != z (genuinely even f^{2p}-periods)
// are filtered out.
inline PeriodicPointSet periodic_points(complex c, int p, int grid = 64) {
    require_finite(c, "periodic_points: c");
    if (p < 1 || p > 12) throw std::invalid_argument("periodic_points: need 1 <= p <= 12");

    double box = 2.0 + std::abs(c);
    std::vector<complex> roots;
    auto known = [&](complex z) {
        for (complex r : roots)
            if (std::abs(r - z) < 1e-8) return true;
        return false;
    };
    for (int iy = 0; iy < grid; ++iy) {
        for (int ix = 0; ix < grid; ++ix) {
            complex z{-box + (2.0 * box * (ix + 0.5)) / grid, -box + (2.0 * box * (iy + 0.5)) / grid};
            bool ok = false;
            for (int it = 0; it < 80; ++it) {
                OrbitDerivative od{z};
                for (int j = 0; j < 2 * p; ++j) od.step(c);
                complex denom = od.deriv - 1.0;
                if (denom == complex{}) break;
                complex dz = (od.value - z) / denom;
                z -= dz;
                if (!is_finite(z) || std::abs(z) > 4.0 * box) break;
                if (std::abs(dz) < 1e-13 * std::max(1.0, std::abs(z))) { ok = true; break; }
            }
            if (!ok) continue;
            if (std::abs(apply_iter(c, z, 2 * p) - z) > 1e-9) continue;
            if (!known(z)) roots.push_back(z);
        }
    }

    // keep only solutions of the odd-step equation f^p(z) = z
    std::vector<complex> fixed_p;
    for (complex z : roots)
        if (std::abs(apply_iter(c, z, p) - z) < 1e-7) fixed_p.push_back(z);

    PeriodicPointSet out;
    std::vector<bool> used(fixed_p.size(), false);
    for (std::size_t i = 0; i < fixed_p.size(); ++i) {
        if (used[i]) continue;
        // exact period
        int q = 1;
        for (; q <= p; ++q)
            if (std::abs(apply_iter(c, fixed_p[i], q) - fixed_p[i]) < 1e-8) break;
        PeriodicOrbit orb;
        orb.c = c;
        orb.period = q;
        complex z = fixed_p[i];
        for (int j = 0; j < q; ++j) {
            orb.points.push_back(z);
            for (std::size_t m = 0; m < fixed_p.size(); ++m)
                if (!used[m] && std::abs(fixed_p[m] - z) < 1e-8) used[m] = true;
            z = tricorn::apply(c, z);
        }
        // canonical representative: lexicographically smallest point
        std::size_t arg = 0;
        for (std::size_t j = 1; j < orb.points.size(); ++j) {
            complex a = orb.points[j], b = orb.points[arg];
            if (a.real() < b.real() - 1e-12 ||
                (std::abs(a.real() - b.real()) <= 1e-12 && a.imag() < b.imag()))
                arg = j;
        }
        std::rotate(orb.points.begin(), orb.points.begin() + arg, orb.points.end());
        orb.multiplier = multiplier(c, orb.points);
        out.orbits.push_back(std::move(orb));
    }
    std::sort(out.orbits.begin(), out.orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period != b.period) return a.period < b.period;
        complex x = a.points[0], y = b.points[0];
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });

    std::size_t degree = 1;
    for (int j = 0; j < p; ++j) degree *= 4;
    out.complete = roots.size() == degree;
    return out;
}

struct CnRecord {
    int n = 0;
    int N = 3;            // N = 2n + 3
    double c_n = 0.0;
    double lambda_n = 0.0;  // multiplier of beta at c_n
    bool orbit_check = false;
    detail::dd c_dd{};      // compensated value, used by the scaling module
};

namespace detail {

inline double critical_orbit_real(double c, int N) {
    double x = 0.0;
    for (int j = 0; j < N; ++j) x = x * x + c;
    return x;
}

inline dd critical_orbit_dd(dd c, int N) {
    dd x{0.0};
    for (int j = 0; j < N; ++j) x = add(mul(x, x), c);
    return x;
}

}  // namespace detail

// c_n = leftmost real c with Q_c^N(0) = 0, N = 2n+3.  Geometric scan of
// s = c + 2 from below the n=8 scale, first sign change, bisection, then a
// compensated Newton polish (the root sits ~0.23 * 16^-n above -2).
inline CnRecord solve_c_n(int n) {
    if (n < 0 || n > 8) throw std::invalid_argument("solve_c_n: need 0 <= n <= 8");
    const int N = 2 * n + 3;

    double s = 1e-12;
    double prev = detail::critical_orbit_real(-2.0 + s, N);
    double s_lo = 0.0, s_hi = 0.0;
    bool found = false;
    while (s < 0.3) {
        double s2 = s * 1.02;
        double cur = detail::critical_orbit_real(-2.0 + s2, N);
        if ((prev < 0.0) != (cur < 0.0)) {
            s_lo = s;
            s_hi = s2;
            found = true;
            break;
        }
        prev = cur;
        s = s2;
    }
    if (!found) throw numerical_error("solve_c_n: no sign change in the scan bracket");

    double f_lo = detail::critical_orbit_real(-2.0 + s_lo, N);
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (s_lo + s_hi);
        double fm = detail::critical_orbit_real(-2.0 + mid, N);
        if ((fm < 0.0) == (f_lo < 0.0)) {
            s_lo = mid;
            f_lo = fm;
        } else {
            s_hi = mid;
        }
    }

    // compensated Newton polish
    detail::dd c = detail::add(detail::dd(-2.0), detail::dd(0.5 * (s_lo + s_hi)));
    for (int it = 0; it < 80; ++it) {
        detail::dd x{0.0}, d{0.0};
        for (int j = 0; j < N; ++j) {
            d = detail::add(detail::mul(detail::dd(2.0), detail::mul(x, d)), detail::dd(1.0));
            x = detail::add(detail::mul(x, x), c);
        }
        detail::dd step = detail::div(x, d);
        c = detail::sub(c, step);
        if (std::abs(step.value()) < 1e-30) break;
    }

    CnRecord rec;
    rec.n = n;
    rec.N = N;
    rec.c_dd = c;
    rec.c_n = c.value();
    if (!(rec.c_n > -2.0 && rec.c_n < -1.7))
        throw numerical_error("solve_c_n: root escaped the (-2, -1.7) window");

    // Eq. (3.2) ordering: c_n = Q(0) < 0 = Q^N(0) < Q^{N-1}(0) < ... < Q^2(0).
    // The residual is compared against the orbit's c-sensitivity: iterating
    // in one-double precision alone amplifies round-off by ~16^n.
    std::vector<double> orbit(static_cast<std::size_t>(N) + 1);
    {
        detail::dd x{0.0}, d{0.0};
        orbit[0] = 0.0;
        for (int j = 1; j <= N; ++j) {
            d = detail::add(detail::mul(detail::dd(2.0), detail::mul(x, d)), detail::dd(1.0));
            x = detail::add(detail::mul(x, x), c);
            orbit[static_cast<std::size_t>(j)] = x.value();
        }
        rec.orbit_check = std::abs(x.value()) < 1e-12 * std::max(1.0, std::abs(d.value()));
    }
    bool ok = orbit[1] < 0.0;
    for (int j = 2; j < N; ++j) ok = ok && orbit[j] > orbit[j + 1];
    rec.orbit_check = rec.orbit_check && ok;

    complex beta = beta_fixed_point(rec.c_n);
    rec.lambda_n = multiplier(rec.c_n, std::span<const complex>(&beta, 1)).real();
    return rec;
}

inline std::vector<CnRecord> cn_table(int n_max) {
    std::vector<CnRecord> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(solve_c_n(n));
    return out;
}

}  // namespace tricorn
