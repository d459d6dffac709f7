#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "tricorn/detail/dd.hpp"
#include "tricorn/koenigs.hpp"
#include "tricorn/orbits.hpp"

namespace tricorn {

// Constants of the limit family, measured once at c-hat = -2.
struct HatConstants {
    double lambda_hat;  // multiplier of beta at -2 (16)
    double a_hat;       // kappa'(0) at -2 (-2/pi)
    double A2_hat;      // quadratic coefficient (64/pi^2)
    double b0;          // 896/(15 pi^2)
    double b0_star;     // -256/(15 pi^2)

    double limit_coefficient() const { return b0 * b0 - b0_star * b0_star; }
};

inline HatConstants compute_hat_constants() {
    KoenigsChart ch = build_chart(complex{-2.0, 0.0});
    complex A2 = coefficient_A(complex{-2.0, 0.0}, 2);
    auto [b0, b0s] = estimate_B_constants();
    if (std::abs(A2.imag()) > 1e-6 || std::abs(b0.imag()) > 1e-4 || std::abs(b0s.imag()) > 1e-4)
        throw numerical_error("hat constants: unexpected imaginary parts");
    return {std::abs(ch.lambda), ch.a_c.real(), A2.real(), b0.real(), b0s.real()};
}

inline const HatConstants& hat_constants() {
    static const HatConstants hc = compute_hat_constants();
    return hc;
}

struct ScalingFrame {
    int n = 0;
    int N = 3;               // 2n + 3
    double c_n = 0.0;
    double lambda_cn = 0.0;  // multiplier of beta at c_n
    double alpha_n = 0.0;    // lambda_hat^n A2 / a_hat  (< 0)
    double k_n = 0.0;        // a_hat / (alpha_n lambda_cn^n)  (> 0)
    double b0 = 0.0;
    double b0_star = 0.0;
    detail::dd c_dd{};       // compensated c_n for the return-map orbit
    double lambda_cn_pow = 1.0;  // lambda_cn^n by repeated multiplication
};

inline ScalingFrame build_frame(int n, const HatConstants& hc) {
    if (n < 0 || n > 6) throw std::invalid_argument("build_frame: need 0 <= n <= 6");
    CnRecord rec = solve_c_n(n);
    ScalingFrame fr;
    fr.n = n;
    fr.N = rec.N;
    fr.c_n = rec.c_n;
    fr.c_dd = rec.c_dd;
    fr.lambda_cn = rec.lambda_n;
    fr.b0 = hc.b0;
    fr.b0_star = hc.b0_star;
    double lam_hat_pow = 1.0;
    fr.lambda_cn_pow = 1.0;
    for (int j = 0; j < n; ++j) {
        lam_hat_pow *= hc.lambda_hat;
        fr.lambda_cn_pow *= rec.lambda_n;
    }
    fr.alpha_n = lam_hat_pow * hc.A2_hat / hc.a_hat;
    fr.k_n = hc.a_hat / (fr.alpha_n * fr.lambda_cn_pow);
    if (!(fr.alpha_n < 0.0) || !(fr.k_n > 0.0))
        throw numerical_error("build_frame: sign invariants violated");
    return fr;
}

inline ScalingFrame build_frame(int n) { return build_frame(n, hat_constants()); }

// rho_n(t) = k_n conj(b0) t - conj(k_n) b0* conj(t); all constants real here.
inline complex rho_n(const ScalingFrame& fr, complex t) {
    require_finite(t, "rho_n: t");
    if (std::abs(t) > 10.0) throw std::invalid_argument("rho_n: |t| <= 10");
    return fr.k_n * (fr.b0 * t - fr.b0_star * std::conj(t));
}

// Ratio of the real-axis to imaginary-axis stretch of rho_n:
// |rho_n(1)| / |rho_n(i)| = (b0 - b0*)/(b0 + b0*) = 9/5, independent of n.
inline double aspect_ratio(const ScalingFrame& fr) {
    return std::abs(rho_n(fr, complex{1.0, 0.0})) / std::abs(rho_n(fr, complex{0.0, 1.0}));
}

// Rescaled return map g^n_c(Z) = alpha_n f_c^N(Z/alpha_n) at c = c_n + rho_n(t).
// The orbit runs in compensated (double-double) arithmetic: rho_n(t) is of
// order 16^{-2n-1} and would otherwise drown in the rounding of c_n itself.
inline complex rescaled_return(const ScalingFrame& fr, complex t, complex Z) {
    require_finite(Z, "rescaled_return: Z");
    if (std::abs(Z) > 4.0) throw std::invalid_argument("rescaled_return: |Z| <= 4");
    complex rho = rho_n(fr, t);
    detail::ddc c{detail::add(fr.c_dd, detail::dd(rho.real())), detail::dd(rho.imag())};
    detail::ddc z{complex{Z.real() / fr.alpha_n, Z.imag() / fr.alpha_n}};
    for (int j = 0; j < fr.N; ++j) {
        detail::ddc zc = detail::conj(z);
        z = detail::add(detail::mul(zc, zc), c);
    }
    complex out = z.value();
    return {out.real() * fr.alpha_n, out.imag() * fr.alpha_n};
}

struct ConvergenceRow {
    int n;
    double e_n;
    std::optional<double> ratio;  // e_n / e_{n-1}
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double fitted_ratio = 0.0;  // geometric mean of consecutive ratios
};

inline std::vector<complex> default_t_grid() {
    return {complex{0, 0}, complex{0.5, 0}, complex{-0.5, 0}, complex{0, 0.5},
            complex{0, -0.5}, complex{1, 0}, complex{0, 1}};
}

inline std::vector<complex> default_Z_grid() {
    std::vector<complex> g;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            g.push_back({-1.0 + 0.25 * i, -1.0 + 0.25 * j});
    return g;
}

// e_n = max over the grids of |g^n(Z) - (conj(Z)^2 + (|b0|^2 - |b0*|^2) t)|.
inline ConvergenceReport convergence_report(int n_lo, int n_hi,
                                            const std::vector<complex>& t_grid,
                                            const std::vector<complex>& Z_grid,
                                            const HatConstants& hc) {
    if (n_lo < 0 || n_hi > 6 || n_lo > n_hi)
        throw std::invalid_argument("convergence_report: need 0 <= n_lo <= n_hi <= 6");
    ConvergenceReport rep;
    double s = hc.limit_coefficient();
    double prev = 0.0;
    double log_sum = 0.0;
    int log_count = 0;
    for (int n = n_lo; n <= n_hi; ++n) {
        ScalingFrame fr = build_frame(n, hc);
        double e = 0.0;
        for (complex t : t_grid) {
            for (complex Z : Z_grid) {
                complex g = rescaled_return(fr, t, Z);
                complex limit = std::conj(Z) * std::conj(Z) + s * t;
                e = std::max(e, std::abs(g - limit));
            }
        }
        ConvergenceRow row{n, e, std::nullopt};
        if (n > n_lo && prev > 0.0) {
            row.ratio = e / prev;
            log_sum += std::log(*row.ratio);
            ++log_count;
        }
        rep.rows.push_back(row);
        prev = e;
    }
    rep.fitted_ratio = log_count ? std::exp(log_sum / log_count) : 0.0;
    return rep;
}

inline ConvergenceReport convergence_report(int n_lo, int n_hi) {
    return convergence_report(n_lo, n_hi, default_t_grid(), default_Z_grid(), hat_constants());
}

}  // namespace tricorn
