#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "tricorn/core.hpp"
#include "tricorn/potential.hpp"

namespace tricorn {

// Rational angle theta = num/den in Q/Z, kept reduced with 0 <= num < den.
struct Angle {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Angle of(std::int64_t num, std::int64_t den) {
        if (den <= 0) throw std::invalid_argument("Angle: den must be positive");
        num %= den;
        if (num < 0) num += den;
        std::int64_t g = std::gcd(num, den);
        return {num / g, den / g};
    }

    double turns() const { return static_cast<double>(num) / static_cast<double>(den); }

    // One anti-holomorphic step doubles the angle with a sign flip:
    // theta -> -2 theta (mod 1).
    Angle doubled_anti() const {
        std::int64_t n = (-2 * num) % den;
        if (n < 0) n += den;
        return {n, den};
    }
};

struct RaySample {
    double potential;
    complex point;
};

struct RayTrace {
    enum class Kind { dynamical, parameter };

    Kind kind = Kind::dynamical;
    complex c{};  // only meaningful for dynamical rays
    Angle angle{};
    std::vector<RaySample> samples;
    std::optional<complex> landing;
    bool truncated = false;

    void write_csv(std::ostream& os) const {
        os << "potential,re,im\n";
        for (const auto& s : samples)
            os << s.potential << ',' << s.point.real() << ',' << s.point.imag() << '\n';
    }
};

namespace detail {

inline constexpr double kRayDeepPotential = 18.5;  // e^18.5 ~ 1.1e8: Phi ~ id beyond this

// Pullback level for potential g: smallest k with 2^k g >= kRayDeepPotential.
inline int ray_level(double g) {
    int k = 0;
    while (std::ldexp(g, k) < kRayDeepPotential && k < 1100) ++k;
    return k;
}

inline Angle angle_at_level(Angle theta, int k) {
    for (int i = 0; i < k; ++i) theta = theta.doubled_anti();
    return theta;
}

inline complex ray_target(double g, Angle theta_k) {
    double arg = 2.0 * 3.141592653589793238462643 * theta_k.turns();
    return std::exp(std::ldexp(g, 0)) * complex{std::cos(arg), std::sin(arg)};
}

// Newton solve f_c^k(z) = target from a warm start.  Returns nullopt on
// divergence.
inline std::optional<complex> ray_newton(complex c, int k, complex target, complex warm) {
    complex z = warm;
    for (int it = 0; it < 200; ++it) {
        OrbitDerivative od{z};
        bool overflow = false;
        for (int j = 0; j < k; ++j) {
            od.step(c);
            if (std::abs(od.value) > 1e100) { overflow = true; break; }
        }
        if (overflow || od.deriv == complex{}) return std::nullopt;
        complex dz = od.newton_delta(target);
        if (!is_finite(dz)) return std::nullopt;
        z += dz;
        if (std::abs(dz) <= 1e-13 * std::max(1.0, std::abs(z))) return z;
        if (std::abs(z) > 1e12) return std::nullopt;
    }
    return std::nullopt;
}

// Continuation driver shared by both ray kinds.  solve(g, warm) returns the
// ray point at potential g or nullopt; the driver subdivides the potential
// schedule when the solver fails or the step jumps farther than step_ceiling.
template <typename Solve>
inline void ray_continuation(RayTrace& trace, double g_hi, double g_lo, int steps_per_halving,
                             double step_ceiling, Solve&& solve) {
    if (!(g_hi > g_lo) || !(g_lo > 0.0)) throw std::invalid_argument("ray: need g_hi > g_lo > 0");
    if (steps_per_halving < 1) throw std::invalid_argument("ray: steps_per_halving >= 1");

    double g_start = std::max(g_hi, kRayDeepPotential * 1.0001);
    complex current = ray_target(g_start, angle_at_level(trace.angle, 0));
    // ray_level(g_start) == 0, so the asymptotic point solves exactly.
    double g = g_start;
    const double factor = std::pow(2.0, -1.0 / steps_per_halving);

    auto advance = [&](double g_next) -> bool {
        // go from (g, current) to g_next, subdividing as needed; the jump
        // guard scales with |z| so the descent from the deep asymptote works
        double from = g;
        complex at = current;
        int guard = 0;
        while (from > g_next * (1.0 + 1e-15)) {
            double target_g = g_next;
            int depth = 0;
            for (;;) {
                auto z = solve(target_g, at);
                if (z && std::abs(*z - at) <= step_ceiling * std::max(1.0, std::abs(at))) {
                    at = *z;
                    from = target_g;
                    break;
                }
                target_g = std::sqrt(from * target_g);  // geometric midpoint
                if (++depth > 60 || ++guard > 4000) return false;
            }
        }
        g = g_next;
        current = at;
        return true;
    };

    if (g_hi < g_start) {
        if (!advance(g_hi)) { trace.truncated = true; return; }
    }
    trace.samples.push_back({g, current});
    while (g > g_lo * (1.0 + 1e-12)) {
        double g_next = std::max(g * factor, g_lo);
        if (!advance(g_next)) { trace.truncated = true; break; }
        trace.samples.push_back({g, current});
    }

    // Landing estimate: Cauchy tail over the last 20 samples.
    if (!trace.truncated && g_lo <= 1e-6 && trace.samples.size() >= 20) {
        std::size_t n = trace.samples.size();
        double worst = 0.0;
        for (std::size_t i = n - 20; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                worst = std::max(worst, std::abs(trace.samples[i].point - trace.samples[j].point));
        if (worst < 1e-8) trace.landing = trace.samples.back().point;
    }
}

}  // namespace detail

// Dynamical ray R_c(theta), traced from potential g_hi down to g_lo by
// pullback continuation: the point at potential g solves
// f_c^k(z) = Phi^{-1}_{near infinity}(exp(2^k g + 2 pi i (-2)^k theta)).
inline RayTrace trace_dynamical_ray(complex c, Angle theta, double g_hi, double g_lo,
                                    int steps_per_halving = 16, double step_ceiling = 1.0) {
    require_finite(c, "trace_dynamical_ray: c");
    RayTrace trace;
    trace.kind = RayTrace::Kind::dynamical;
    trace.c = c;
    trace.angle = theta;
    detail::ray_continuation(trace, g_hi, g_lo, steps_per_halving, step_ceiling,
                             [&](double g, complex warm) -> std::optional<complex> {
                                 int k = detail::ray_level(g);
                                 complex target =
                                     detail::ray_target(std::ldexp(g, k), detail::angle_at_level(theta, k));
                                 return detail::ray_newton(c, k, target, warm);
                             });
    return trace;
}

namespace detail {

// 2x2 real Newton for the parameter-ray equation f_c^k(c) = target.
// Phi* is real-analytic but not holomorphic, so a complex Newton step is
// invalid; the Jacobian is taken by central finite differences.
inline std::optional<complex> param_ray_newton(int k, complex target, complex warm) {
    complex cc = warm;
    auto orbit_pt = [&](complex cp) {
        complex z = cp;
        for (int j = 0; j < k; ++j) {
            z = std::conj(z) * std::conj(z) + cp;
            if (std::abs(z) > 1e200) return complex{1e200, 0.0};
        }
        return z;
    };
    for (int it = 0; it < 60; ++it) {
        complex r = orbit_pt(cc) - target;
        double h = 1e-7 * std::max(1.0, std::abs(cc));
        complex fx = (orbit_pt(cc + h) - orbit_pt(cc - h)) / (2.0 * h);
        complex fy = (orbit_pt(cc + complex{0, h}) - orbit_pt(cc - complex{0, h})) / (2.0 * h);
        double det = fx.real() * fy.imag() - fy.real() * fx.imag();
        if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
        double dx = (r.real() * fy.imag() - fy.real() * r.imag()) / det;
        double dy = (fx.real() * r.imag() - r.real() * fx.imag()) / det;
        complex dc{-dx, -dy};
        if (!is_finite(dc)) return std::nullopt;
        cc += dc;
        if (std::abs(dc) <= 1e-13 * std::max(1.0, std::abs(cc))) return cc;
        if (std::abs(cc) > 1e12) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

// Parameter ray R(theta) of the tricorn: continuation of Phi*(c) = target.
inline RayTrace trace_parameter_ray(Angle theta, double g_hi, double g_lo,
                                    int steps_per_halving = 16, double step_ceiling = 1.0) {
    RayTrace trace;
    trace.kind = RayTrace::Kind::parameter;
    trace.angle = theta;
    detail::ray_continuation(trace, g_hi, g_lo, steps_per_halving, step_ceiling,
                             [&](double g, complex warm) -> std::optional<complex> {
                                 int k = detail::ray_level(g);
                                 complex target =
                                     detail::ray_target(std::ldexp(g, k), detail::angle_at_level(theta, k));
                                 return detail::param_ray_newton(k, target, warm);
                             });
    return trace;
}

}  // namespace tricorn
