#pragma once

#include <cmath>
#include <stdexcept>

#include "tricorn/complex_util.hpp"

namespace tricorn {

// The anti-holomorphic quadratic f_c(z) = conj(z)^2 + c.
struct AntiQuadratic {
    complex c;

    complex operator()(complex z) const { return std::conj(z) * std::conj(z) + c; }
};

inline complex apply(const AntiQuadratic& f, complex z) {
    require_finite(f.c, "apply: c");
    require_finite(z, "apply: z");
    return f(z);
}

inline complex apply(complex c, complex z) { return tricorn::apply(AntiQuadratic{c}, z); }

// Second iterate (z^2 + conj(c))^2 + c, holomorphic in z.
inline complex apply_second(complex c, complex z) {
    complex w = z * z + std::conj(c);
    return w * w + c;
}

inline complex apply_iter(complex c, complex z, int k) {
    AntiQuadratic f{c};
    for (int i = 0; i < k; ++i) z = f(z);
    return z;
}

// Orbit point together with its only nonzero Wirtinger derivative w.r.t. the
// starting point.  After an even number of steps the value is holomorphic in
// z0 (deriv = d/dz0); after an odd number it is anti-holomorphic
// (deriv = d/dconj(z0)).
struct OrbitDerivative {
    complex value;
    complex deriv{1.0, 0.0};
    bool anti = false;

    void step(complex c) {
        deriv = 2.0 * std::conj(value) * std::conj(deriv);
        value = std::conj(value) * std::conj(value) + c;
        anti = !anti;
    }

    // Newton update for solving f_c^k(z0) = target.
    complex newton_delta(complex target) const {
        complex r = (value - target) / deriv;
        return anti ? -std::conj(r) : -r;
    }
};

struct EscapeResult {
    bool escaped = false;
    int iterations = 0;      // applications of f_c performed before the verdict
    double final_modulus = 0.0;
    double potential = 0.0;  // 2^-iterations * log|z| when escaped, else 0
};

inline EscapeResult escape_time(complex c, complex z0, int max_iter, double radius) {
    require_finite(c, "escape_time: c");
    require_finite(z0, "escape_time: z0");
    if (max_iter < 1) throw std::invalid_argument("escape_time: max_iter must be >= 1");
    if (radius < 2.0 + std::abs(c)) throw std::invalid_argument("escape_time: radius below 2+|c|");

    AntiQuadratic f{c};
    complex z = z0;
    for (int k = 0; k <= max_iter; ++k) {
        double m = std::abs(z);
        if (m > radius) {
            return {true, k, m, std::ldexp(std::log(m), -k)};
        }
        if (k == max_iter) break;
        z = f(z);
    }
    return {false, max_iter, std::abs(z), 0.0};
}

inline constexpr int kMemberMaxIter = 10000;

inline bool tricorn_member(complex c, int max_iter = kMemberMaxIter) {
    if (max_iter < 1) throw std::invalid_argument("tricorn_member: max_iter must be >= 1");
    return !escape_time(c, complex{0.0, 0.0}, max_iter, 2.0 + std::abs(c)).escaped;
}

// Iteration count variant used by the renderer: 0 = did not escape,
// otherwise 1 + (iterations before leaving the radius).
inline int escape_count(complex c, complex z0, int max_iter) {
    double radius = 2.0 + std::abs(c);
    double r2 = radius * radius;
    complex z = z0;
    for (int k = 0; k <= max_iter; ++k) {
        if (abs2(z) > r2) return k + 1;
        z = std::conj(z) * std::conj(z) + c;
    }
    return 0;
}

}  // namespace tricorn
