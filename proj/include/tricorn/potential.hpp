#pragma once

#include <cmath>
#include <vector>

#include "tricorn/core.hpp"

namespace tricorn {

struct GreenEstimate {
    double value = 0.0;  // 0 when interior/undetermined at this depth
    int depth = 0;       // iterations actually used
    double resid = 0.0;  // last-step increment of the truncated limit
    bool escaped = false;
};

// Green potential G(z) = lim 2^-k log|f_c^k(z)|.  G(f_c(z)) = 2 G(z).
inline GreenEstimate green_potential(complex c, complex z, int depth = 100) {
    require_finite(c, "green_potential: c");
    require_finite(z, "green_potential: z");
    double radius = 2.0 + std::abs(c);
    AntiQuadratic f{c};
    double value = 0.0, resid = 0.0;
    bool escaped = false;
    for (int k = 0; k <= depth; ++k) {
        double m = std::abs(z);
        if (m > radius) {
            double v = std::ldexp(std::log(m), -k);
            resid = escaped ? std::abs(v - value) : v;
            value = v;
            escaped = true;
            if (m > 1e150) return {value, k, resid, true};
        }
        if (k == depth) return escaped ? GreenEstimate{value, depth, resid, true}
                                       : GreenEstimate{0.0, depth, 0.0, false};
        z = f(z);
    }
    return {0.0, depth, 0.0, false};
}

namespace detail {

// Correction factors u_j with Phi(z_j) = z_j * u_j, pulled back from u = 1 at
// a large-modulus orbit point:
//   conj(u_j)^2 = (1 + c/conj(z_j)^2) * u_{j+1}.
// Principal square roots track the branch as long as the argument stays off
// the negative real axis; approaching it means z is too close to K or to the
// angle-1/2 cut.
inline complex boettcher_factor(complex c, const std::vector<complex>& orbit, std::size_t upto) {
    complex u{1.0, 0.0};
    for (std::size_t j = upto; j-- > 0;) {
        complex zc = std::conj(orbit[j]);
        complex prod = (1.0 + c / (zc * zc)) * u;
        if (prod.real() < 0.0 && std::abs(prod.imag()) < -0.25 * prod.real())
            throw numerical_error("boettcher: branch ambiguity (near K or the 1/2-angle cut)");
        u = std::conj(std::sqrt(prod));
    }
    return u;
}

inline constexpr double kBoettcherSeedModulus = 1e8;

}  // namespace detail

// Boettcher coordinate Phi_c(z), normalized Phi(z)/z -> 1 at infinity.
// Satisfies Phi(f_c(z)) = conj(Phi(z))^2 to round-off by construction.
inline complex boettcher(complex c, complex z, int depth = 200) {
    require_finite(c, "boettcher: c");
    require_finite(z, "boettcher: z");
    AntiQuadratic f{c};
    std::vector<complex> orbit{z};
    for (int k = 0; k < depth && std::abs(orbit.back()) < detail::kBoettcherSeedModulus; ++k)
        orbit.push_back(f(orbit.back()));
    if (std::abs(orbit.back()) < detail::kBoettcherSeedModulus)
        throw numerical_error("boettcher: orbit did not reach the seed radius (z in or near K?)");
    return z * detail::boettcher_factor(c, orbit, orbit.size() - 1);
}

}  // namespace tricorn
