#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace tricorn {

using complex = std::complex<double>;

// Numerical failure that is data-dependent (Newton divergence, chart
// undefined, fit breakdown).  Precondition violations throw
// std::invalid_argument instead.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(complex z, const char* what) {
    if (!is_finite(z)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

inline double abs2(complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Solve a*dz + b*conj(dz) = r for dz (real-linear 2x2 system in complex form).
// Singular when |a| == |b|.
inline complex real_linear_solve(complex a, complex b, complex r) {
    double det = abs2(a) - abs2(b);
    if (det == 0.0) throw numerical_error("real_linear_solve: singular");
    return (std::conj(a) * r - b * std::conj(r)) / det;
}

// ULP distance between doubles, for tests that assert "within n ulps".
inline double ulp_of(double x) {
    double ax = std::abs(x);
    if (ax < std::numeric_limits<double>::min()) return std::numeric_limits<double>::denorm_min();
    return std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
}

}  // namespace tricorn
