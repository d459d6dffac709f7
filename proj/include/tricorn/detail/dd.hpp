#pragma once

#include <cmath>
#include <complex>

// Minimal double-double (compensated) arithmetic.  Used only where a single
// double cannot hold the needed resolution: the c_n root polish and the
// rescaled return-map orbit, where the parameter offset rho_n(t) ~ 16^{-2n-1}
// sits ~2^{-4(2n+1)} below the representable grid at |c| ~ 2.
// Plain IEEE doubles throughout, no extended precision types.

namespace tricorn::detail {

struct dd {
    double hi = 0.0, lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd sub(dd a, dd b) { return add(a, {-b.hi, -b.lo}); }

inline dd mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = sub(a, mul(b, dd(q1)));
    double q2 = r.hi / b.hi;
    r = sub(r, mul(b, dd(q2)));
    double q3 = r.hi / b.hi;
    return quick_two_sum(q1, q2 + q3);
}

struct ddc {
    dd re, im;

    ddc() = default;
    ddc(dd r, dd i) : re(r), im(i) {}
    ddc(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline ddc add(ddc a, ddc b) { return {add(a.re, b.re), add(a.im, b.im)}; }
inline ddc conj(ddc a) { return {a.re, {-a.im.hi, -a.im.lo}}; }

inline ddc mul(ddc a, ddc b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)),
            add(mul(a.re, b.im), mul(a.im, b.re))};
}

}  // namespace tricorn::detail
