#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tricorn/core.hpp"
#include "tricorn/detail/parallel.hpp"
#include "tricorn/koenigs.hpp"
#include "tricorn/orbits.hpp"
#include "tricorn/rng.hpp"

namespace tricorn {

struct PointCloud {
    enum class Method { inverse_iteration, boundary_scan };

    complex c;
    std::vector<complex> points;
    Method method = Method::inverse_iteration;
    std::uint64_t seed = 0;
};

namespace detail {

// preimages of w under f_c: conj(z)^2 = w - c
inline complex julia_preimage(complex c, complex w, bool sign) {
    complex s = std::sqrt(w - c);
    return std::conj(sign ? s : -s);
}

}  // namespace detail

// Random backward orbits from beta, 50-step burn-in, bit-reproducible under
// the counter RNG.
inline PointCloud sample_julia(complex c, std::size_t count, std::uint64_t seed,
                               int threads = 0) {
    require_finite(c, "sample_julia: c");
    if (count > 10000000) throw std::invalid_argument("sample_julia: count <= 1e7");
    constexpr std::size_t kWalkLen = 256;
    constexpr std::size_t kBurn = 50;
    const std::size_t walks = (count + kWalkLen - 1) / kWalkLen;

    PointCloud cloud;
    cloud.c = c;
    cloud.seed = seed;
    cloud.points.assign(count, complex{});
    complex beta = beta_fixed_point(c);
    CounterRng root{seed};

    detail::parallel_for(walks, [&](std::size_t w) {
        CounterRng rng = root.split(w);
        complex z = beta;
        for (std::size_t s = 0; s < kBurn; ++s)
            z = detail::julia_preimage(c, z, rng.coin(s));
        std::size_t base = w * kWalkLen;
        for (std::size_t s = 0; s < kWalkLen; ++s) {
            z = detail::julia_preimage(c, z, rng.coin(kBurn + s));
            if (base + s < count) cloud.points[base + s] = z;
        }
    }, threads, 1);
    return cloud;
}

// Symmetric Hausdorff distance between finite clouds, grid-bucketed nearest
// neighbor; exact for the clouds themselves.
inline double hausdorff_distance(const PointCloud& A, const PointCloud& B) {
    if (A.points.empty() || B.points.empty())
        throw std::invalid_argument("hausdorff_distance: empty cloud");

    struct Grid {
        double x0, y0, cell;
        int nx, ny;
        std::vector<std::vector<complex>> buckets;

        explicit Grid(const std::vector<complex>& pts) {
            double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
            for (complex p : pts) {
                xmin = std::min(xmin, p.real());
                xmax = std::max(xmax, p.real());
                ymin = std::min(ymin, p.imag());
                ymax = std::max(ymax, p.imag());
            }
            double diag = std::hypot(xmax - xmin, ymax - ymin);
            int target = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()))));
            cell = std::max(diag / target, 1e-12);
            x0 = xmin;
            y0 = ymin;
            nx = static_cast<int>((xmax - xmin) / cell) + 1;
            ny = static_cast<int>((ymax - ymin) / cell) + 1;
            buckets.resize(static_cast<std::size_t>(nx) * ny);
            for (complex p : pts) buckets[index(p)].push_back(p);
        }
        std::size_t index(complex p) const {
            int ix = std::min(nx - 1, std::max(0, static_cast<int>((p.real() - x0) / cell)));
            int iy = std::min(ny - 1, std::max(0, static_cast<int>((p.imag() - y0) / cell)));
            return static_cast<std::size_t>(iy) * nx + ix;
        }
        double nearest(complex p) const {
            int ix = std::min(nx - 1, std::max(0, static_cast<int>((p.real() - x0) / cell)));
            int iy = std::min(ny - 1, std::max(0, static_cast<int>((p.imag() - y0) / cell)));
            double best = 1e300;
            for (int r = 0;; ++r) {
                bool any = false;
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                        int jx = ix + dx, jy = iy + dy;
                        if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
                        any = true;
                        for (complex q : buckets[static_cast<std::size_t>(jy) * nx + jx])
                            best = std::min(best, std::abs(p - q));
                    }
                }
                if (best < 1e300 && best <= (r)*cell) return best;
                if (!any && r > std::max(nx, ny)) return best;
            }
        }
    };

    Grid ga(A.points), gb(B.points);
    double d_ab = 0.0, d_ba = 0.0;
    for (complex p : A.points) d_ab = std::max(d_ab, gb.nearest(p));
    for (complex p : B.points) d_ba = std::max(d_ba, ga.nearest(p));
    return std::max(d_ab, d_ba);
}

struct RlFitSample {
    double r;
    double h;  // max |Im z| over the sampled filled-Julia cloud at |c+2| = r
};

struct RlFit {
    double slope = 0.0;
    double r2 = 0.0;
    std::vector<RlFitSample> samples;
};

// Vertical-extent scaling of K(f_c) for c = -2 + r and c = -2 + ir:
// least-squares slope of log h against log r (expected ~ 1/2).
inline RlFit rl_scaling_fit(const std::vector<double>& radii, std::size_t count = 200000,
                            std::uint64_t seed = 17, int threads = 0) {
    if (radii.empty()) throw std::invalid_argument("rl_scaling_fit: radii empty");
    for (double r : radii)
        if (!(r >= 1e-7 && r <= 1e-1)) throw std::invalid_argument("rl_scaling_fit: radii out of range");

    RlFit fit;
    for (double r : radii) {
        double h = 0.0;
        int dir = 0;
        for (complex c : {complex{-2.0 + r, 0.0}, complex{-2.0, r}}) {
            PointCloud cloud = sample_julia(c, count, seed + static_cast<std::uint64_t>(dir++), threads);
            for (complex p : cloud.points) h = std::max(h, std::abs(p.imag()));
        }
        fit.samples.push_back({r, h});
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(fit.samples.size());
    for (const auto& s : fit.samples) {
        double x = std::log(s.r), y = std::log(s.h);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw numerical_error("rl_scaling_fit: degenerate abscissae");
    fit.slope = (n * sxy - sx * sy) / denom;
    double ssr = syy - sy * sy / n - fit.slope * fit.slope * (sxx - sx * sx / n);
    double sst = syy - sy * sy / n;
    fit.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    return fit;
}

inline std::vector<double> default_rl_radii() {
    return {1e-6, 3.16e-6, 1e-5, 3.16e-5, 1e-4, 3.16e-4, 1e-3, 3.16e-3, 1e-2};
}

struct BandSpec {
    int n = 0, m = 0;
    double r_lo = 0.0, r_hi = 0.0;
};

// Round band standing in for the depth-m puzzle annulus around 0:
// radii ~ Lambda^{-(1-2^-m) n}.  The per-depth constants were calibrated
// once at n = 4 from the sampled radii of the depth-m pullback points
// (their medians scale as the diameters law predicts, n-independent to
// three digits) and are frozen here.
inline BandSpec make_band(int n, int m) {
    if (n < 0 || n > 6 || m < 0 || m > 4) throw std::invalid_argument("make_band: n <= 6, m <= 4");
    static constexpr double kLo[5] = {0.20, 0.12, 0.10, 0.088, 0.080};
    static constexpr double kHi[5] = {0.80, 0.76, 0.30, 0.190, 0.150};
    const double lambda = 16.0;
    double scale = std::pow(lambda, -(1.0 - std::ldexp(1.0, -m)) * n);
    return {n, m, kLo[m] * scale, kHi[m] * scale};
}

struct ArgQuantReport {
    BandSpec band;
    int samples_in_band = 0;
    double max_dev = 0.0;
    std::vector<int> histogram;  // 64 bins over [0, pi/2^{m+1}]
    bool band_ok = false;        // enough samples to be meaningful
};

namespace detail {

// J-points at puzzle depth m around the critical point, by m rounds of the
// branch-targeted pullback f^{-N} = f^{-3} o F^{-n}: F^{-n} follows the
// beta branch (offset-space Newton from the Koenigs chart), f^{-3} follows
// the critical orbit x2 ~ beta, x1 = c, 0.  Random backward orbits almost
// never reach these depths: their harmonic measure is tiny.
inline std::vector<complex> band_pullback_points(const CnRecord& rec, int m,
                                                 std::size_t base_count, std::uint64_t seed,
                                                 int threads) {
    const complex c{rec.c_n, 0.0};
    KoenigsChart ch = build_chart(c);
    PointCloud cloud = sample_julia(c, base_count, seed, threads);

    std::vector<complex> pts;
    for (complex w : cloud.points)
        if (std::abs(w) > 0.08 && std::abs(w) < 2.5) pts.push_back(w);
    complex x2 = tricorn::apply(c, tricorn::apply(c, complex{}));

    for (int level = 0; level < m; ++level) {
        std::vector<complex> next;
        next.reserve(2 * pts.size());
        for (complex w : pts) {
            complex d = w - ch.beta;
            bool ok = true;
            for (int j = 0; j < rec.n && ok; ++j) {
                try {
                    d = chart_pull(ch, d);
                } catch (const numerical_error&) {
                    ok = false;
                }
            }
            if (!ok) continue;
            complex v = ch.beta + d;
            complex s2 = std::sqrt(v - c);
            complex u2 = std::abs(std::conj(s2) - x2) < std::abs(std::conj(-s2) - x2)
                             ? std::conj(s2)
                             : std::conj(-s2);
            complex s1 = std::sqrt(u2 - c);
            complex u1 = std::abs(std::conj(s1) - c) < std::abs(std::conj(-s1) - c)
                             ? std::conj(s1)
                             : std::conj(-s1);
            complex s0 = std::sqrt(u1 - c);
            next.push_back(std::conj(s0));
            next.push_back(std::conj(-s0));
        }
        pts = std::move(next);
    }
    return pts;
}

}  // namespace detail

// Deviation of arg z from the nearest multiple of pi/2^m over J(f_{c_n})
// points inside the band.
inline ArgQuantReport argument_quantization(int n, int m, std::size_t count = 2000000,
                                            std::uint64_t seed = 23, int threads = 0) {
    ArgQuantReport rep;
    rep.band = make_band(n, m);
    rep.histogram.assign(64, 0);
    CnRecord rec = solve_c_n(n);
    const double pi = 3.141592653589793238462643;
    const double sector = pi / std::ldexp(1.0, m);

    std::size_t base = std::clamp<std::size_t>(count / 8, 20000, 1250000);
    std::vector<complex> pts = detail::band_pullback_points(rec, m, base, seed, threads);
    for (complex p : pts) {
        double r = std::abs(p);
        if (r < rep.band.r_lo || r > rep.band.r_hi) continue;
        double a = std::arg(p);
        double frac = std::fmod(std::fmod(a, sector) + sector, sector);
        double dev = std::min(frac, sector - frac);
        rep.max_dev = std::max(rep.max_dev, dev);
        int bin = std::min(63, static_cast<int>(64.0 * dev / (sector / 2.0)));
        ++rep.histogram[static_cast<std::size_t>(bin)];
        ++rep.samples_in_band;
    }
    rep.band_ok = rep.samples_in_band >= 50;
    return rep;
}

struct IntervalCheck {
    double lo = 0.0;
    double hi = 0.0;
};

// Image of [-1, 1] under kappa_{-2}; the endpoints are 4/9 and 16/9.
inline IntervalCheck koenigs_interval_check(double grid_step = 1e-3) {
    if (!(grid_step > 0.0) || grid_step > 1e-3)
        throw std::invalid_argument("koenigs_interval_check: grid_step <= 1e-3");
    KoenigsChart ch = build_chart(complex{-2.0, 0.0});
    double lo = 1e300, hi = -1e300;
    for (double x = -1.0; x <= 1.0 + 0.5 * grid_step; x += grid_step) {
        double v = koenigs_eval(ch, complex{std::min(x, 1.0), 0.0}).real();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace tricorn
