#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tricorn/core.hpp"
#include "tricorn/detail/parallel.hpp"
#include "tricorn/scaling.hpp"

namespace tricorn {

struct Window {
    complex center;
    double width = 4.0;
    double height = 4.0;
    int px_w = 512;
    int px_h = 512;

    void validate() const {
        if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("Window: size > 0");
        if (px_w < 1 || px_h < 1 || static_cast<long long>(px_w) * px_h > 100000000ll)
            throw std::invalid_argument("Window: pixel count in [1, 1e8]");
    }

    // row 0 is the top scanline
    complex pixel(int ix, int iy) const {
        return {center.real() + ((ix + 0.5) / px_w - 0.5) * width,
                center.imag() + (0.5 - (iy + 0.5) / px_h) * height};
    }
};

// Row-major escape counts; 0 marks interior (did not escape within max_iter).
struct ImageGrid {
    Window window;
    int max_iter = 0;
    std::vector<int> values;

    int at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * window.px_w + ix]; }
};

namespace detail {

template <typename PerPixel>
inline ImageGrid render_tiles(const Window& win, int max_iter, PerPixel&& pp, int threads) {
    win.validate();
    if (max_iter < 1) throw std::invalid_argument("render: max_iter >= 1");
    ImageGrid img;
    img.window = win;
    img.max_iter = max_iter;
    img.values.assign(static_cast<std::size_t>(win.px_w) * win.px_h, 0);
    constexpr int kTile = 64;
    int tx = (win.px_w + kTile - 1) / kTile;
    int ty = (win.px_h + kTile - 1) / kTile;
    parallel_for(static_cast<std::size_t>(tx) * ty, [&](std::size_t t) {
        int x0 = static_cast<int>(t % tx) * kTile;
        int y0 = static_cast<int>(t / tx) * kTile;
        for (int iy = y0; iy < std::min(y0 + kTile, win.px_h); ++iy)
            for (int ix = x0; ix < std::min(x0 + kTile, win.px_w); ++ix)
                img.values[static_cast<std::size_t>(iy) * win.px_w + ix] = pp(win.pixel(ix, iy));
    }, threads, 1);
    return img;
}

}  // namespace detail

inline ImageGrid render_parameter(const Window& win, int max_iter, int threads = 0) {
    return detail::render_tiles(win, max_iter,
                                [&](complex c) { return escape_count(c, complex{}, max_iter); },
                                threads);
}

inline ImageGrid render_dynamical(complex c, const Window& win, int max_iter, int threads = 0) {
    require_finite(c, "render_dynamical: c");
    return detail::render_tiles(win, max_iter,
                                [&](complex z) { return escape_count(c, z, max_iter); }, threads);
}

// Parameter image over c = c_n + rho_n(t), axes in t (so the baby component
// appears with the rho-anisotropy already divided out).
inline ImageGrid render_baby_window(const ScalingFrame& fr, const Window& t_window, int max_iter,
                                    int threads = 0) {
    return detail::render_tiles(t_window, max_iter, [&](complex t) {
        complex rho = rho_n(fr, t);
        complex c{detail::add(fr.c_dd, detail::dd(rho.real())).value(), rho.imag()};
        return escape_count(c, complex{}, max_iter);
    }, threads);
}

// P6 binary PPM, grayscale by escape count: interior black, escaped pixels
// cycle through 55..254.
inline void write_ppm(const std::string& path, const ImageGrid& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_ppm: cannot open " + path);
    os << "P6\n" << img.window.px_w << ' ' << img.window.px_h << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(img.window.px_w) * 3);
    for (int iy = 0; iy < img.window.px_h; ++iy) {
        for (int ix = 0; ix < img.window.px_w; ++ix) {
            int v = img.at(ix, iy);
            unsigned char g = v == 0 ? 0 : static_cast<unsigned char>(55 + (v - 1) % 200);
            row[3 * ix] = row[3 * ix + 1] = row[3 * ix + 2] = g;
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace tricorn
