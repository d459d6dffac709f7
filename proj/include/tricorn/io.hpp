#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "tricorn/julia_geometry.hpp"
#include "tricorn/koenigs.hpp"
#include "tricorn/orbits.hpp"
#include "tricorn/parabolic.hpp"
#include "tricorn/rays.hpp"
#include "tricorn/render.hpp"
#include "tricorn/scaling.hpp"

namespace tricorn {

using json = nlohmann::json;

inline json to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const RayTrace& t) {
    json samples = json::array();
    for (const auto& s : t.samples)
        samples.push_back(json::array({s.potential, s.point.real(), s.point.imag()}));
    json j{{"kind", t.kind == RayTrace::Kind::dynamical ? "dynamical" : "parameter"},
           {"angle", {{"num", t.angle.num}, {"den", t.angle.den}}},
           {"samples", samples},
           {"landing", t.landing ? to_json(*t.landing) : json(nullptr)},
           {"truncated", t.truncated}};
    if (t.kind == RayTrace::Kind::dynamical) j["c"] = to_json(t.c);
    return j;
}

inline json to_json(const CnRecord& r) {
    return {{"n", r.n}, {"n_period", r.N}, {"c_n", r.c_n}, {"lambda_n", r.lambda_n},
            {"orbit_check", r.orbit_check}};
}

inline void write_cn_csv(std::ostream& os, const std::vector<CnRecord>& recs) {
    os << "n,N,c_n,lambda_n,orbit_check\n";
    for (const auto& r : recs)
        os << r.n << ',' << r.N << ',' << r.c_n << ',' << r.lambda_n << ','
           << (r.orbit_check ? 1 : 0) << '\n';
}

inline json to_json(const KoenigsChart& ch) {
    return {{"c", to_json(ch.c)},
            {"beta", to_json(ch.beta)},
            {"lambda", to_json(ch.lambda)},
            {"a_c", to_json(ch.a_c)},
            {"lin_radius", ch.lin_radius}};
}

inline json to_json(const ConvergenceReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row{{"n", r.n}, {"e_n", r.e_n}};
        row["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
        rows.push_back(row);
    }
    return {{"rows", rows}, {"fitted_ratio", rep.fitted_ratio}};
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
    os << "n,e_n,ratio\n";
    for (const auto& r : rep.rows) {
        os << r.n << ',' << r.e_n << ',';
        if (r.ratio) os << *r.ratio;
        os << '\n';
    }
}

inline json to_json(const AccessReport& r) {
    return {{"c", to_json(r.c)},
            {"period", r.period},
            {"e_crit", r.e_crit},
            {"epsilon", r.epsilon},
            {"grid", {{"re", r.grid_re}, {"im", r.grid_im}}},
            {"escape_fraction", r.escape_fraction},
            {"verdict", r.accessible_evidence},
            {"undetermined_count", r.undetermined}};
}

inline json to_json(const RlFit& f) {
    json samples = json::array();
    for (const auto& s : f.samples) samples.push_back(json::array({s.r, s.h}));
    return {{"slope", f.slope}, {"r2", f.r2}, {"samples", samples}};
}

inline json to_json(const ArgQuantReport& r) {
    return {{"n", r.band.n}, {"m", r.band.m}, {"r_lo", r.band.r_lo}, {"r_hi", r.band.r_hi},
            {"samples_in_band", r.samples_in_band}, {"max_dev", r.max_dev},
            {"histogram", r.histogram}, {"band_ok", r.band_ok}};
}

// little-endian float64 pairs + JSON sidecar
inline void write_cloud(const std::string& path, const PointCloud& cloud) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_cloud: cannot open " + path);
    for (complex p : cloud.points) {
        double re = p.real(), im = p.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof re);
        os.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
    json side{{"c", to_json(cloud.c)},
              {"count", cloud.points.size()},
              {"seed", cloud.seed},
              {"method", cloud.method == PointCloud::Method::inverse_iteration
                             ? "inverse_iteration"
                             : "boundary_scan"}};
    std::ofstream ms(path + ".json");
    ms << side.dump(2) << '\n';
}

inline json window_json(const Window& w) {
    return {{"center", to_json(w.center)}, {"width", w.width}, {"height", w.height},
            {"px_w", w.px_w}, {"px_h", w.px_h}};
}

inline void write_image(const std::string& path, const ImageGrid& img, const std::string& kind,
                        json extra = json::object()) {
    write_ppm(path, img);
    json side{{"window", window_json(img.window)}, {"max_iter", img.max_iter}, {"kind", kind}};
    side.update(extra);
    std::ofstream ms(path + ".json");
    ms << side.dump(2) << '\n';
}

}  // namespace tricorn
