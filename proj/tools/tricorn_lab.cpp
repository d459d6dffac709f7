// tricorn-lab: command-line driver for the anti-holomorphic quadratic family.
// Exit codes: 0 success, 1 usage/runtime error, 2 a validation check missed
// its tolerance.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tricorn/io.hpp"

using tricorn::complex;
using tricorn::json;

namespace {

constexpr int kExitValidation = 2;

struct Out {
    std::string path;  // empty: stdout

    void write_text(const std::string& body) const {
        if (path.empty()) {
            std::cout << body;
            return;
        }
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open " + path);
        os << body;
    }
    void write_json(const json& j) const { write_text(j.dump(2) + "\n"); }
};

std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    p.replace_extension(suffix);
    return p.string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale numerics for the tricorn family conj(z)^2 + c"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: TRICORN_LAB_THREADS or hardware)");

    // ---- render ----------------------------------------------------------
    auto* render = app.add_subcommand("render", "escape-time image of the connectedness locus");
    double center_re = 0.0, center_im = 0.0, width = 4.0, height = 0.0;
    int px = 512, max_iter = 1000;
    std::string out;
    render->add_option("--center-re", center_re);
    render->add_option("--center-im", center_im);
    render->add_option("--width", width);
    render->add_option("--height", height, "defaults to width");
    render->add_option("--px", px);
    render->add_option("--max-iter", max_iter);
    render->add_option("--out", out, "output PPM path")->required();

    // ---- julia -----------------------------------------------------------
    auto* julia = app.add_subcommand("julia", "escape-time image of a filled Julia set");
    double jc_re = 0.0, jc_im = 0.0;
    julia->add_option("--c-re", jc_re)->required();
    julia->add_option("--c-im", jc_im);
    julia->add_option("--center-re", center_re);
    julia->add_option("--center-im", center_im);
    julia->add_option("--width", width);
    julia->add_option("--height", height);
    julia->add_option("--px", px);
    julia->add_option("--max-iter", max_iter);
    julia->add_option("--out", out)->required();

    // ---- baby ------------------------------------------------------------
    auto* baby = app.add_subcommand("baby", "rescaled parameter window around c_n (axes in t)");
    int nn = 2;
    double t_width = 0.1;
    baby->add_option("--n", nn)->required();
    baby->add_option("--t-width", t_width);
    baby->add_option("--px", px);
    baby->add_option("--max-iter", max_iter);
    baby->add_option("--out", out)->required();

    // ---- ray / param-ray --------------------------------------------------
    auto* ray = app.add_subcommand("ray", "trace a dynamical ray R_c(theta)");
    std::int64_t angle_num = 0, angle_den = 1;
    double g_hi = 1.0, g_lo = 1e-6;
    int steps = 16;
    ray->add_option("--c-re", jc_re)->required();
    ray->add_option("--c-im", jc_im);
    ray->add_option("--angle-num", angle_num)->required();
    ray->add_option("--angle-den", angle_den)->required();
    ray->add_option("--g-hi", g_hi);
    ray->add_option("--g-lo", g_lo);
    ray->add_option("--steps", steps, "steps per potential halving");
    ray->add_option("--out", out, "JSON output path (CSV written alongside)");

    auto* pray = app.add_subcommand("param-ray", "trace a parameter ray of the tricorn");
    pray->add_option("--angle-num", angle_num)->required();
    pray->add_option("--angle-den", angle_den)->required();
    pray->add_option("--g-hi", g_hi);
    pray->add_option("--g-lo", g_lo);
    pray->add_option("--steps", steps);
    pray->add_option("--out", out);

    // ---- cn ----------------------------------------------------------------
    auto* cn = app.add_subcommand("cn", "the sequence c_n of real centers accumulating at -2");
    int n_max = 5;
    cn->add_option("--n-max", n_max);
    cn->add_option("--out", out);

    // ---- koenigs -----------------------------------------------------------
    auto* koe = app.add_subcommand("koenigs", "Koenigs chart summary at a real parameter");
    double kc_re = -2.0, kc_im = 0.0;
    koe->add_option("--c-re", kc_re);
    koe->add_option("--c-im", kc_im);
    koe->add_option("--out", out);

    // ---- bconst ------------------------------------------------------------
    auto* bconst = app.add_subcommand("bconst", "measure A2, b0, b0* at c = -2");
    bconst->add_option("--out", out);

    // ---- scaling -----------------------------------------------------------
    auto* scaling = app.add_subcommand("scaling", "rescaled-return convergence table");
    int n_lo = 2, n_hi = 5;
    scaling->add_option("--n-lo", n_lo);
    scaling->add_option("--n-hi", n_hi);
    scaling->add_option("--out", out, "CSV output path (JSON written alongside)");

    // ---- aspect ------------------------------------------------------------
    auto* aspect = app.add_subcommand("aspect", "rho_n stretch ratio");
    double expect = 1.8, tol = -1.0;
    aspect->add_option("--n", nn);
    aspect->add_option("--expect", expect);
    aspect->add_option("--tol", tol, "validate |ratio - expect| <= tol");
    aspect->add_option("--out", out);

    // ---- parabolic ---------------------------------------------------------
    auto* parab = app.add_subcommand("parabolic", "parabolic point data and critical Ecalle height");
    int period = 1;
    double phi = 0.0, target_height = 0.0;
    bool have_phi = false;
    parab->add_option("--period", period)->required();
    auto* phi_opt = parab->add_option("--phi", phi, "deltoid angle (period 1 closed form)");
    parab->add_option("--target-height", target_height, "arc point with this critical height");
    parab->add_option("--seed-re", center_re, "component center seed (arc search)");
    parab->add_option("--seed-im", center_im);
    parab->add_option("--out", out);
    (void)have_phi;

    // ---- access ------------------------------------------------------------
    auto* access = app.add_subcommand("access", "strip-escape accessibility report");
    double epsilon = 0.05;
    int grid_re = 32, grid_im = 17, budget = 100000;
    access->add_option("--period", period)->required();
    auto* aphi = access->add_option("--phi", phi, "deltoid angle (period 1)");
    access->add_option("--target-height", target_height);
    access->add_option("--seed-re", center_re);
    access->add_option("--seed-im", center_im);
    access->add_option("--epsilon", epsilon);
    access->add_option("--grid-re", grid_re);
    access->add_option("--grid-im", grid_im);
    access->add_option("--budget", budget);
    access->add_option("--out", out);

    // ---- rl-fit ------------------------------------------------------------
    auto* rlfit = app.add_subcommand("rl-fit", "vertical-extent scaling exponent near -2");
    std::size_t count = 200000;
    std::uint64_t seed = 17;
    rlfit->add_option("--count", count);
    rlfit->add_option("--seed", seed);
    rlfit->add_option("--out", out);

    // ---- argquant ----------------------------------------------------------
    auto* argq = app.add_subcommand("argquant", "argument quantization in a puzzle band");
    int mm = 2;
    argq->add_option("--n", nn)->required();
    argq->add_option("--m", mm)->required();
    argq->add_option("--count", count);
    argq->add_option("--seed", seed);
    argq->add_option("--out", out);

    // ---- interval ----------------------------------------------------------
    auto* interval = app.add_subcommand("interval", "image of [-1,1] under kappa at -2");
    double grid_step = 1e-3;
    interval->add_option("--grid-step", grid_step);
    interval->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        Out sink{out};
        if (height <= 0.0) height = width;

        if (*render) {
            tricorn::Window w{complex{center_re, center_im}, width, height, px, px};
            auto img = tricorn::render_parameter(w, max_iter, threads);
            tricorn::write_image(out, img, "parameter");
            return 0;
        }
        if (*julia) {
            tricorn::Window w{complex{center_re, center_im}, width, height, px, px};
            auto img = tricorn::render_dynamical(complex{jc_re, jc_im}, w, max_iter, threads);
            tricorn::write_image(out, img, "dynamical", {{"c", tricorn::to_json(complex{jc_re, jc_im})}});
            return 0;
        }
        if (*baby) {
            auto fr = tricorn::build_frame(nn);
            tricorn::Window w{complex{0, 0}, t_width, t_width, px, px};
            auto img = tricorn::render_baby_window(fr, w, max_iter, threads);
            tricorn::write_image(out, img, "baby", {{"n", nn}, {"c_n", fr.c_n}});
            return 0;
        }
        if (*ray || *pray) {
            tricorn::RayTrace trace =
                *ray ? tricorn::trace_dynamical_ray(complex{jc_re, jc_im},
                                                    tricorn::Angle::of(angle_num, angle_den), g_hi,
                                                    g_lo, steps)
                     : tricorn::trace_parameter_ray(tricorn::Angle::of(angle_num, angle_den), g_hi,
                                                    g_lo, steps);
            sink.write_json(tricorn::to_json(trace));
            if (!out.empty()) {
                std::ofstream csv(sibling(out, ".csv"));
                trace.write_csv(csv);
            }
            return trace.truncated ? kExitValidation : 0;
        }
        if (*cn) {
            auto recs = tricorn::cn_table(n_max);
            json j = json::array();
            bool ok = true;
            for (const auto& rec : recs) {
                j.push_back(tricorn::to_json(rec));
                ok = ok && rec.orbit_check;
            }
            sink.write_json(j);
            if (!out.empty()) {
                std::ofstream csv(sibling(out, ".csv"));
                tricorn::write_cn_csv(csv, recs);
            }
            return ok ? 0 : kExitValidation;
        }
        if (*koe) {
            auto ch = tricorn::build_chart(complex{kc_re, kc_im});
            sink.write_json(tricorn::to_json(ch));
            return 0;
        }
        if (*bconst) {
            complex A2 = tricorn::coefficient_A(complex{-2, 0}, 2);
            auto [b0, b0s] = tricorn::estimate_B_constants();
            sink.write_json(json{{"a2", tricorn::to_json(A2)},
                                 {"b0", tricorn::to_json(b0)},
                                 {"b0_star", tricorn::to_json(b0s)},
                                 {"limit_coefficient", tricorn::abs2(b0) - tricorn::abs2(b0s)}});
            return 0;
        }
        if (*scaling) {
            auto rep = tricorn::convergence_report(n_lo, n_hi);
            if (out.empty()) {
                tricorn::write_convergence_csv(std::cout, rep);
            } else {
                std::ofstream csv(out);
                tricorn::write_convergence_csv(csv, rep);
                std::ofstream js(sibling(out, ".json"));
                js << tricorn::to_json(rep).dump(2) << '\n';
            }
            for (const auto& row : rep.rows)
                if (row.ratio && *row.ratio >= 0.7) return kExitValidation;
            return 0;
        }
        if (*aspect) {
            auto fr = tricorn::build_frame(nn);
            double a = tricorn::aspect_ratio(fr);
            sink.write_json(json{{"n", nn}, {"aspect_ratio", a}});
            if (tol >= 0.0 && std::abs(a - expect) > tol) return kExitValidation;
            return 0;
        }
        if (*parab || *access) {
            tricorn::ParabolicPoint pp;
            bool by_phi = (*parab && phi_opt->count()) || (*access && aphi->count());
            if (period == 1 && by_phi) {
                pp = tricorn::deltoid_parabolic(phi);
            } else {
                complex seed_c{center_re, center_im};
                if (*access || *parab) {
                    if (period == 1 && seed_c == complex{})
                        seed_c = complex{0, 0};
                    if (period == 3 && seed_c == complex{}) {
                        seed_c = complex{tricorn::solve_c_n(0).c_n, 0.0};
                    }
                }
                pp = tricorn::find_parabolic_on_arc(period, seed_c, target_height);
            }
            if (*parab) {
                double e_crit = tricorn::critical_ecalle_height(pp);
                sink.write_json(json{{"c", tricorn::to_json(pp.c)},
                                     {"period", pp.period},
                                     {"x", tricorn::to_json(pp.x)},
                                     {"petal_coeff", tricorn::to_json(pp.petal_coeff)},
                                     {"e_crit", e_crit}});
                return 0;
            }
            auto rep = tricorn::accessibility_test(pp, epsilon, grid_re, grid_im, budget, threads);
            sink.write_json(tricorn::to_json(rep));
            return rep.accessible_evidence ? 0 : kExitValidation;
        }
        if (*rlfit) {
            auto fit = tricorn::rl_scaling_fit(tricorn::default_rl_radii(), count, seed, threads);
            sink.write_json(tricorn::to_json(fit));
            bool ok = fit.slope >= 0.4 && fit.slope <= 0.6 && fit.r2 >= 0.95;
            return ok ? 0 : kExitValidation;
        }
        if (*argq) {
            auto rep = tricorn::argument_quantization(nn, mm, count, seed, threads);
            sink.write_json(tricorn::to_json(rep));
            return rep.band_ok ? 0 : kExitValidation;
        }
        if (*interval) {
            auto iv = tricorn::koenigs_interval_check(grid_step);
            sink.write_json(json{{"lo", iv.lo}, {"hi", iv.hi}});
            bool ok = std::abs(iv.lo - 4.0 / 9.0) < 1e-8 && std::abs(iv.hi - 16.0 / 9.0) < 1e-8;
            return ok ? 0 : kExitValidation;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const tricorn::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
