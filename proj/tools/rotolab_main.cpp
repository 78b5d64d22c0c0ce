// rotolab: set-oriented analysis of annulus maps.
// Verbs: rotation | attractor | horseshoe | entropy | chains | pipeline
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotolab/attractor.hpp"
#include "rotolab/config.hpp"
#include "rotolab/entropy.hpp"
#include "rotolab/horseshoe.hpp"
#include "rotolab/parallel.hpp"
#include "rotolab/pipeline.hpp"
#include "rotolab/report.hpp"
#include "rotolab/rotation.hpp"

using namespace rotolab;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string config_path;
    std::string out_path = "report.json";
    std::string svg_path;
    std::string map_name = "twist";
    int vertical_n = 0;   // dissipative map family index
    int threads = 1;
};

pipeline::Params load_params(const Common& c) {
    pipeline::Params p;
    if (!c.config_path.empty()) apply_config(load_config(c.config_path), p);
    return p;
}

LiftedMap build_map(const Common& c, const pipeline::Params& p) {
    if (c.map_name == "twist") return integrable_twist();
    if (c.map_name == "synthetic") return synthetic_horseshoe();
    if (c.map_name == "f1") return pipeline::build_f1(p).map;
    if (c.map_name == "f2") return pipeline::build_f2(p).map;
    if (c.map_name == "final") return pipeline::build_final(p).map;
    if (c.map_name == "dissipative") {
        int n = c.vertical_n > 0 ? c.vertical_n : 16;
        return pipeline::build_dissipative(p, n).map;
    }
    throw ConfigError("unknown map family: " + c.map_name +
                      " (expected twist|synthetic|f1|f2|final|dissipative)");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_rotation(const Common& c, double band_lo, double band_hi, long n, int depth) {
    auto t0 = std::chrono::steady_clock::now();
    pipeline::Params p = load_params(c);
    LiftedMap F = build_map(c, p);
    GridSet K = GridSet::full_band(depth, Band{band_lo, band_hi});
    RotationParams rp;
    rp.n_orbit = n;
    rp.max_samples = p.rotation_samples;
    rp.seed = p.seed;
    rp.escape = Band{band_lo - 2.0, band_hi + 2.0};
    RotationInterval ri = rotation_interval(F, K, rp);
    json rep{{"schema", "rotolab.rotation.report/1"},
             {"map", F.label()},
             {"band", json{{"y_min", band_lo}, {"y_max", band_hi}}},
             {"rotation", report::rotation_interval(ri)}};
    report::write(c.out_path, rep, seconds_since(t0));
    std::printf("rotation interval [%.6f, %.6f] (n=%ld, samples=%d) -> %s\n",
                ri.lo, ri.hi, ri.n_orbit, ri.samples, c.out_path.c_str());
    return 0;
}

int run_attractor(const Common& c, int depth) {
    auto t0 = std::chrono::steady_clock::now();
    pipeline::Params p = load_params(c);
    if (depth > 0) p.depth = depth;
    LiftedMap F = build_map(c, p);
    AttractorParams ap;
    ap.trap = p.trap;
    ap.band = p.band;
    ap.depth_start = p.depth_start;
    ap.depth = p.depth;
    ap.max_boxes = p.max_boxes;
    ap.stop_frac = 0.002;
    AttractorResult ar = attractor_approx(F, ap);
    ComplementAnalysis ca = analyze_complement(ar.cover, p.band);
    double ylo, yhi;
    ar.cover.y_extent(ylo, yhi);
    json rep{{"schema", "rotolab.attractor.report/1"},
             {"map", F.label()},
             {"depth", ar.reached_depth},
             {"boxes", ar.cover.count()},
             {"sweeps", ar.sweeps},
             {"budget_exceeded", ar.budget_exceeded},
             {"y_lo", ylo},
             {"y_hi", yhi},
             {"complement", report::complement(ca)}};
    report::write(c.out_path, rep, seconds_since(t0));
    if (!c.svg_path.empty()) ar.cover.write_svg(c.svg_path, p.trap);
    std::printf("attractor cover: %zu boxes at depth %d, essential=%s -> %s\n",
                ar.cover.count(), ar.reached_depth, ca.essential ? "true" : "false",
                c.out_path.c_str());
    return ar.budget_exceeded ? 2 : 0;
}

int run_horseshoe(const Common& c, double x_left, double x_right, int depth,
                  long n_max, int j_max) {
    auto t0 = std::chrono::steady_clock::now();
    pipeline::Params p = load_params(c);
    LiftedMap F = build_map(c, p);
    GridSet A = GridSet::full_band(depth, Band{0.0, 1.0});
    auto wall = [&](double x) {
        GridSet D(depth);
        int i = static_cast<int>(std::floor(mod1(x) * (1 << depth)));
        for (int j = 0; j < (1 << depth); ++j) D.insert(GridBox{i, j});
        D.normalize();
        return D;
    };
    AdaptedRectangle R = adapted_rectangle(wall(x_left), wall(x_right), A);
    HorseshoeCertificate cert = find_horseshoe(F, R, n_max, j_max,
                                               MarkovParams{p.band, p.max_boxes});
    json rep{{"schema", "rotolab.horseshoe.report/1"},
             {"map", F.label()},
             {"depth", depth},
             {"margin_boxes", 1},
             {"certificate", report::certificate(cert)}};
    report::write(c.out_path, rep, seconds_since(t0));
    std::printf("horseshoe certificate: %s", cert.found ? "found" : "not found");
    if (cert.found)
        std::printf(" (m=%d, n0=%ld, entropy >= %.6f)", cert.m, cert.n, cert.entropy_lower);
    std::printf(" -> %s\n", c.out_path.c_str());
    return cert.found ? 0 : 2;
}

int run_entropy(const Common& c, long n, double band_lo, double band_hi, int depth) {
    auto t0 = std::chrono::steady_clock::now();
    pipeline::Params p = load_params(c);
    LiftedMap F = build_map(c, p);
    GridSet K = GridSet::full_band(depth, Band{band_lo, band_hi});
    NormGrowthParams np;
    np.max_samples = p.entropy_samples;
    np.seed = p.seed;
    json table = json::array();
    double upper = 0.0;
    for (long k = 8; k <= n; k *= 2) {
        upper = norm_growth_upper(F, K, k, np);
        table.push_back(json{{"n", k}, {"upper", upper}});
    }
    SeparatedParams sp;
    sp.seed = p.seed;
    double lower_est = separated_set_estimate(F, K, sp);
    EntropyBracket br = bracket(0.0, sp.n, upper, n);
    json rep{{"schema", "rotolab.entropy.report/1"},
             {"map", F.label()},
             {"lower", br.lower},
             {"upper", br.upper},
             {"n", n},
             {"certificate_ref", nullptr},
             {"separated_estimate", lower_est},
             {"estimator_table", table}};
    report::write(c.out_path, rep, seconds_since(t0));
    std::printf("entropy bracket [%.6f, %.6f] at n=%ld -> %s\n",
                br.lower, br.upper, n, c.out_path.c_str());
    return 0;
}

int run_chains(const Common& c, std::vector<double> z, std::vector<double> w,
               double eps, double strip_lo, double strip_hi, int depth) {
    auto t0 = std::chrono::steady_clock::now();
    pipeline::Params p = load_params(c);
    LiftedMap F = build_map(c, p);
    GridSet K(depth);
    if (strip_hi > strip_lo) K = GridSet::full_band(depth, Band{strip_lo, strip_hi});
    ChainParams cp;
    cp.eps = eps;
    cp.depth = depth;
    cp.window = Band{0.0, 1.0};
    bool ok = chain_reachable(F, AnnulusPoint{z[0], z[1]}, AnnulusPoint{w[0], w[1]}, K, cp);
    json rep{{"schema", "rotolab.chains.report/1"},
             {"map", F.label()},
             {"z", z},
             {"w", w},
             {"eps", eps},
             {"jump_set_boxes", K.count()},
             {"reachable", ok}};
    report::write(c.out_path, rep, seconds_since(t0));
    std::printf("chain reachable: %s -> %s\n", ok ? "true" : "false", c.out_path.c_str());
    return ok ? 0 : 2;
}

int run_pipeline_verb(const Common& c) {
    pipeline::Params p = load_params(c);
    pipeline::RunResult r = c.vertical_n > 0 ? pipeline::run_dissipative(p, c.vertical_n)
                                             : pipeline::run_pipeline(p);
    std::ofstream out(c.out_path);
    out << r.report.dump(2) << "\n";
    if (!c.svg_path.empty()) r.cover.write_svg(c.svg_path, p.trap);
    std::printf("pipeline: %s", r.pass ? "PASS" : "FAIL");
    if (!r.pass) {
        for (auto& [name, ok] : r.report["clauses"].items())
            if (!ok.get<bool>()) std::printf(" [clause %s failed]", name.c_str());
    }
    std::printf(" -> %s\n", c.out_path.c_str());
    return r.pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotolab: rotation sets, attractors and entropy of annulus maps"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --threads appear after the verb as well

    Common c;
    app.add_option("--threads", c.threads, "worker threads (default 1)");

    auto add_common = [&](CLI::App* sub, bool with_map = true) {
        sub->add_option("--config", c.config_path, "key=value parameter file");
        sub->add_option("--out", c.out_path, "JSON report path");
        sub->add_option("--svg", c.svg_path, "SVG figure path");
        if (with_map) {
            sub->add_option("--map", c.map_name,
                            "map family: twist|synthetic|f1|f2|final|dissipative");
            sub->add_option("--vertical-n", c.vertical_n,
                            "contraction index for the dissipative family");
        }
    };

    double band_lo = 0.0, band_hi = 1.0;
    long n = 1000;
    int depth = 6;

    auto* rot = app.add_subcommand("rotation", "rotation interval over a band");
    add_common(rot);
    rot->add_option("--band", [&](const std::vector<std::string>& v) {
        band_lo = std::stod(v[0]); band_hi = std::stod(v[1]); return true;
    }, "band y_min y_max")->expected(2);
    rot->add_option("--n", n, "orbit length");
    rot->add_option("--depth", depth, "seed grid depth");

    auto* att = app.add_subcommand("attractor", "set-oriented attractor cover");
    add_common(att);
    int att_depth = 0;
    att->add_option("--depth", att_depth, "target subdivision depth");

    auto* hrs = app.add_subcommand("horseshoe", "Markov crossing certificate");
    add_common(hrs);
    double x_left = 0.0, x_right = 0.5;
    long n_max = 64;
    int j_max = 1, hs_depth = 5;
    hrs->add_option("--x-left", x_left, "left wall circle position");
    hrs->add_option("--x-right", x_right, "right wall circle position");
    hrs->add_option("--depth", hs_depth, "wall grid depth");
    hrs->add_option("--n-max", n_max, "largest power searched");
    hrs->add_option("--j-max", j_max, "largest displacement searched");

    auto* ent = app.add_subcommand("entropy", "norm-growth entropy bracket");
    add_common(ent);
    long ent_n = 1024;
    int ent_depth = 5;
    double elo = 0.0, ehi = 1.0;
    ent->add_option("--n", ent_n, "largest power (doubled from 8)");
    ent->add_option("--band", [&](const std::vector<std::string>& v) {
        elo = std::stod(v[0]); ehi = std::stod(v[1]); return true;
    }, "band y_min y_max")->expected(2);
    ent->add_option("--depth", ent_depth, "sample grid depth");

    auto* chn = app.add_subcommand("chains", "pseudo-orbit reachability");
    add_common(chn);
    std::vector<double> zp{0.5, 0.1}, wp{0.5, 0.9};
    double eps = 0.05, slo = 0.0, shi = 0.0;
    int ch_depth = 6;
    chn->add_option("--from", zp, "start point x y")->expected(2);
    chn->add_option("--to", wp, "target point x y")->expected(2);
    chn->add_option("--eps", eps, "jump size bound");
    chn->add_option("--strip", [&](const std::vector<std::string>& v) {
        slo = std::stod(v[0]); shi = std::stod(v[1]); return true;
    }, "jump strip y_min y_max (omitted = no jumps)")->expected(2);
    chn->add_option("--depth", ch_depth, "graph grid depth");

    auto* pip = app.add_subcommand("pipeline", "full build-and-verify run");
    add_common(pip, false);
    pip->add_option("--vertical-n", c.vertical_n,
                    "run the dissipative variant with this contraction index");

    CLI11_PARSE(app, argc, argv);
    set_worker_threads(c.threads);

    try {
        if (rot->parsed()) return run_rotation(c, band_lo, band_hi, n, depth);
        if (att->parsed()) return run_attractor(c, att_depth);
        if (hrs->parsed()) return run_horseshoe(c, x_left, x_right, hs_depth, n_max, j_max);
        if (ent->parsed()) return run_entropy(c, ent_n, elo, ehi, ent_depth);
        if (chn->parsed()) return run_chains(c, zp, wp, eps, slo, shi, ch_depth);
        if (pip->parsed()) return run_pipeline_verb(c);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const VerificationFailed& e) {
        std::fprintf(stderr, "verification failed: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
