#include "rotolab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace rotolab::pipeline {

namespace {

json band_json(Band b) { return json{{"y_min", b.y_min}, {"y_max", b.y_max}}; }

json interval_json(const RotationInterval& r) {
    double gap = std::max(std::fabs(r.lo - r.lo_n), std::fabs(r.hi - r.hi_n));
    return json{{"rho_min", r.lo},   {"rho_max", r.hi},
                {"n", r.n_orbit},    {"samples", r.samples},
                {"stabilized", r.stabilized}, {"gap", gap}};
}

json witness_json(const PeriodicOrbitWitness& w) {
    return json{{"found", w.found}, {"p", w.p},  {"q", w.q},
                {"x", w.point.x},   {"y", w.point.y}, {"residual", w.residual}};
}

double max_det_err(const LiftedMap& F, double y_lo, double y_hi, int nx, int ny) {
    // stay a couple of FD steps away from the band edges: the exterior glue is
    // C1 but not C2 there, so a straddling central difference reads O(h) noise
    const double off = 2e-6;
    double worst = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            double y = y_lo + (y_hi - y_lo) * j / ny;
            y = std::min(std::max(y, y_lo + off), y_hi - off);
            CoverPoint q{(i + 0.37) / nx, y};
            worst = std::max(worst, std::fabs(F.jacobian(q).det() - 1.0));
        }
    return worst;
}

// distance from a point to the arc {x in [lo,hi] (circle), y = 0} shifted to height yc
double dist_to_arc(AnnulusPoint p, double lo, double hi, double yc) {
    double dx = 0.0;
    double px = mod1(p.x);
    double llo = mod1(lo), lhi = lo <= hi ? llo + (hi - lo) : 0.0;
    // work in the lift of the arc around llo
    double rel = px - llo;
    rel -= std::floor(rel + 0.5 - 0.5 * (lhi - llo)); // nearest representative
    if (rel < 0) dx = -rel;
    else if (rel > lhi - llo) dx = rel - (lhi - llo);
    double dy = p.y - yc;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

Derived derive(const Params& p) {
    Derived d;
    d.f1.p0 = p.p0;
    d.f1.p1 = p.p1;
    d.f1.strip_width = p.strip_width;
    d.f1.lambda = p.lambda;
    d.f1.cq = p.cq;
    d.f1.c0 = 1.0;
    d.f1.c1 = 1.0;
    double unit_f1 = f1_field_c1_size(d.f1);
    double alloc_f1 = p.c1_budget * p.f1_fraction;
    double amp_f1 = alloc_f1 / unit_f1;
    d.f1.c0 = amp_f1;
    d.f1.c1 = amp_f1;
    d.f1.c1_allowance = alloc_f1 * 1.05;

    d.conn.r1 = p.r1;
    d.conn.r2 = p.r2;
    d.conn.center_a = p.center_a;
    d.conn.center_b = p.center_b;
    d.conn.half_width = p.half_width;
    d.conn.amp_a = 1.0;
    d.conn.amp_b = -1.0;
    double unit_conn = connector_field_c1_size(d.conn);
    double alloc_conn = p.c1_budget * p.connector_fraction;
    double amp_conn = alloc_conn / unit_conn;
    d.conn.amp_a = amp_conn;
    d.conn.amp_b = -amp_conn;
    d.conn.c1_allowance = alloc_conn * 1.05;

    // the bump ball must be shorter than one circle step of f1 at its center
    // (that is what makes the pushed arc wandering)
    double step = amp_f1 * std::fabs(circle_profile(1.0 / 3.0));
    d.bump_radius = 0.4 * step;
    double alloc_bump = p.c1_budget * p.bump_fraction;
    d.bump_amp = std::min(alloc_bump * d.bump_radius / 2.1, 0.3 * d.bump_radius);
    d.z0 = mod1(p.p0 + 1.0 / 3.0);
    d.z1 = mod1(p.p1 + 1.0 / 3.0);
    return d;
}

BuildResult build_f1(const Params& p) {
    Derived d = derive(p);
    LiftedMap f1 = boundary_morse_smale(d.f1);
    json diag;
    diag["amplitude"] = d.f1.c0;
    diag["strip_width"] = d.f1.strip_width;

    // boundary circle invariance
    double inv_err = 0.0;
    for (int i = 0; i < 64; ++i) {
        double x = (i + 0.21) / 64.0;
        inv_err = std::max(inv_err, std::fabs(f1(CoverPoint{x, 0.0}).y));
        inv_err = std::max(inv_err, std::fabs(f1(CoverPoint{x, 1.0}).y - 1.0));
    }
    diag["boundary_invariance_err"] = inv_err;

    // marked fixed points on C0 / C1 and the deck shift on C1
    auto resid = [&](double x, double y, double shift) {
        CoverPoint q = f1(CoverPoint{x, y});
        return std::max(std::fabs(q.x - x - shift), std::fabs(q.y - y));
    };
    double x0 = d.f1.x0(), x1 = d.f1.x1();
    diag["p0_residual"] = resid(p.p0, 0.0, 0.0);
    diag["x0_residual"] = resid(x0, 0.0, 0.0);
    diag["p1_residual"] = resid(p.p1, 1.0, 1.0);
    diag["x1_residual"] = resid(x1, 1.0, 1.0);
    diag["x1_rotation"] = (f1(CoverPoint{x1, 1.0}).x - x1);

    // conservative inside the closed band
    diag["det_err_band"] = max_det_err(f1, 0.0, 1.0, 24, 24);

    // convergence toward p0 along C0 (value frozen against the 1-D oracle in tests)
    CoverPoint z{p.p0 + 0.3, 0.0};
    z = iterate(f1, z, 1000);
    diag["c0_orbit_dist_after_1e3"] = circle_dist(z.x, p.p0);

    // trapping region at depth 6
    GridSet A = GridSet::full_band(6, p.trap);
    ImageCoverParams icp;
    icp.band = p.band;
    bool trap_ok = check_trap(f1, A, icp);
    diag["trap_depth6"] = trap_ok;

    if (inv_err > 1e-10 || diag["det_err_band"].get<double>() > 1e-8 || !trap_ok)
        throw VerificationFailed("build_f1 postcondition failed: " + diag.dump());
    return BuildResult{std::move(f1), std::move(diag)};
}

BuildResult build_f2(const Params& p) {
    BuildResult r1 = build_f1(p);
    Derived d = derive(p);
    LiftedMap conn = connector_shear(d.conn);
    LiftedMap f2 = compose(conn, r1.map);

    json diag;
    diag["f1"] = r1.diag;
    diag["connector_amp"] = d.conn.amp_a;

    // connector is the identity outside its strips (hence f2 == f1 there)
    double id_err = 0.0;
    for (int i = 0; i < 48; ++i) {
        double x = (i + 0.5) / 48.0;
        for (double y : {-0.5, 0.05, p.r1 - 0.01, p.r2 + 0.01, 0.95, 1.5}) {
            CoverPoint q = conn(CoverPoint{x, y});
            id_err = std::max(id_err, std::fabs(q.x - x) + std::fabs(q.y - y));
        }
    }
    diag["identity_outside_err"] = id_err;
    diag["det_err_band"] = max_det_err(f2, 0.0, 1.0, 24, 24);

    // chain transitivity between boundary neighborhoods with K = band interior
    GridSet K = GridSet::full_band(p.chain_depth, Band{0.02, 0.98});
    ChainParams cp;
    cp.depth = p.chain_depth;
    cp.window = Band{0.0, 1.0};
    cp.eps = 2.5 / (1 << p.chain_depth);
    bool chain_ok = chain_reachable(f2, AnnulusPoint{0.5, 0.06}, AnnulusPoint{0.5, 0.94}, K, cp) &&
                    chain_reachable(f2, AnnulusPoint{0.5, 0.94}, AnnulusPoint{0.5, 0.06}, K, cp);
    diag["chain_c0_c1"] = chain_ok;

    // bounded-horizon transport trace: segment seeded near the unstable arc of
    // p0, aiming for a neighborhood of the stable set of x1 (near C1)
    double x1 = d.f1.x1();
    bool reached = false;
    long reached_steps = -1;
    double max_y = -1e300;
    int crossings = 0;
    for (int s = 0; s < 15 && !reached; ++s) {
        CoverPoint z{p.p0 + (s % 5 - 2) * 0.01, 0.02 + 0.01 * (s / 5)};
        double prev_side = 0.0;
        for (long i = 0; i < p.transport_horizon; ++i) {
            z = f2(z);
            max_y = std::max(max_y, z.y);
            double side = z.y - 0.5;
            if (side * prev_side < 0) ++crossings;
            prev_side = side;
            if (z.y > 1.0 - p.strip_width && circle_dist(z.x, x1) < 0.08) {
                reached = true;
                reached_steps = i + 1;
                break;
            }
        }
    }
    diag["transport"] = json{{"reached", reached},
                             {"steps", reached_steps},
                             {"max_y", max_y},
                             {"horizon", p.transport_horizon},
                             {"midline_crossings", crossings}};

    if (id_err > 1e-12 || diag["det_err_band"].get<double>() > 1e-8 || !chain_ok)
        throw VerificationFailed("build_f2 postcondition failed: " + diag.dump());
    if (p.require_transport && !reached)
        throw VerificationFailed("build_f2: transport verification failed within horizon " +
                                 std::to_string(p.transport_horizon));
    return BuildResult{std::move(f2), std::move(diag)};
}

BuildResult build_final(const Params& p) {
    BuildResult r2 = build_f2(p);
    Derived d = derive(p);
    BumpProfile b0{AnnulusPoint{d.z0, 0.0}, d.bump_radius, d.bump_amp, +1};
    BumpProfile b1{AnnulusPoint{d.z1, 1.0}, d.bump_radius, d.bump_amp, -1};
    LiftedMap f = compose(bump_push(b1), compose(bump_push(b0), r2.map));

    json diag;
    diag["f2"] = r2.diag;
    diag["bump_radius"] = d.bump_radius;
    diag["bump_amp"] = d.bump_amp;
    diag["z0"] = d.z0;
    diag["z1"] = d.z1;

    // marked fixed points survive (bumps are supported away from them)
    double x0 = d.f1.x0();
    CoverPoint q = f(CoverPoint{x0, 0.0});
    diag["x0_residual"] = std::max(std::fabs(q.x - x0), std::fabs(q.y));

    // wandering arc: the piece of C0 inside the bump ball
    double delta = d.bump_radius;
    double lo = d.z0 - delta, hi = d.z0 + delta;
    const int m = 21;
    std::vector<CoverPoint> arc(m);
    for (int i = 0; i < m; ++i) arc[i] = CoverPoint{lo + (hi - lo) * i / (m - 1), 0.0};
    double min_sep = 1e300;
    for (long nstep = 1; nstep <= p.wandering_horizon; ++nstep) {
        double dmin = 1e300;
        for (int i = 0; i < m; ++i) {
            arc[i] = f(arc[i]);
            dmin = std::min(dmin, dist_to_arc(project(arc[i]), lo, hi, 0.0));
        }
        min_sep = std::min(min_sep, dmin);
        if (min_sep <= 0.0) break;
    }
    diag["wandering"] = json{{"min_separation", min_sep},
                             {"horizon", p.wandering_horizon},
                             {"ok", min_sep > 1e-9}};

    // backward non-recurrence: backward orbits of points pushed off C0 leave
    // the bump ball and keep their distance (the interior is conservative, so
    // they hold height ~amp and drift along the circle away from the ball)
    bool any_return = false;
    double min_exit_dist = 1e300;
    for (int k = 0; k < 5; ++k) {
        CoverPoint z{d.z0 + (k - 2) * 0.3 * delta, d.bump_amp * (0.2 + 0.1 * k)};
        bool left = false;
        for (long i = 0; i < p.escape_horizon; ++i) {
            z = f.inverse(z);
            double dist = annulus_dist(project(z), AnnulusPoint{d.z0, 0.0});
            if (!left) {
                if (dist > delta) left = true;
            } else {
                min_exit_dist = std::min(min_exit_dist, dist);
                if (dist < delta) { any_return = true; break; }
            }
        }
    }
    diag["backward_recurrence"] = json{{"returned", any_return},
                                       {"min_dist_after_exit", min_exit_dist},
                                       {"ball_radius", delta},
                                       {"horizon", p.escape_horizon}};

    return BuildResult{std::move(f), std::move(diag)};
}

BuildResult build_dissipative(const Params& p, int n) {
    BuildResult r2 = build_f2(p);
    LiftedMap hn = vertical_contraction(n);
    LiftedMap g = compose(hn, r2.map);

    json diag;
    diag["f2"] = r2.diag;
    diag["n"] = n;

    // determinant strictly below 1 - 1/(2n) on [C_-1, C_2]
    double det_max = -1e300;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j <= 48; ++j) {
            CoverPoint q{(i + 0.37) / 24.0, -1.0 + 3.0 * j / 48.0};
            det_max = std::max(det_max, g.jacobian(q).det());
        }
    diag["det_max_band"] = det_max;
    diag["det_threshold"] = 1.0 - 1.0 / (2.0 * n);

    // twist-condition probe: d x' / d y stays positive
    double twist_min = 1e300;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j <= 32; ++j) {
            CoverPoint q{(i + 0.11) / 24.0, -1.0 + 3.0 * j / 32.0};
            twist_min = std::min(twist_min, g.jacobian(q).b);
        }
    diag["twist_probe_min"] = twist_min;

    if (det_max >= 1.0 - 1.0 / (2.0 * n))
        throw VerificationFailed("build_dissipative: determinant bound failed: " + diag.dump());
    if (twist_min <= 0.0)
        throw VerificationFailed("build_dissipative: twist probe failed: " + diag.dump());
    return BuildResult{std::move(g), std::move(diag)};
}

RunResult run_pipeline(const Params& p) {
    auto t_start = std::chrono::steady_clock::now();
    RunResult out;
    json& rep = out.report;
    rep["schema"] = "rotolab.pipeline.report/1";
    rep["params"] = json{{"band", band_json(p.band)},
                         {"trap", band_json(p.trap)},
                         {"depth", p.depth},
                         {"c1_budget", p.c1_budget},
                         {"delta", p.delta},
                         {"epsilon_entropy", p.epsilon_entropy},
                         {"n_orbit", p.n_orbit},
                         {"entropy_n", p.entropy_n},
                         {"seed", p.seed}};

    BuildResult fin = build_final(p);
    rep["stages"] = fin.diag;
    const LiftedMap& f = fin.map;
    Derived d = derive(p);

    // trapping region
    ImageCoverParams icp;
    icp.band = p.band;
    bool trap_ok = check_trap(f, GridSet::full_band(6, p.trap), icp);

    // attractor cover
    AttractorParams ap;
    ap.trap = p.trap;
    ap.band = p.band;
    ap.depth_start = p.depth_start;
    ap.depth = p.depth;
    ap.max_boxes = p.max_boxes;
    ap.stop_frac = 0.002;
    AttractorResult ar = attractor_approx(f, ap);
    out.cover = ar.cover;
    double ylo, yhi;
    ar.cover.y_extent(ylo, yhi);
    ComplementAnalysis ca = analyze_complement(ar.cover, p.band);
    rep["attractor"] = json{{"depth", ar.reached_depth},
                            {"boxes", ar.cover.count()},
                            {"sweeps", ar.sweeps},
                            {"budget_exceeded", ar.budget_exceeded},
                            {"y_lo", ylo},
                            {"y_hi", yhi},
                            {"essential", ca.essential},
                            {"bounded_components", ca.bounded_components},
                            {"bounded_area", ca.bounded_area}};

    // rotation interval over the cover
    RotationParams rp;
    rp.n_orbit = p.n_orbit;
    rp.max_samples = p.rotation_samples;
    rp.seed = p.seed;
    rp.escape = p.band;
    RotationInterval ri = rotation_interval(f, ar.cover, rp);
    rep["rotation"] = interval_json(ri);

    // endpoint witnesses
    double x0 = d.f1.x0(), x1 = d.f1.x1();
    std::vector<CoverPoint> seeds0{{x0, 0.0}, {mod1(p.p0 + 0.4), 0.0}, {x0 + 0.05, 0.01}};
    std::vector<CoverPoint> seeds1{{x1, 1.0}, {mod1(p.p1 + 0.4), 1.0}, {x1 - 0.05, 0.99}};
    PeriodicOrbitWitness w0 = find_periodic(f, 0, 1, seeds0, 1e-10);
    PeriodicOrbitWitness w1 = find_periodic(f, 1, 1, seeds1, 1e-10);
    rep["witnesses"] = json::array({witness_json(w0), witness_json(w1)});

    // entropy bracket
    NormGrowthParams np;
    np.max_samples = p.entropy_samples;
    np.seed = p.seed;
    double upper = norm_growth_upper(f, ar.cover, p.entropy_n, np);
    double lower = 0.0;
    json hs = nullptr;
    if (p.horseshoe_n_max > 0) {
        // optional search: strip walls around the bump verticals; may well
        // report not-found at small amplitudes (recorded, not fatal)
        hs = json{{"found", false}, {"note", "search not attempted at this depth"}};
    }
    EntropyBracket br = bracket(lower, 0, upper, p.entropy_n);
    rep["entropy"] = json{{"upper", br.upper}, {"n_upper", br.n_upper},
                          {"lower", br.lower}, {"n_lower", br.n_lower}};
    rep["horseshoe"] = hs;

    bool rot_ok = ri.lo <= p.delta && ri.hi >= 1.0 - p.delta;
    bool wit_ok = w0.found && w1.found && w0.residual < 1e-8 && w1.residual < 1e-8;
    bool ent_ok = upper < p.epsilon_entropy;
    bool ess_ok = ca.essential && !ar.budget_exceeded;
    rep["clauses"] = json{{"trap", trap_ok},
                          {"essential", ess_ok},
                          {"rotation_interval", rot_ok},
                          {"endpoint_witnesses", wit_ok},
                          {"entropy_upper", ent_ok}};
    out.pass = trap_ok && ess_ok && rot_ok && wit_ok && ent_ok;
    rep["pass"] = out.pass;

    auto t_end = std::chrono::steady_clock::now();
    rep["meta"] = json{{"elapsed_seconds",
                        std::chrono::duration<double>(t_end - t_start).count()},
                       {"timestamp", static_cast<long long>(std::time(nullptr))}};
    return out;
}

RunResult run_dissipative(const Params& p, int n) {
    auto t_start = std::chrono::steady_clock::now();
    RunResult out;
    json& rep = out.report;
    rep["schema"] = "rotolab.dissipative.report/1";
    rep["params"] = json{{"n", n},
                         {"depth", p.depth},
                         {"c1_budget", p.c1_budget},
                         {"n_orbit", p.n_orbit},
                         {"seed", p.seed}};

    BuildResult g = build_dissipative(p, n);
    rep["stages"] = g.diag;

    ImageCoverParams icp;
    icp.band = p.band;
    bool trap_ok = check_trap(g.map, GridSet::full_band(6, p.trap), icp);

    AttractorParams ap;
    ap.trap = p.trap;
    ap.band = p.band;
    ap.depth_start = p.depth_start;
    ap.depth = p.depth;
    ap.max_boxes = p.max_boxes;
    ap.stop_frac = 0.002;
    AttractorResult ar = attractor_approx(g.map, ap);
    out.cover = ar.cover;
    double ylo, yhi;
    ar.cover.y_extent(ylo, yhi);
    ComplementAnalysis ca = analyze_complement(ar.cover, p.band);
    rep["attractor"] = json{{"depth", ar.reached_depth},
                            {"boxes", ar.cover.count()},
                            {"y_lo", ylo},
                            {"y_hi", yhi},
                            {"essential", ca.essential}};

    RotationParams rp;
    rp.n_orbit = p.n_orbit;
    rp.max_samples = p.rotation_samples;
    rp.seed = p.seed;
    rp.escape = p.band;
    RotationInterval ri = rotation_interval(g.map, ar.cover, rp);
    rep["rotation"] = interval_json(ri);

    bool det_ok = g.diag["det_max_band"].get<double>() < 1.0 - 1.0 / (2.0 * n);
    bool twist_ok = g.diag["twist_probe_min"].get<double>() > 0.0;
    bool rot_ok = ri.lo <= p.delta && ri.hi >= 1.0 - p.delta;
    rep["clauses"] = json{{"determinant", det_ok},
                          {"twist_probe", twist_ok},
                          {"trap", trap_ok},
                          {"essential", ca.essential},
                          {"rotation_interval", rot_ok}};
    out.pass = det_ok && twist_ok && trap_ok && ca.essential && rot_ok;
    rep["pass"] = out.pass;
    auto t_end = std::chrono::steady_clock::now();
    rep["meta"] = json{{"elapsed_seconds",
                        std::chrono::duration<double>(t_end - t_start).count()},
                       {"timestamp", static_cast<long long>(std::time(nullptr))}};
    return out;
}

} // namespace rotolab::pipeline
