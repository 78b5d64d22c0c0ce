#pragma once

#include <string>

#include <json.hpp>

#include "rotolab/attractor.hpp"
#include "rotolab/entropy.hpp"
#include "rotolab/horseshoe.hpp"
#include "rotolab/maps.hpp"
#include "rotolab/rotation.hpp"

namespace rotolab::pipeline {

using json = nlohmann::ordered_json;

struct Params {
    // geometry
    Band band{-3.0, 4.0};  // escape window
    Band trap{-1.0, 2.0};  // initial trapping region
    int depth = 8;
    int depth_start = 5;

    // C1 budget, split 40/40/20 between f1 fields, connector, bumps.
    // The default is chosen so the entropy clause passes with margin: the
    // twist turns the connector's vertical kicks into tangent stretching of
    // order sqrt(kick), so the measured norm-growth bound rises quickly with
    // the budget (~0.15 already at budget 0.5).
    double c1_budget = 0.05;
    double f1_fraction = 0.4;
    double connector_fraction = 0.4;
    double bump_fraction = 0.2;

    // f1 geometry
    double p0 = 0.25, p1 = 0.75;
    double strip_width = 0.15;
    double lambda = 0.5;
    double cq = 0.1;

    // connector geometry (vertical vortex rectangles)
    double r1 = 0.12, r2 = 0.88;
    double center_a = 0.15, center_b = 0.65;
    double half_width = 0.12;

    // verification knobs
    long n_orbit = 1000;
    int rotation_samples = 400;
    double delta = 0.05;            // rotation interval must contain [delta, 1-delta]
    double epsilon_entropy = 0.1;   // entropy upper bound must stay below this
    long entropy_n = 512;
    int entropy_samples = 96;
    long transport_horizon = 20000;
    bool require_transport = false; // strict mode: raise VerificationFailed
    long wandering_horizon = 10000; // N_check
    long escape_horizon = 20000;
    int chain_depth = 6;
    long max_boxes = 4'000'000;
    int horseshoe_n_max = 0;        // optional certificate search, 0 = skip
    unsigned seed = 20240817;
};

struct BuildResult {
    LiftedMap map;
    json diag;
};

// Derived quantities (amplitudes from the budget, marked points).
struct Derived {
    F1Params f1;
    ConnectorParams conn;
    double bump_amp = 0.0;
    double bump_radius = 0.0;
    double z0 = 0.0, z1 = 0.0; // bump centers on C0 / C1 (circle coordinates)
};
Derived derive(const Params& p);

BuildResult build_f1(const Params& p);
BuildResult build_f2(const Params& p);
BuildResult build_final(const Params& p);
BuildResult build_dissipative(const Params& p, int n);

struct RunResult {
    json report;
    bool pass = false;
    GridSet cover;
};

RunResult run_pipeline(const Params& p);

// Dissipative variant: post-compose with the vertical contraction of index n
// and re-run the attractor / rotation analysis.
RunResult run_dissipative(const Params& p, int n);

} // namespace rotolab::pipeline
