#pragma once

#include <vector>

#include "rotolab/grid.hpp"
#include "rotolab/maps.hpp"

namespace rotolab {

struct ImageCoverParams {
    Band band{-3.0, 4.0}; // escape window; leaving it raises BandEscape
    double extra_margin = 0.0;
};

// Outer enclosure of F(S): maps each box's corner/center samples, dilates the
// hull by max(one box, |DF| * half-diagonal) plus extra_margin.
GridSet image_cover(const LiftedMap& F, const GridSet& S, const ImageCoverParams& p = {});

// True when the image enclosure of A lies inside the one-box erosion of A.
bool check_trap(const LiftedMap& F, const GridSet& A, const ImageCoverParams& p = {});

struct AttractorParams {
    Band trap{-1.0, 2.0};   // initial region A
    Band band{-3.0, 4.0};   // escape window
    int depth_start = 5;
    int depth = 8;
    long max_boxes = 4'000'000;
    int max_sweeps_per_depth = 200;
    // Early stop once a sweep removes less than this fraction of boxes
    // (the cover stays a sound outer enclosure at every sweep); 0 demands
    // the exact fixed point.
    double stop_frac = 0.0;
};

struct AttractorResult {
    GridSet cover;
    int reached_depth = 0;
    bool budget_exceeded = false;
    long sweeps = 0;
};

// Iterates S <- image_cover(F,S) intersect S to a fixed point, subdividing
// until the target depth. On budget exhaustion returns the partial cover with
// budget_exceeded set.
AttractorResult attractor_approx(const LiftedMap& F, const AttractorParams& p);

struct ComplementAnalysis {
    bool has_upper = false;     // unbounded side touching the top of the window
    bool has_lower = false;
    bool has_spanning = false;  // a component touching both sides (=> not essential)
    bool essential = false;
    int bounded_components = 0;
    double bounded_area = 0.0;
    std::vector<long> bounded_sizes; // in boxes
};

// Classifies the complement of S inside the band window by 4-neighbor flood
// fill with circle wrap.
ComplementAnalysis analyze_complement(const GridSet& S, Band window);

} // namespace rotolab
