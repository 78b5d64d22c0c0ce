#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rotolab/grid.hpp"
#include "rotolab/maps.hpp"

namespace rotolab {

// Grid model of a compact connected set joining the two boundary circles of a
// band A, inessential in A (its complement still connects the boundaries).
struct JoiningContinuum {
    GridSet cells;
    bool connected = false;
    bool joins_boundaries = false;
    bool inessential = false;
    bool valid() const { return connected && joins_boundaries && inessential; }
};

JoiningContinuum classify_joining(const GridSet& D, const GridSet& A);

// Unwrapped (cover) box: the column index is not reduced mod 2^depth.
using CoverBox = std::pair<long, int>;

struct AdaptedRectangle {
    int depth = 0;
    GridSet cells;                     // annulus cells of the rectangle component
    std::vector<CoverBox> rect;        // lifted rectangle cells
    std::vector<CoverBox> left_wall;   // lift of D0 adjacent on the left
    std::vector<CoverBox> right_wall;  // lift of D1 adjacent on the right
    double x_lo = 0, x_hi = 0;         // abscissa hull of the lifted rectangle
    double y_lo = 0, y_hi = 0;
    double kappa = 0;                  // diameter of the lifted rectangle
    CoverPoint lift_anchor{};
};

// Component of A \ (D0 u D1) joining the boundary circles, with D0 adjacent on
// its left and D1 on its right (in the chosen lift). Throws std::invalid_argument
// when the walls overlap or no such component exists.
AdaptedRectangle adapted_rectangle(const GridSet& D0, const GridSet& D1, const GridSet& A);

struct MarkovParams {
    Band band{-3.0, 4.0};     // escape window for the propagated enclosures
    long max_boxes = 2'000'000;
};

struct HorseshoeCertificate {
    bool found = false;
    int m = 0;
    long n = 0;
    int j = 0;
    std::vector<int> displacements;
    double kappa = 0.0;
    double entropy_lower = 0.0;
    double rect_x_lo = 0, rect_x_hi = 0, rect_y_lo = 0, rect_y_hi = 0;
    // diagnostics: abscissa hulls of the propagated wall enclosures
    double left_image_max_x = 0.0;
    double right_image_min_x = 0.0;
    std::string note;
};

// Markov crossing criterion: after n steps the left wall's outer enclosure
// must lie strictly left of the lifted rectangle and the right wall's strictly
// right of the rectangle translated by j (one-box margin, ties fail). On
// success: m = j+1 symbols, displacements {0..j}, entropy lower bound
// log(j+1)/n, kappa = rectangle diameter.
HorseshoeCertificate markov_cross_check(const LiftedMap& F, const AdaptedRectangle& R,
                                        long n, int j, const MarkovParams& p = {});

// Scans n = 1..n_max (j = 1 first, then larger j) and returns the first
// certificate; not-found and budget/escape failures yield found = false.
HorseshoeCertificate find_horseshoe(const LiftedMap& F, const AdaptedRectangle& R,
                                    long n_max, int j_max = 1, const MarkovParams& p = {});

struct ChainParams {
    double eps = 0.05;
    Band window{0.0, 1.0};   // graph node window
    int depth = 6;
};

// eps-pseudo-orbit reachability z -> w where jumps (of size < eps) are allowed
// only when both the jump source f(center) and the jump target box lie in K.
// Without a jump an edge follows the box containing f(center) exactly.
bool chain_reachable(const LiftedMap& F, AnnulusPoint z, AnnulusPoint w,
                     const GridSet& K, const ChainParams& p = {});

} // namespace rotolab
