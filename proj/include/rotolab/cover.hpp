#pragma once

// Annulus A = S^1 x R with universal cover R^2 and deck translations
// T^k(x,y) = (x+k, y). Circle coordinate lives in [0,1).

#include <cmath>

namespace rotolab {

struct CoverPoint {
    double x = 0.0; // abscissa on the cover, never reduced mod 1
    double y = 0.0;
};

struct AnnulusPoint {
    double x = 0.0; // canonical representative in [0,1)
    double y = 0.0;
};

struct DeckShift {
    int k = 0;
};

struct Band {
    double y_min = 0.0;
    double y_max = 1.0;
    bool contains(double y) const { return y >= y_min && y <= y_max; }
    double height() const { return y_max - y_min; }
};

// Reduce an abscissa to [0,1). Guards the x == -eps case where
// x - floor(x) rounds to 1.0.
inline double mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r -= 1.0;
    return r;
}

inline AnnulusPoint project(CoverPoint p) {
    return AnnulusPoint{mod1(p.x), p.y};
}

inline CoverPoint apply(DeckShift s, CoverPoint p) {
    return CoverPoint{p.x + static_cast<double>(s.k), p.y};
}

// Lift of a near base: the representative of a.x within distance 1/2 of
// base.x; the exact tie (distance 1/2 both ways) resolves to base.x + 1/2.
inline CoverPoint lift_near(AnnulusPoint a, CoverPoint base) {
    double k = std::floor(base.x - a.x + 0.5);
    return CoverPoint{a.x + k, a.y};
}

// Displacement vector between lifts; first component is deck-sensitive.
inline void displacement(CoverPoint from, CoverPoint to, double& dx, double& dy) {
    dx = to.x - from.x;
    dy = to.y - from.y;
}

// Distance on the annulus (circle metric in x, euclidean in y).
inline double circle_dist(double a, double b) {
    double d = std::fabs(mod1(a) - mod1(b));
    return d > 0.5 ? 1.0 - d : d;
}

inline double annulus_dist(AnnulusPoint a, AnnulusPoint b) {
    double dx = circle_dist(a.x, b.x);
    double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace rotolab
