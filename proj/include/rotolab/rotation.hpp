#pragma once

#include <cstdint>
#include <vector>

#include "rotolab/grid.hpp"
#include "rotolab/maps.hpp"

namespace rotolab {

// Finite-time Birkhoff estimate (x_n - x_0)/n along the lifted orbit.
// Signals BandEscape when the orbit leaves the escape window.
double orbit_rotation_number(const LiftedMap& F, CoverPoint p, long n, Band escape);

struct RotationParams {
    long n_orbit = 1000;
    int max_samples = 400;
    uint32_t seed = 20240817; // fixed-seed shuffle for seed subsampling
    Band escape{-3.0, 4.0};
};

struct RotationInterval {
    double lo = 0.0, hi = 0.0;     // estimates from the doubled run (2 n_orbit)
    double lo_n = 0.0, hi_n = 0.0; // estimates from the base run (n_orbit)
    bool stabilized = false;       // doubling diagnostic
    long n_orbit = 0;
    int samples = 0;
};

// Interval of finite-time rotation numbers over seeds taken at the centers of
// the boxes of K (subsampled deterministically).
RotationInterval rotation_interval(const LiftedMap& F, const GridSet& K, const RotationParams& p = {});

struct PeriodicOrbitWitness {
    bool found = false;
    CoverPoint point{};
    int p = 0, q = 1;
    double residual = 1e300;
};

// Damped Newton (Levenberg fallback) multistart on F^q(z) - z - (p,0).
PeriodicOrbitWitness find_periodic(const LiftedMap& F, int p, int q,
                                   const std::vector<CoverPoint>& seeds,
                                   double tol = 1e-10, int max_iter = 80);

} // namespace rotolab
