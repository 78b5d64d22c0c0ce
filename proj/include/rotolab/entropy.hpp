#pragma once

#include <cstdint>

#include "rotolab/grid.hpp"
#include "rotolab/maps.hpp"

namespace rotolab {

struct NormGrowthParams {
    int max_samples = 256;   // boxes sampled from the region (center + corners used)
    uint32_t seed = 7771;
    int qr_stride = 32;      // re-orthogonalize the Jacobian chain this often
};

// log ||DF^n(z)|| via a QR-maintained Jacobian chain with periodic
// re-orthogonalization and scale extraction (stable for large n).
double log_chain_norm(const LiftedMap& F, CoverPoint z, long n, int stride = 32);

// Upper bound (2/n) log max_z ||DF^n(z)|| over sample points of the region.
double norm_growth_upper(const LiftedMap& F, const GridSet& region, long n,
                         const NormGrowthParams& p = {});

struct SeparatedParams {
    double eps = 0.05;
    long n = 16;
    int max_samples = 400;
    uint32_t seed = 9913;
};

// Greedy maximal (n, eps)-separated subset of sampled orbits; returns
// log(cardinality)/n. A finite-resolution lower-bound estimator.
double separated_set_estimate(const LiftedMap& F, const GridSet& region,
                              const SeparatedParams& p = {});

struct EntropyBracket {
    double lower = 0.0;
    double upper = 0.0;
    long n_lower = 0;
    long n_upper = 0;
};

// Combines bounds; signals InconsistentBracket when lower > upper + tol.
EntropyBracket bracket(double lower, long n_lower, double upper, long n_upper,
                       double tol = 1e-9);

} // namespace rotolab
