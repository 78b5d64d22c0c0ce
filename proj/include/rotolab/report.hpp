#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rotolab/attractor.hpp"
#include "rotolab/entropy.hpp"
#include "rotolab/horseshoe.hpp"
#include "rotolab/rotation.hpp"

namespace rotolab::report {

using json = nlohmann::ordered_json;

inline json rotation_interval(const RotationInterval& r) {
    double gap = std::max(std::fabs(r.lo - r.lo_n), std::fabs(r.hi - r.hi_n));
    return json{{"rho_min", r.lo},   {"rho_max", r.hi},
                {"n", r.n_orbit},    {"samples", r.samples},
                {"stabilized", r.stabilized}, {"gap", gap}};
}

inline json certificate(const HorseshoeCertificate& c) {
    return json{{"found", c.found},
                {"n0", c.n},
                {"j", c.j},
                {"m", c.m},
                {"displacements", c.displacements},
                {"kappa", c.kappa},
                {"entropy_lower", c.entropy_lower},
                {"rectangle_bounds", json{{"x_lo", c.rect_x_lo},
                                          {"x_hi", c.rect_x_hi},
                                          {"y_lo", c.rect_y_lo},
                                          {"y_hi", c.rect_y_hi}}},
                {"left_image_max_x", c.left_image_max_x},
                {"right_image_min_x", c.right_image_min_x},
                {"note", c.note}};
}

inline json complement(const ComplementAnalysis& c) {
    return json{{"essential", c.essential},
                {"has_upper", c.has_upper},
                {"has_lower", c.has_lower},
                {"has_spanning", c.has_spanning},
                {"bounded_components", c.bounded_components},
                {"bounded_area", c.bounded_area}};
}

inline json entropy_bracket(const EntropyBracket& b) {
    return json{{"lower", b.lower}, {"n_lower", b.n_lower},
                {"upper", b.upper}, {"n_upper", b.n_upper}};
}

// Writes the report with the timestamp metadata appended as the final block,
// so everything above it is byte-identical across reruns of the same config.
inline void write(const std::string& path, json body, double elapsed_seconds) {
    body["meta"] = json{{"elapsed_seconds", elapsed_seconds},
                        {"timestamp", static_cast<long long>(std::time(nullptr))}};
    std::ofstream out(path);
    out << body.dump(2) << "\n";
}

} // namespace rotolab::report
