#include "rotolab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rotolab/parallel.hpp"

namespace rotolab {

namespace {

// Givens QR of a 2x2: B = Q R with Q orthogonal, R upper triangular.
void qr2(const Mat2& B, Mat2& Q, Mat2& R) {
    double r = std::hypot(B.a, B.c);
    if (r < 1e-300) {
        Q = Mat2::identity();
        R = B;
        return;
    }
    double ct = B.a / r, st = B.c / r;
    Q = Mat2{ct, -st, st, ct};
    // R = Q^T B
    R = Mat2{ct * B.a + st * B.c, ct * B.b + st * B.d,
             -st * B.a + ct * B.c, -st * B.b + ct * B.d};
}

} // namespace

double log_chain_norm(const LiftedMap& F, CoverPoint z, long n, int stride) {
    if (n <= 0) return 0.0;
    Mat2 Q = Mat2::identity(); // orthogonal after each QR; raw product inside a stride window
    Mat2 R_acc = Mat2::identity();
    double log_scale = 0.0;
    long since = 0;
    for (long i = 0; i < n; ++i) {
        Mat2 J = F.jacobian(z);
        z = F(z);
        Q = J * Q;
        ++since;
        if (since >= stride || i == n - 1) {
            Mat2 Qn, Rn;
            qr2(Q, Qn, Rn);
            Q = Qn;
            R_acc = Rn * R_acc;
            double s = R_acc.norm2();
            if (s > 0) {
                log_scale += std::log(s);
                R_acc = Mat2{R_acc.a / s, R_acc.b / s, R_acc.c / s, R_acc.d / s};
            }
            since = 0;
        }
    }
    // after the final QR the leading factor is orthogonal, so the chain norm
    // is carried entirely by R_acc and the extracted scales
    return log_scale + std::log(std::max(R_acc.norm2(), 1e-300));
}

double norm_growth_upper(const LiftedMap& F, const GridSet& region, long n,
                         const NormGrowthParams& p) {
    const auto& boxes = region.boxes();
    if (boxes.empty()) throw std::invalid_argument("norm_growth_upper: empty region");
    std::vector<size_t> idx(boxes.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::mt19937 rng(p.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t m = std::min<size_t>(idx.size(), static_cast<size_t>(p.max_samples));

    const double s = region.box_size();
    std::vector<CoverPoint> pts;
    pts.reserve(m * 5);
    for (size_t k = 0; k < m; ++k) {
        GridBox b = boxes[idx[k]];
        double x0 = b.i * s, y0 = b.j * s;
        pts.push_back({x0, y0});
        pts.push_back({x0 + s, y0});
        pts.push_back({x0, y0 + s});
        pts.push_back({x0 + s, y0 + s});
        pts.push_back({x0 + 0.5 * s, y0 + 0.5 * s});
    }

    std::vector<double> vals(pts.size(), -1e300);
    parallel_chunks(pts.size(), [&](int, size_t b0, size_t b1) {
        for (size_t k = b0; k < b1; ++k)
            vals[k] = log_chain_norm(F, pts[k], n, p.qr_stride);
    });
    double mx = *std::max_element(vals.begin(), vals.end());
    return 2.0 * mx / static_cast<double>(n);
}

double separated_set_estimate(const LiftedMap& F, const GridSet& region,
                              const SeparatedParams& p) {
    const auto& boxes = region.boxes();
    if (boxes.empty()) return 0.0;
    std::vector<size_t> idx(boxes.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::mt19937 rng(p.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t m = std::min<size_t>(idx.size(), static_cast<size_t>(p.max_samples));

    // precompute projected orbits
    std::vector<std::vector<AnnulusPoint>> orbits(m);
    parallel_chunks(m, [&](int, size_t b0, size_t b1) {
        for (size_t k = b0; k < b1; ++k) {
            AnnulusPoint c = region.center(boxes[idx[k]]);
            std::vector<AnnulusPoint>& o = orbits[k];
            o.reserve(p.n + 1);
            CoverPoint z{c.x, c.y};
            o.push_back(c);
            for (long i = 0; i < p.n; ++i) {
                z = F(z);
                o.push_back(project(z));
            }
        }
    });

    std::vector<size_t> chosen;
    for (size_t k = 0; k < m; ++k) {
        bool separated_from_all = true;
        for (size_t c : chosen) {
            bool sep = false;
            for (long t = 0; t <= p.n; ++t) {
                if (annulus_dist(orbits[k][t], orbits[c][t]) > p.eps) { sep = true; break; }
            }
            if (!sep) { separated_from_all = false; break; }
        }
        if (separated_from_all) chosen.push_back(k);
    }
    if (chosen.empty()) return 0.0;
    return std::log(static_cast<double>(chosen.size())) / static_cast<double>(p.n);
}

EntropyBracket bracket(double lower, long n_lower, double upper, long n_upper, double tol) {
    if (lower > upper + tol) {
        std::ostringstream os;
        os << "entropy bracket inconsistent: lower " << lower << " exceeds upper " << upper;
        throw InconsistentBracket(os.str());
    }
    return EntropyBracket{lower, upper, n_lower, n_upper};
}

} // namespace rotolab
