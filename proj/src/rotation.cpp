#include "rotolab/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rotolab/parallel.hpp"

namespace rotolab {

double orbit_rotation_number(const LiftedMap& F, CoverPoint p, long n, Band escape) {
    double x0 = p.x;
    for (long i = 0; i < n; ++i) {
        p = F(p);
        if (!escape.contains(p.y)) {
            std::ostringstream os;
            os << "orbit escaped the band at step " << (i + 1) << " (y = " << p.y << ")";
            throw BandEscape(os.str());
        }
    }
    return (p.x - x0) / static_cast<double>(n);
}

RotationInterval rotation_interval(const LiftedMap& F, const GridSet& K, const RotationParams& p) {
    RotationInterval out;
    out.n_orbit = p.n_orbit;
    const auto& boxes = K.boxes();
    if (boxes.empty()) return out;

    std::vector<size_t> idx(boxes.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::mt19937 rng(p.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t m = std::min<size_t>(idx.size(), static_cast<size_t>(p.max_samples));
    idx.resize(m);
    out.samples = static_cast<int>(m);

    std::vector<double> rho_n(m, 0.0), rho_2n(m, 0.0);
    std::vector<uint8_t> ok(m, 0);
    parallel_chunks(m, [&](int, size_t b0, size_t b1) {
        for (size_t k = b0; k < b1; ++k) {
            AnnulusPoint c = K.center(boxes[idx[k]]);
            CoverPoint z{c.x, c.y};
            double x0 = z.x;
            bool alive = true;
            for (long i = 1; i <= 2 * p.n_orbit; ++i) {
                z = F(z);
                if (!p.escape.contains(z.y)) { alive = false; break; }
                if (i == p.n_orbit) rho_n[k] = (z.x - x0) / static_cast<double>(p.n_orbit);
            }
            if (alive) {
                rho_2n[k] = (z.x - x0) / static_cast<double>(2 * p.n_orbit);
                ok[k] = 1;
            }
        }
    });

    bool any = false;
    double lo = 1e300, hi = -1e300, lo_n = 1e300, hi_n = -1e300;
    for (size_t k = 0; k < m; ++k) {
        if (!ok[k]) continue;
        any = true;
        lo = std::min(lo, rho_2n[k]);
        hi = std::max(hi, rho_2n[k]);
        lo_n = std::min(lo_n, rho_n[k]);
        hi_n = std::max(hi_n, rho_n[k]);
    }
    if (!any) throw BandEscape("all rotation seeds escaped the band");
    out.lo = lo;
    out.hi = hi;
    out.lo_n = lo_n;
    out.hi_n = hi_n;
    double tol = 2.0 / static_cast<double>(p.n_orbit);
    out.stabilized = std::fabs(lo - lo_n) <= tol && std::fabs(hi - hi_n) <= tol;
    return out;
}

namespace {

// residual of the periodic-orbit equation and its Jacobian
void periodic_residual(const LiftedMap& F, CoverPoint z, int p, int q,
                       double& gx, double& gy, Mat2& J) {
    CoverPoint w = z;
    Mat2 A = Mat2::identity();
    for (int i = 0; i < q; ++i) {
        A = F.jacobian(w) * A;
        w = F(w);
    }
    gx = w.x - z.x - p;
    gy = w.y - z.y;
    J = Mat2{A.a - 1.0, A.b, A.c, A.d - 1.0};
}

} // namespace

PeriodicOrbitWitness find_periodic(const LiftedMap& F, int p, int q,
                                   const std::vector<CoverPoint>& seeds,
                                   double tol, int max_iter) {
    PeriodicOrbitWitness best;
    best.p = p;
    best.q = q;
    for (CoverPoint seed : seeds) {
        CoverPoint z = seed;
        double gx, gy;
        Mat2 J;
        periodic_residual(F, z, p, q, gx, gy, J);
        double r = std::max(std::fabs(gx), std::fabs(gy));
        for (int it = 0; it < max_iter && r >= tol; ++it) {
            double dx, dy;
            double det = J.det();
            if (std::fabs(det) > 1e-13) {
                dx = (-gx * J.d + gy * J.b) / det;
                dy = (-J.a * gy + J.c * gx) / det;
            } else {
                // Levenberg step (J^T J + mu I) d = -J^T g for rank-deficient J
                double mu = 1e-8 + 1e-3 * r;
                double a = J.a * J.a + J.c * J.c + mu;
                double b = J.a * J.b + J.c * J.d;
                double d = J.b * J.b + J.d * J.d + mu;
                double rx = -(J.a * gx + J.c * gy);
                double ry = -(J.b * gx + J.d * gy);
                double dd = a * d - b * b;
                dx = (rx * d - b * ry) / dd;
                dy = (a * ry - b * rx) / dd;
            }
            // backtracking damping
            double step = 1.0;
            bool improved = false;
            for (int bt = 0; bt < 25; ++bt, step *= 0.5) {
                CoverPoint zc{z.x + step * dx, z.y + step * dy};
                double ngx, ngy;
                Mat2 nJ;
                periodic_residual(F, zc, p, q, ngx, ngy, nJ);
                double nr = std::max(std::fabs(ngx), std::fabs(ngy));
                if (nr < r) {
                    z = zc;
                    gx = ngx;
                    gy = ngy;
                    J = nJ;
                    r = nr;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (r < best.residual) {
            best.residual = r;
            best.point = z;
        }
        if (r < tol) {
            best.found = true;
            best.point = z;
            best.residual = r;
            return best;
        }
    }
    return best;
}

} // namespace rotolab
