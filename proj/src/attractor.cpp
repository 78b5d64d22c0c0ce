#include "rotolab/attractor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <queue>
#include <sstream>

#include "rotolab/parallel.hpp"

namespace rotolab {

GridSet image_cover(const LiftedMap& F, const GridSet& S, const ImageCoverParams& p) {
    const int n = S.side();
    const double s = S.box_size();
    const double diag = s * std::sqrt(2.0);
    const auto& boxes = S.boxes();

    std::atomic<bool> escaped{false};
    int nt = worker_threads();
    std::vector<std::vector<GridBox>> parts(std::max(nt, 1));

    parallel_chunks(boxes.size(), [&](int tid, size_t b0, size_t b1) {
        std::vector<GridBox>& out = parts[tid];
        for (size_t k = b0; k < b1; ++k) {
            GridBox b = boxes[k];
            double x0 = b.i * s, y0 = b.j * s;
            CoverPoint pts[5] = {{x0, y0},
                                 {x0 + s, y0},
                                 {x0, y0 + s},
                                 {x0 + s, y0 + s},
                                 {x0 + 0.5 * s, y0 + 0.5 * s}};
            double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
            for (CoverPoint q : pts) {
                CoverPoint r = F(q);
                min_x = std::min(min_x, r.x);
                max_x = std::max(max_x, r.x);
                min_y = std::min(min_y, r.y);
                max_y = std::max(max_y, r.y);
            }
            double jn = F.jacobian(pts[4]).norm2();
            double m = std::max(s, 0.5 * jn * diag) + p.extra_margin;
            if (min_y - m < p.band.y_min || max_y + m > p.band.y_max) {
                escaped.store(true);
                continue;
            }
            int ilo = static_cast<int>(std::floor((min_x - m) * n));
            int ihi = static_cast<int>(std::floor((max_x + m) * n));
            int jlo = static_cast<int>(std::floor((min_y - m) * n));
            int jhi = static_cast<int>(std::floor((max_y + m) * n));
            if (ihi - ilo >= n) { ilo = 0; ihi = n - 1; }
            for (int i = ilo; i <= ihi; ++i)
                for (int j = jlo; j <= jhi; ++j) out.push_back(S.wrap(GridBox{i, j}));
        }
    });

    if (escaped.load()) {
        std::ostringstream os;
        os << "image of cover leaves the band [" << p.band.y_min << ", " << p.band.y_max << "]";
        throw BandEscape(os.str());
    }

    GridSet r(S.depth());
    size_t total = 0;
    for (auto& v : parts) total += v.size();
    std::vector<GridBox> all;
    all.reserve(total);
    for (auto& v : parts) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (GridBox b : all) r.insert(b);
    r.normalize();
    return r;
}

bool check_trap(const LiftedMap& F, const GridSet& A, const ImageCoverParams& p) {
    GridSet img = image_cover(F, A, p);
    return img.subset_of(A.erode());
}

AttractorResult attractor_approx(const LiftedMap& F, const AttractorParams& p) {
    AttractorResult res;
    GridSet S = GridSet::full_band(p.depth_start, p.trap);
    ImageCoverParams icp;
    icp.band = p.band;
    for (int d = p.depth_start;; ++d) {
        for (int sweep = 0; sweep < p.max_sweeps_per_depth; ++sweep) {
            GridSet next = image_cover(F, S, icp).intersect(S);
            ++res.sweeps;
            size_t removed = S.count() - next.count();
            bool fixed = removed == 0 ||
                         (p.stop_frac > 0.0 &&
                          static_cast<double>(removed) < p.stop_frac * static_cast<double>(S.count()));
            S = std::move(next);
            if (static_cast<long>(S.count()) > p.max_boxes) {
                res.cover = std::move(S);
                res.reached_depth = d;
                res.budget_exceeded = true;
                return res;
            }
            if (fixed || S.empty()) break;
        }
        if (d >= p.depth || S.empty()) {
            res.cover = std::move(S);
            res.reached_depth = d;
            return res;
        }
        S = S.subdivide();
        if (static_cast<long>(S.count()) > p.max_boxes) {
            res.cover = std::move(S);
            res.reached_depth = d + 1;
            res.budget_exceeded = true;
            return res;
        }
    }
}

ComplementAnalysis analyze_complement(const GridSet& S, Band window) {
    ComplementAnalysis out;
    const int n = S.side();
    const double s = S.box_size();
    const int j_lo = static_cast<int>(std::floor(window.y_min * n));
    const int j_hi = static_cast<int>(std::ceil(window.y_max * n)) - 1;
    const int rows = j_hi - j_lo + 1;
    if (rows <= 0) return out;

    std::vector<uint8_t> occ(static_cast<size_t>(rows) * n, 0);
    for (GridBox b : S.boxes()) {
        if (b.j < j_lo || b.j > j_hi) continue;
        occ[static_cast<size_t>(b.j - j_lo) * n + b.i] = 1;
    }
    std::vector<int32_t> comp(occ.size(), -1);
    int next_id = 0;
    bool pure_upper = false, pure_lower = false;
    for (size_t start = 0; start < occ.size(); ++start) {
        if (occ[start] || comp[start] >= 0) continue;
        // BFS over the free cells
        bool touch_lo = false, touch_hi = false;
        long size = 0;
        std::queue<size_t> q;
        q.push(start);
        comp[start] = next_id;
        while (!q.empty()) {
            size_t c = q.front();
            q.pop();
            ++size;
            int jr = static_cast<int>(c / n), i = static_cast<int>(c % n);
            if (jr == 0) touch_lo = true;
            if (jr == rows - 1) touch_hi = true;
            auto push = [&](int jj, int ii) {
                if (jj < 0 || jj >= rows) return;
                ii = (ii % n + n) % n;
                size_t idx = static_cast<size_t>(jj) * n + ii;
                if (occ[idx] || comp[idx] >= 0) return;
                comp[idx] = next_id;
                q.push(idx);
            };
            push(jr - 1, i);
            push(jr + 1, i);
            push(jr, i - 1);
            push(jr, i + 1);
        }
        ++next_id;
        if (touch_lo && touch_hi) {
            out.has_spanning = true;
        } else if (touch_hi) {
            pure_upper = true;
        } else if (touch_lo) {
            pure_lower = true;
        } else {
            ++out.bounded_components;
            out.bounded_sizes.push_back(size);
            out.bounded_area += size * s * s;
        }
    }
    out.has_upper = pure_upper;
    out.has_lower = pure_lower;
    out.essential = pure_upper && pure_lower && !out.has_spanning;
    return out;
}

} // namespace rotolab
