#include "rotolab/horseshoe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace rotolab {

namespace {

void j_range(const GridSet& A, int& j_lo, int& j_hi) {
    j_lo = 1 << 30;
    j_hi = -(1 << 30);
    for (GridBox b : A.boxes()) {
        j_lo = std::min(j_lo, b.j);
        j_hi = std::max(j_hi, b.j);
    }
}

// connected components of a cell set; conn = 4 or 8, circle wrap in i.
std::vector<std::vector<GridBox>> components(const GridSet& universe,
                                             const std::vector<GridBox>& cells, int conn) {
    std::set<GridBox> todo(cells.begin(), cells.end());
    std::vector<std::vector<GridBox>> out;
    while (!todo.empty()) {
        std::vector<GridBox> comp;
        std::queue<GridBox> q;
        GridBox s = *todo.begin();
        todo.erase(todo.begin());
        q.push(s);
        while (!q.empty()) {
            GridBox b = q.front();
            q.pop();
            comp.push_back(b);
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (conn == 4 && di != 0 && dj != 0) continue;
                    GridBox nb = universe.wrap(GridBox{b.i + di, b.j + dj});
                    auto it = todo.find(nb);
                    if (it != todo.end()) {
                        todo.erase(it);
                        q.push(nb);
                    }
                }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<GridBox> set_minus(const GridSet& A, const GridSet& B) {
    std::vector<GridBox> out;
    out.reserve(A.count());
    std::set_difference(A.boxes().begin(), A.boxes().end(), B.boxes().begin(), B.boxes().end(),
                        std::back_inserter(out));
    return out;
}

} // namespace

JoiningContinuum classify_joining(const GridSet& D, const GridSet& A) {
    if (D.depth() != A.depth()) throw std::invalid_argument("classify_joining: depth mismatch");
    if (!D.subset_of(A)) throw std::invalid_argument("classify_joining: D must lie inside A");
    JoiningContinuum out;
    out.cells = D;
    if (D.empty()) return out;

    int j_lo, j_hi;
    j_range(A, j_lo, j_hi);

    auto comps = components(A, D.boxes(), 8); // compact set: 8-connectivity
    out.connected = comps.size() == 1;

    bool lo = false, hi = false;
    for (GridBox b : D.boxes()) {
        if (b.j == j_lo) lo = true;
        if (b.j == j_hi) hi = true;
    }
    out.joins_boundaries = lo && hi;

    auto rest = set_minus(A, D);
    for (auto& comp : components(A, rest, 4)) { // open complement: 4-connectivity
        bool tl = false, th = false;
        for (GridBox b : comp) {
            if (b.j == j_lo) tl = true;
            if (b.j == j_hi) th = true;
        }
        if (tl && th) {
            out.inessential = true;
            break;
        }
    }
    return out;
}

AdaptedRectangle adapted_rectangle(const GridSet& D0, const GridSet& D1, const GridSet& A) {
    if (!D0.intersect(D1).empty())
        throw std::invalid_argument("adapted_rectangle: walls overlap");
    if (!D0.subset_of(A) || !D1.subset_of(A))
        throw std::invalid_argument("adapted_rectangle: walls must lie inside A");

    const int n = A.side();
    const double s = A.box_size();
    int j_lo, j_hi;
    j_range(A, j_lo, j_hi);

    GridSet walls = D0.unite(D1);
    auto rest = set_minus(A, walls);
    std::vector<GridBox> chosen;
    for (auto& comp : components(A, rest, 4)) {
        bool tl = false, th = false;
        for (GridBox b : comp) {
            if (b.j == j_lo) tl = true;
            if (b.j == j_hi) th = true;
        }
        if (!(tl && th)) continue;
        bool d0_left = false, d1_right = false;
        for (GridBox b : comp) {
            if (D0.contains(GridBox{b.i - 1, b.j})) d0_left = true;
            if (D1.contains(GridBox{b.i + 1, b.j})) d1_right = true;
        }
        if (d0_left && d1_right) {
            chosen = comp;
            break;
        }
    }
    if (chosen.empty())
        throw std::invalid_argument(
            "adapted_rectangle: no boundary-joining component with D0 on the left and D1 on the right");

    AdaptedRectangle R;
    R.depth = A.depth();

    // unwrap the component on the cover
    std::map<GridBox, long> unwrapped;
    std::set<GridBox> in(chosen.begin(), chosen.end());
    std::queue<GridBox> q;
    GridBox seed = chosen.front();
    unwrapped[seed] = seed.i;
    q.push(seed);
    while (!q.empty()) {
        GridBox b = q.front();
        q.pop();
        long I = unwrapped[b];
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            GridBox nb = A.wrap(GridBox{b.i + di[k], b.j + dj[k]});
            if (!in.count(nb)) continue;
            long nI = I + di[k];
            auto it = unwrapped.find(nb);
            if (it == unwrapped.end()) {
                unwrapped[nb] = nI;
                q.push(nb);
            } else if (it->second != nI) {
                throw std::invalid_argument("adapted_rectangle: component wraps around the annulus");
            }
        }
    }

    long i_min = 1 << 30, i_max = -(1 << 30);
    int jr_lo = 1 << 30, jr_hi = -(1 << 30);
    for (auto& kv : unwrapped) {
        R.rect.push_back({kv.second, kv.first.j});
        i_min = std::min(i_min, kv.second);
        i_max = std::max(i_max, kv.second);
        jr_lo = std::min(jr_lo, kv.first.j);
        jr_hi = std::max(jr_hi, kv.first.j);
    }
    GridSet cells(A.depth());
    for (GridBox b : chosen) cells.insert(b);
    cells.normalize();
    R.cells = cells;
    R.x_lo = i_min * s;
    R.x_hi = (i_max + 1) * s;
    R.y_lo = jr_lo * s;
    R.y_hi = (jr_hi + 1) * s;
    R.kappa = std::hypot(R.x_hi - R.x_lo, R.y_hi - R.y_lo);
    R.lift_anchor = CoverPoint{R.x_lo, R.y_lo};

    // unwrap each wall from the rectangle cells adjacent to it
    auto unwrap_wall = [&](const GridSet& D, std::vector<CoverBox>& out_wall) {
        std::map<GridBox, long> wu;
        std::queue<GridBox> wq;
        for (auto& kv : unwrapped) {
            GridBox b{static_cast<int32_t>(((kv.second % n) + n) % n), kv.first.j};
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    GridBox nb = A.wrap(GridBox{b.i + di, b.j + dj});
                    if (!D.contains(nb)) continue;
                    long nI = kv.second + di;
                    auto it = wu.find(nb);
                    if (it == wu.end()) {
                        wu[nb] = nI;
                        wq.push(nb);
                    }
                }
        }
        while (!wq.empty()) {
            GridBox b = wq.front();
            wq.pop();
            long I = wu[b];
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    GridBox nb = A.wrap(GridBox{b.i + di, b.j + dj});
                    if (!D.contains(nb)) continue;
                    long nI = I + di;
                    auto it = wu.find(nb);
                    if (it == wu.end()) {
                        wu[nb] = nI;
                        wq.push(nb);
                    }
                }
        }
        for (auto& kv : wu) out_wall.push_back({kv.second, kv.first.j});
    };
    unwrap_wall(D0, R.left_wall);
    unwrap_wall(D1, R.right_wall);
    if (R.left_wall.empty() || R.right_wall.empty())
        throw std::invalid_argument("adapted_rectangle: a wall is not adjacent to the rectangle");
    return R;
}

namespace {

// one outer-enclosure propagation step for a cover box set
std::set<CoverBox> propagate(const LiftedMap& F, const std::set<CoverBox>& S, int depth,
                             const MarkovParams& p) {
    const double s = 1.0 / (1 << depth);
    const double diag = s * std::sqrt(2.0);
    std::set<CoverBox> out;
    for (CoverBox cb : S) {
        double x0 = cb.first * s, y0 = cb.second * s;
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
        double m = std::max(s, 0.5 * jn * diag);
        if (min_y - m < p.band.y_min || max_y + m > p.band.y_max)
            throw BandEscape("markov enclosure left the band");
        long ilo = static_cast<long>(std::floor((min_x - m) / s));
        long ihi = static_cast<long>(std::floor((max_x + m) / s));
        int jlo = static_cast<int>(std::floor((min_y - m) / s));
        int jhi = static_cast<int>(std::floor((max_y + m) / s));
        for (long i = ilo; i <= ihi; ++i)
            for (int j = jlo; j <= jhi; ++j) out.insert({i, j});
        if (static_cast<long>(out.size()) > p.max_boxes)
            throw BudgetExceeded("markov enclosure box budget exceeded");
    }
    return out;
}

void abscissa_hull(const std::set<CoverBox>& S, double s, double& lo, double& hi) {
    long i_min = 1L << 60, i_max = -(1L << 60);
    for (CoverBox b : S) {
        i_min = std::min(i_min, b.first);
        i_max = std::max(i_max, b.first);
    }
    lo = i_min * s;
    hi = (i_max + 1) * s;
}

} // namespace

HorseshoeCertificate markov_cross_check(const LiftedMap& F, const AdaptedRectangle& R,
                                        long n, int j, const MarkovParams& p) {
    if (n < 1 || j < 1) throw std::invalid_argument("markov_cross_check: need n >= 1, j >= 1");
    const double s = 1.0 / (1 << R.depth);
    std::set<CoverBox> left(R.left_wall.begin(), R.left_wall.end());
    std::set<CoverBox> right(R.right_wall.begin(), R.right_wall.end());
    for (long t = 0; t < n; ++t) {
        left = propagate(F, left, R.depth, p);
        right = propagate(F, right, R.depth, p);
    }
    double llo, lhi, rlo, rhi;
    abscissa_hull(left, s, llo, lhi);
    abscissa_hull(right, s, rlo, rhi);

    HorseshoeCertificate cert;
    cert.n = n;
    cert.j = j;
    cert.kappa = R.kappa;
    cert.rect_x_lo = R.x_lo;
    cert.rect_x_hi = R.x_hi;
    cert.rect_y_lo = R.y_lo;
    cert.rect_y_hi = R.y_hi;
    cert.left_image_max_x = lhi;
    cert.right_image_min_x = rlo;

    // strict separation with one-box margin; ties fail
    bool left_ok = lhi <= R.x_lo - s;
    bool right_ok = rlo >= R.x_hi + static_cast<double>(j) + s;
    if (left_ok && right_ok) {
        cert.found = true;
        cert.m = j + 1;
        for (int v = 0; v <= j; ++v) cert.displacements.push_back(v);
        cert.entropy_lower = std::log(static_cast<double>(j + 1)) / static_cast<double>(n);
        cert.note = "markov crossing verified";
    } else {
        std::ostringstream os;
        os << "no crossing at n=" << n << " j=" << j << " (left hull max " << lhi
           << " vs " << R.x_lo - s << ", right hull min " << rlo << " vs "
           << R.x_hi + j + s << ")";
        cert.note = os.str();
    }
    return cert;
}

HorseshoeCertificate find_horseshoe(const LiftedMap& F, const AdaptedRectangle& R,
                                    long n_max, int j_max, const MarkovParams& p) {
    HorseshoeCertificate last;
    for (long n = 1; n <= n_max; ++n) {
        for (int j = 1; j <= j_max; ++j) {
            try {
                HorseshoeCertificate c = markov_cross_check(F, R, n, j, p);
                if (c.found) return c;
                last = c;
            } catch (const BandEscape& e) {
                last.note = std::string("enclosure escape: ") + e.what();
                return last;
            } catch (const BudgetExceeded& e) {
                last.note = std::string("budget: ") + e.what();
                return last;
            }
        }
    }
    if (last.note.empty()) last.note = "no crossing found within n_max";
    return last;
}

bool chain_reachable(const LiftedMap& F, AnnulusPoint z, AnnulusPoint w,
                     const GridSet& K, const ChainParams& p) {
    if (!K.empty() && K.depth() != p.depth)
        throw std::invalid_argument("chain_reachable: K depth must match graph depth");
    const int n = 1 << p.depth;
    const double s = 1.0 / n;
    const int j_lo = static_cast<int>(std::floor(p.window.y_min * n));
    const int j_hi = static_cast<int>(std::ceil(p.window.y_max * n)) - 1;
    const int rows = j_hi - j_lo + 1;
    if (rows <= 0) return false;

    GridSet ref(p.depth);
    GridBox zb = ref.box_of(z), wb = ref.box_of(w);
    if (zb.j < j_lo || zb.j > j_hi || wb.j < j_lo || wb.j > j_hi) return false;

    auto node = [&](GridBox b) { return static_cast<size_t>(b.j - j_lo) * n + b.i; };
    std::vector<uint8_t> seen(static_cast<size_t>(rows) * n, 0);
    std::queue<GridBox> q;
    seen[node(zb)] = 1;
    q.push(zb);
    const int reach = static_cast<int>(std::ceil(p.eps * n)) + 1;

    while (!q.empty()) {
        GridBox b = q.front();
        q.pop();
        if (b == wb) return true;
        AnnulusPoint c{(b.i + 0.5) * s, (b.j + 0.5) * s};
        AnnulusPoint y = project(F(CoverPoint{c.x, c.y}));

        auto visit = [&](GridBox t) {
            t = ref.wrap(t);
            if (t.j < j_lo || t.j > j_hi) return;
            size_t id = node(t);
            if (seen[id]) return;
            seen[id] = 1;
            q.push(t);
        };

        // no-jump edge: the box containing f(center)
        GridBox img = ref.box_of(y);
        if (img.j >= j_lo && img.j <= j_hi) visit(img);

        // jumps of size < eps, allowed only inside K
        if (!K.empty() && K.contains_point(y)) {
            int bi = img.i, bj = img.j;
            for (int di = -reach; di <= reach; ++di)
                for (int dj = -reach; dj <= reach; ++dj) {
                    GridBox t = ref.wrap(GridBox{bi + di, bj + dj});
                    if (!K.contains(t)) continue;
                    // distance from y to the target box
                    double bx_lo = t.i * s, bx_hi = (t.i + 1) * s;
                    double dx = 0.0;
                    double yx = mod1(y.x);
                    if (yx < bx_lo || yx > bx_hi) {
                        double d1 = circle_dist(yx, bx_lo);
                        double d2 = circle_dist(yx, bx_hi);
                        dx = std::min(d1, d2);
                    }
                    double by_lo = t.j * s, by_hi = (t.j + 1) * s;
                    double dy = 0.0;
                    if (y.y < by_lo) dy = by_lo - y.y;
                    else if (y.y > by_hi) dy = y.y - by_hi;
                    if (std::sqrt(dx * dx + dy * dy) < p.eps) visit(t);
                }
        }
    }
    return false;
}

} // namespace rotolab
