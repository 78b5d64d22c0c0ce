#include "rotolab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rotolab {

void GridSet::normalize() {
    if (!dirty_) return;
    std::sort(boxes_.begin(), boxes_.end());
    boxes_.erase(std::unique(boxes_.begin(), boxes_.end()), boxes_.end());
    dirty_ = false;
}

bool GridSet::contains(GridBox b) const {
    b = wrap(b);
    return std::binary_search(boxes_.begin(), boxes_.end(), b);
}

GridBox GridSet::box_of(AnnulusPoint p) const {
    int n = side();
    int i = static_cast<int>(std::floor(mod1(p.x) * n));
    if (i >= n) i = n - 1;
    int j = static_cast<int>(std::floor(p.y * n));
    return GridBox{i, j};
}

bool GridSet::contains_point(AnnulusPoint p) const { return contains(box_of(p)); }

GridSet GridSet::full_band(int depth, Band band) {
    GridSet s(depth);
    int n = 1 << depth;
    int j_lo = static_cast<int>(std::floor(band.y_min * n));
    int j_hi = static_cast<int>(std::ceil(band.y_max * n)) - 1;
    s.boxes_.reserve(static_cast<size_t>(n) * (j_hi - j_lo + 1));
    for (int i = 0; i < n; ++i)
        for (int j = j_lo; j <= j_hi; ++j) s.boxes_.push_back(GridBox{i, j});
    std::sort(s.boxes_.begin(), s.boxes_.end());
    return s;
}

GridSet GridSet::unite(const GridSet& o) const {
    if (depth_ != o.depth_) throw std::invalid_argument("GridSet depth mismatch");
    GridSet r(depth_);
    r.boxes_.resize(boxes_.size() + o.boxes_.size());
    auto it = std::set_union(boxes_.begin(), boxes_.end(), o.boxes_.begin(), o.boxes_.end(), r.boxes_.begin());
    r.boxes_.resize(it - r.boxes_.begin());
    return r;
}

GridSet GridSet::intersect(const GridSet& o) const {
    if (depth_ != o.depth_) throw std::invalid_argument("GridSet depth mismatch");
    GridSet r(depth_);
    r.boxes_.resize(std::min(boxes_.size(), o.boxes_.size()));
    auto it = std::set_intersection(boxes_.begin(), boxes_.end(), o.boxes_.begin(), o.boxes_.end(), r.boxes_.begin());
    r.boxes_.resize(it - r.boxes_.begin());
    return r;
}

bool GridSet::subset_of(const GridSet& o) const {
    if (depth_ != o.depth_) throw std::invalid_argument("GridSet depth mismatch");
    return std::includes(o.boxes_.begin(), o.boxes_.end(), boxes_.begin(), boxes_.end());
}

GridSet GridSet::dilate() const {
    GridSet r(depth_);
    r.boxes_.reserve(boxes_.size() * 4);
    for (GridBox b : boxes_)
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                r.boxes_.push_back(wrap(GridBox{b.i + di, b.j + dj}));
    r.dirty_ = true;
    r.normalize();
    return r;
}

GridSet GridSet::erode() const {
    GridSet r(depth_);
    for (GridBox b : boxes_) {
        bool keep = true;
        for (int di = -1; di <= 1 && keep; ++di)
            for (int dj = -1; dj <= 1 && keep; ++dj)
                if (!contains(GridBox{b.i + di, b.j + dj})) keep = false;
        if (keep) r.boxes_.push_back(b);
    }
    return r;
}

GridSet GridSet::subdivide() const {
    GridSet r(depth_ + 1);
    r.boxes_.reserve(boxes_.size() * 4);
    for (GridBox b : boxes_) {
        r.boxes_.push_back(GridBox{2 * b.i, 2 * b.j});
        r.boxes_.push_back(GridBox{2 * b.i + 1, 2 * b.j});
        r.boxes_.push_back(GridBox{2 * b.i, 2 * b.j + 1});
        r.boxes_.push_back(GridBox{2 * b.i + 1, 2 * b.j + 1});
    }
    std::sort(r.boxes_.begin(), r.boxes_.end());
    return r;
}

void GridSet::y_extent(double& lo, double& hi) const {
    lo = 1e300;
    hi = -1e300;
    double s = box_size();
    for (GridBox b : boxes_) {
        lo = std::min(lo, b.j * s);
        hi = std::max(hi, (b.j + 1) * s);
    }
}

void GridSet::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    const char magic[4] = {'R', 'G', 'S', '1'};
    out.write(magic, 4);
    int32_t d = depth_;
    out.write(reinterpret_cast<const char*>(&d), 4);
    // run-length along j within each column i
    std::vector<int32_t> runs; // triples (i, j0, len)
    size_t k = 0;
    while (k < boxes_.size()) {
        int32_t i = boxes_[k].i, j0 = boxes_[k].j;
        int32_t len = 1;
        while (k + len < boxes_.size() && boxes_[k + len].i == i &&
               boxes_[k + len].j == j0 + len)
            ++len;
        runs.push_back(i);
        runs.push_back(j0);
        runs.push_back(len);
        k += len;
    }
    int64_t nr = static_cast<int64_t>(runs.size() / 3);
    out.write(reinterpret_cast<const char*>(&nr), 8);
    if (!runs.empty())
        out.write(reinterpret_cast<const char*>(runs.data()), runs.size() * 4);
}

GridSet GridSet::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::string(magic, 4) != "RGS1") throw std::runtime_error("bad grid file " + path);
    int32_t d = 0;
    in.read(reinterpret_cast<char*>(&d), 4);
    int64_t nr = 0;
    in.read(reinterpret_cast<char*>(&nr), 8);
    GridSet s(d);
    for (int64_t r = 0; r < nr; ++r) {
        int32_t v[3];
        in.read(reinterpret_cast<char*>(v), 12);
        for (int32_t t = 0; t < v[2]; ++t) s.boxes_.push_back(GridBox{v[0], v[1] + t});
    }
    if (!in) throw std::runtime_error("truncated grid file " + path);
    std::sort(s.boxes_.begin(), s.boxes_.end());
    return s;
}

void GridSet::write_svg(const std::string& path, Band window) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    const double W = 800.0;
    double h_units = window.y_max - window.y_min;
    double H = W * h_units;
    double s = box_size();
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    char buf[160];
    for (GridBox b : boxes_) {
        double x = b.i * s * W;
        double y = (window.y_max - (b.j + 1) * s) / h_units * H;
        double wpx = s * W, hpx = s / h_units * H;
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#33557f\"/>\n",
                      x, y, wpx, hpx);
        out << buf;
    }
    out << "</svg>\n";
}

} // namespace rotolab
