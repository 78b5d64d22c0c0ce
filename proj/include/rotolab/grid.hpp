#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotolab/cover.hpp"

namespace rotolab {

// Dyadic box on the annulus at a given depth d: covers
// [i,i+1) x [j,j+1) scaled by 2^-d, with i taken mod 2^d (circle direction).
struct GridBox {
    int32_t i = 0;
    int32_t j = 0;
    friend bool operator<(const GridBox& a, const GridBox& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    }
    friend bool operator==(const GridBox& a, const GridBox& b) {
        return a.i == b.i && a.j == b.j;
    }
};

// Sorted, duplicate-free set of dyadic boxes at a fixed depth.
class GridSet {
public:
    GridSet() = default;
    explicit GridSet(int depth) : depth_(depth) {}

    int depth() const { return depth_; }
    int side() const { return 1 << depth_; }
    double box_size() const { return 1.0 / side(); }

    const std::vector<GridBox>& boxes() const { return boxes_; }
    size_t count() const { return boxes_.size(); }
    bool empty() const { return boxes_.empty(); }

    bool contains(GridBox b) const;
    bool contains_point(AnnulusPoint p) const;
    GridBox box_of(AnnulusPoint p) const;

    void insert(GridBox b) { boxes_.push_back(wrap(b)); dirty_ = true; }
    void normalize();

    AnnulusPoint center(GridBox b) const {
        double s = box_size();
        return AnnulusPoint{(b.i + 0.5) * s, (b.j + 0.5) * s};
    }

    GridBox wrap(GridBox b) const {
        int n = side();
        int i = b.i % n;
        if (i < 0) i += n;
        return GridBox{i, b.j};
    }

    // Full cover of S^1 x [band] at a depth.
    static GridSet full_band(int depth, Band band);

    GridSet unite(const GridSet& o) const;
    GridSet intersect(const GridSet& o) const;
    bool subset_of(const GridSet& o) const;

    // One-box dilation / erosion with the 8-neighborhood ring (wrap in i).
    GridSet dilate() const;
    GridSet erode() const;

    // Refine every box into its four depth+1 children.
    GridSet subdivide() const;

    // y-range actually occupied (in annulus coordinates).
    void y_extent(double& lo, double& hi) const;

    // Run-length binary serialization.
    void save(const std::string& path) const;
    static GridSet load(const std::string& path);

    void write_svg(const std::string& path, Band window) const;

private:
    int depth_ = 0;
    bool dirty_ = false;
    std::vector<GridBox> boxes_;
};

} // namespace rotolab
