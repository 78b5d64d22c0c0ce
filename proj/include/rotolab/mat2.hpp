#pragma once

#include <cmath>

namespace rotolab {

// Plain 2x2 matrix, row major: [[a, b], [c, d]].
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return Mat2{}; }

    Mat2 operator*(const Mat2& o) const {
        return Mat2{a * o.a + b * o.c, a * o.b + b * o.d,
                    c * o.a + d * o.c, c * o.b + d * o.d};
    }

    double det() const { return a * d - b * c; }

    // Exact operator 2-norm of a 2x2 matrix (largest singular value):
    // sigma^2 = (t + sqrt(t^2 - 4 det^2)) / 2 with t = sum of squares.
    double norm2() const {
        double t = a * a + b * b + c * c + d * d;
        double dd = det();
        double disc = t * t - 4.0 * dd * dd;
        if (disc < 0.0) disc = 0.0; // numerical guard
        return std::sqrt(0.5 * (t + std::sqrt(disc)));
    }
};

} // namespace rotolab
