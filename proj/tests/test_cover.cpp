#include <doctest.h>
#include <initializer_list>

#include "rotolab/cover.hpp"
#include "rotolab/mat2.hpp"

using namespace rotolab;

TEST_CASE("project reduces the abscissa to [0,1)") {
    CHECK(project(CoverPoint{2.25, 0.5}).x == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(project(CoverPoint{2.25, 0.5}).y == 0.5);
    CHECK(project(CoverPoint{-0.25, 1.0}).x == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(project(CoverPoint{3.0, -2.0}).x == 0.0);
    CHECK(project(CoverPoint{3.0, -2.0}).y == -2.0);
}

TEST_CASE("mod1 stays in [0,1) near the wrap") {
    CHECK(mod1(0.0) == 0.0);
    CHECK(mod1(1.0) == 0.0);
    CHECK(mod1(-1e-18) < 1.0);   // the rounding guard
    CHECK(mod1(-1e-18) >= 0.0);
    for (double x : {-7.3, -1.0, -0.5, 0.999999, 12.75})
        CHECK(mod1(x) == doctest::Approx(x - std::floor(x)).epsilon(1e-15));
}

TEST_CASE("deck shift translates the abscissa only") {
    CoverPoint p{0.3, -1.5};
    CoverPoint q = apply(DeckShift{3}, p);
    CHECK(q.x == doctest::Approx(3.3));
    CHECK(q.y == -1.5);
    CHECK(apply(DeckShift{-1}, q).x == doctest::Approx(2.3));
}

TEST_CASE("lift_near picks the representative within 1/2 of the base") {
    CoverPoint l = lift_near(AnnulusPoint{0.9, 0.0}, CoverPoint{2.0, 0.0});
    CHECK(l.x == doctest::Approx(1.9));
    l = lift_near(AnnulusPoint{0.1, 0.0}, CoverPoint{2.0, 0.0});
    CHECK(l.x == doctest::Approx(2.1));
    l = lift_near(AnnulusPoint{0.0, 0.0}, CoverPoint{-3.0, 0.0});
    CHECK(l.x == doctest::Approx(-3.0));
}

TEST_CASE("lift_near tie at distance exactly 1/2 resolves to base + 1/2") {
    CoverPoint l = lift_near(AnnulusPoint{0.75, 0.0}, CoverPoint{0.25, 0.0});
    CHECK(l.x == doctest::Approx(0.75));
    l = lift_near(AnnulusPoint{0.25, 0.0}, CoverPoint{1.75, 0.0});
    CHECK(l.x == doctest::Approx(2.25));
}

TEST_CASE("lift_near property: distance to base at most 1/2") {
    for (int i = 0; i < 100; ++i) {
        double a = 0.01 * i;
        for (double base : {-2.7, 0.0, 0.49, 5.2}) {
            CoverPoint l = lift_near(AnnulusPoint{mod1(a), 0.0}, CoverPoint{base, 0.0});
            CHECK(mod1(l.x) == doctest::Approx(mod1(a)).epsilon(1e-12));
            CHECK(std::fabs(l.x - base) <= 0.5 + 1e-12);
        }
    }
}

TEST_CASE("circle_dist wraps") {
    CHECK(circle_dist(0.1, 0.9) == doctest::Approx(0.2));
    CHECK(circle_dist(0.0, 0.5) == doctest::Approx(0.5));
    CHECK(circle_dist(1.2, 0.2) == doctest::Approx(0.0));
    CHECK(annulus_dist(AnnulusPoint{0.95, 1.0}, AnnulusPoint{0.05, 1.0}) ==
          doctest::Approx(0.1));
}

TEST_CASE("Mat2 norm matches the singular value of known matrices") {
    Mat2 id = Mat2::identity();
    CHECK(id.norm2() == doctest::Approx(1.0));
    CHECK(id.det() == 1.0);
    // shear [[1,1],[0,1]]: largest singular value is the golden ratio
    Mat2 s{1, 1, 0, 1};
    CHECK(s.norm2() == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    Mat2 d{3, 0, 0, 0.5};
    CHECK(d.norm2() == doctest::Approx(3.0));
    CHECK(d.det() == doctest::Approx(1.5));
    // norm is submultiplicative and exact under products of diagonals
    CHECK((s * d).det() == doctest::Approx(1.5));
    CHECK((s * d).norm2() <= s.norm2() * d.norm2() + 1e-12);
}
