#include "doctest.h"

#include <cmath>

#include "fpp/polytope.hpp"

using namespace fpp;

TEST_CASE("unit square: membership, vertices, distances") {
    auto sq = ConvexPolytope::box({0, 0}, {1, 1});
    CHECK(sq.contains({0.5, 0.5}));
    CHECK(sq.contains({0.0, 0.0}));
    CHECK(sq.strictly_contains({0.5, 0.5}));
    CHECK(!sq.strictly_contains({0.0, 0.5}));
    CHECK(!sq.contains({1.1, 0.5}));
    CHECK(sq.vertices().size() == 4);
    CHECK(sq.dinf({1.5, 0.5}) == doctest::Approx(0.5));
    CHECK(sq.dinf({0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(sq.d2({2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(sq.support({1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(sq.support({-1.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("unit cube faces: six faces, axis normals, unit areas") {
    auto cube = ConvexPolytope::box({0, 0, 0}, {1, 1, 1});
    auto fs = polytope_faces(cube);
    REQUIRE(fs.size() == 6);
    double total = 0.0;
    for (const auto& f : fs) {
        CHECK(f.area == doctest::Approx(1.0));
        total += f.area;
        int axis_like = 0;
        for (double c : f.normal)
            if (std::abs(std::abs(c) - 1.0) < 1e-9) ++axis_like;
        CHECK(axis_like == 1);
    }
    CHECK(total == doctest::Approx(6.0));
}

TEST_CASE("half-space slab clipped to a box has matching face areas") {
    // x1 <= 1/2 within the unit cube.
    auto cube = ConvexPolytope::box({0, 0, 0}, {1, 1, 1});
    auto hs = cube.halfspaces();
    hs.push_back({{1, 0, 0}, 0.5});
    ConvexPolytope slab(3, hs);
    auto fs = polytope_faces(slab);
    REQUIRE(fs.size() == 6);
    double total = 0.0;
    for (const auto& f : fs) total += f.area;
    // Two unit squares (x1 = 0 and x1 = 1/2) and four half squares.
    CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("union of two adjacent unit squares: outer boundary only") {
    PolyhedralSet u({ConvexPolytope::box({0, 0}, {1, 1}), ConvexPolytope::box({1, 0}, {2, 1})});
    CHECK(u.surface_area() == doctest::Approx(6.0));
}

TEST_CASE("union of two overlapping squares: shared boundary not counted twice") {
    PolyhedralSet u(
        {ConvexPolytope::box({0, 0}, {1, 1}), ConvexPolytope::box({0.5, 0}, {1.5, 1})});
    // Perimeter of the 1.5 x 1 rectangle.
    CHECK(u.surface_area() == doctest::Approx(5.0));
}

TEST_CASE("interval union measure") {
    auto iv = [](double a, double b) {
        PlanarPoly p;
        p.fd = 1;
        p.hs = {{{1.0}, b}, {{-1.0}, -a}};
        return p;
    };
    CHECK(union_measure({iv(0, 1), iv(0.5, 2)}, 1) == doctest::Approx(2.0));
    CHECK(union_measure({iv(0, 1), iv(0.25, 0.5)}, 1) == doctest::Approx(1.0));
    CHECK(union_measure({iv(0, 1), iv(2, 3)}, 1) == doctest::Approx(2.0));
    CHECK(union_measure({}, 1) == doctest::Approx(0.0));
}

TEST_CASE("planar union measure with overlap") {
    auto sqp = [](double x0, double y0, double x1, double y1) {
        PlanarPoly p;
        p.fd = 2;
        p.hs = {{{1, 0}, x1}, {{-1, 0}, -x0}, {{0, 1}, y1}, {{0, -1}, -y0}};
        return p;
    };
    CHECK(union_measure({sqp(0, 0, 1, 1), sqp(0.5, 0, 1.5, 1)}, 2) == doctest::Approx(1.5));
    // A tilted triangle against a square.
    PlanarPoly tri;
    tri.fd = 2;
    tri.hs = {{{-1, 0}, 0.0}, {{0, -1}, 0.0}, {{1, 1}, 1.0}};
    CHECK(tri.measure() == doctest::Approx(0.5));
    CHECK(union_measure({tri, sqp(0, 0, 1, 1)}, 2) == doctest::Approx(1.0));
}

TEST_CASE("polytope distance between separated boxes") {
    auto a = ConvexPolytope::box({0, 0}, {1, 1});
    auto b = ConvexPolytope::box({2, 0}, {3, 1});
    CHECK(polytope_distance(a, b) == doctest::Approx(1.0));
    auto c = ConvexPolytope::box({2, 2}, {3, 3});
    CHECK(polytope_distance(a, c) == doctest::Approx(std::sqrt(2.0)));
    CHECK(polytope_distance(a, a) == doctest::Approx(0.0));
}

TEST_CASE("slice of a square is an interval of the right length") {
    auto sq = ConvexPolytope::box({0, 0}, {1, 1});
    auto p = sq.slice({0.5, 0.0}, {{0.0, 1.0}});
    auto iv = p.interval();
    REQUIRE(iv.has_value());
    CHECK(iv->second - iv->first == doctest::Approx(1.0));
}

TEST_CASE("tilted cube builder produces the right square") {
    double s = std::sqrt(0.5);
    std::vector<Vec> basis = {{s, s}, {-s, s}};
    auto q = ConvexPolytope::cube({0.0, 0.0}, basis, 1.0);
    CHECK(q.contains({0.0, 0.0}));
    CHECK(q.contains({0.0, 0.7}));
    CHECK(!q.contains({0.5, 0.5}));
    auto fs = polytope_faces(q);
    REQUIRE(fs.size() == 4);
    for (const auto& f : fs) CHECK(f.area == doctest::Approx(1.0));
}
