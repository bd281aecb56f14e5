#include "doctest.h"

#include <cmath>

#include "fpp/capacity.hpp"
#include "fpp/cylflow.hpp"
#include "fpp/geometry.hpp"

using namespace fpp;

namespace {

ConvexPolytope half_plane_in_box(double c) {
    // x1 <= c clipped to a box comfortably containing (0,1)^2.
    return ConvexPolytope(2, {{{1.0, 0.0}, c},
                              {{-1.0, 0.0}, 2.0},
                              {{0.0, 1.0}, 3.0},
                              {{0.0, -1.0}, 2.0}});
}

}  // namespace

TEST_CASE("transversality: orthogonal faces pass, coincident faces fail") {
    PolyhedralSet square({ConvexPolytope::box({0, 0}, {1, 1})});

    SUBCASE("orthogonal crossing") {
        PolyhedralSet slab({half_plane_in_box(0.5)});
        auto tv = transverse(slab, square);
        CHECK(tv.ok);
        CHECK(tv.min_angle == doctest::Approx(3.14159265 / 2).epsilon(1e-6));
    }
    SUBCASE("coincident parallel faces with overlap") {
        PolyhedralSet other({ConvexPolytope::box({0, 0}, {1, 2})});
        auto tv = transverse(other, square);
        CHECK(!tv.ok);
    }
    SUBCASE("45 degree contact reports the angle") {
        double s = std::sqrt(0.5);
        auto q = ConvexPolytope::cube({0.5, 0.0}, {{s, s}, {-s, s}}, 0.4);
        auto tv = transverse(PolyhedralSet({q}), square);
        CHECK(tv.ok);
        CHECK(tv.min_angle == doctest::Approx(3.14159265 / 4).epsilon(1e-6));
    }
}

TEST_CASE("clipped surface measure") {
    PolyhedralSet P({half_plane_in_box(0.5)});
    std::vector<ConvexPolytope> omega = {ConvexPolytope::box({0, 0}, {1, 1})};

    SUBCASE("vertical cut inside the unit square has length 1") {
        CHECK(clip_surface_measure(P, omega) == doctest::Approx(1.0));
    }
    SUBCASE("disjoint region measures zero") {
        std::vector<ConvexPolytope> far = {ConvexPolytope::box({2, 0}, {3, 1})};
        CHECK(clip_surface_measure(P, far) == doctest::Approx(0.0));
    }
    SUBCASE("shrinking collar around the domain decreases monotonically") {
        PolyhedralSet tilted({ConvexPolytope(
            2, {{{std::sqrt(0.5), std::sqrt(0.5)}, 0.5}, {{-1.0, 0.0}, 2.0}, {{0.0, -1.0}, 2.0}})});
        double prev = 1e18;
        for (double delta : {0.2, 0.1, 0.05}) {
            std::vector<ConvexPolytope> collar = {omega[0].inflated(delta)};
            double m = clip_surface_measure(tilted, collar, omega);
            CHECK(m < prev);
            CHECK(m > 0.0);
            prev = m;
        }
    }
}

TEST_CASE("cube covering of the source side of the unit square") {
    auto dom = ContinuousDomain::unit_box(2);
    auto res = cube_cover(dom.source, dom, 0.1);
    REQUIRE(res.ok);
    CHECK(res.cover.parts().size() <= 11);
    CHECK(res.cover.parts().size() >= 8);
    // Every cube face is transverse to the domain boundary.
    auto tv = transverse(res.cover, dom.body);
    CHECK(tv.ok);
    CHECK(res.basis_gap > 0.3);
    // The source side lies in the interior of the union.
    for (int k = 0; k <= 1000; ++k) {
        Vec x = {0.0, k / 1000.0};
        CHECK(res.cover.strictly_contains(x));
    }
    // Distance to the sink stays positive (triangle inequality bound).
    for (const auto& q : res.cover.parts())
        for (const auto& snk : dom.sink) CHECK(polytope_distance(q, snk) > 0.5);
}

TEST_CASE("cube covering of an empty patch set is empty") {
    auto dom = ContinuousDomain::unit_box(2);
    auto res = cube_cover({}, dom, 0.1);
    CHECK(res.ok);
    CHECK(res.cover.parts().empty());
}

TEST_CASE("cube covering fails cleanly when cubes would reach the sink") {
    auto dom = ContinuousDomain::unit_box(2);
    auto res = cube_cover(dom.source, dom, 2.5);
    CHECK(!res.ok);
}

TEST_CASE("enlarged domain surrounds the original with a positive margin") {
    auto dom = ContinuousDomain::unit_box(2);
    PolyhedralSet P({half_plane_in_box(0.5)});
    auto enl = enlarge_domain(dom, P, 0.15);
    CHECK(enl.delta1 > 0.0);
    // Sampled containment: the delta1 collar is inside, and nothing escapes
    // the delta0 neighborhood.
    for (int k = 0; k < 400; ++k) {
        double t = k / 400.0;
        for (Vec x : {Vec{t, -enl.delta1 * 0.9}, Vec{t, 1.0 + enl.delta1 * 0.9},
                      Vec{-enl.delta1 * 0.9, t}, Vec{1.0 + enl.delta1 * 0.9, t}})
            CHECK(enl.omega_prime.body.contains(x));
    }
    for (const auto& part : enl.added.parts())
        for (const auto& v : part.vertices()) {
            CHECK(v[0] > -0.16);
            CHECK(v[0] < 1.16);
            CHECK(v[1] > -0.16);
            CHECK(v[1] < 1.16);
        }
    // The candidate surface stays transverse to the enlarged boundary.
    auto tv = transverse(P, enl.omega_prime.body);
    CHECK(tv.ok);
}

TEST_CASE("hypersquare covering of a unit segment face") {
    FaceRef H;
    H.origin = {0.5, 0.0};
    H.basis = {{0.0, 1.0}};
    H.normal = {1.0, 0.0};
    H.region.fd = 1;
    H.region.hs = {{{1.0}, 1.0}, {{-1.0}, 0.0}};

    SUBCASE("l = 0.2, budget 0.2: four pieces covering the middle") {
        auto cover = square_cover(H, 0.2, 0.2);
        REQUIRE(cover.size() == 4);
        double lo = 1e18, hi = -1e18;
        for (const auto& sq : cover) {
            CHECK(sq.rect.sides[0] == doctest::Approx(0.2));
            double t = sq.rect.center[1];
            lo = std::min(lo, t - 0.1);
            hi = std::max(hi, t + 0.1);
        }
        CHECK(lo == doctest::Approx(0.1));
        CHECK(hi == doctest::Approx(0.9));
    }
    SUBCASE("budget at least the face measure allows an empty cover") {
        CHECK(square_cover(H, 0.2, 1.5).empty());
    }
    SUBCASE("nonpositive budget is rejected") {
        CHECK_THROWS(square_cover(H, 0.2, 0.0));
    }
    SUBCASE("pieces are disjoint and the uncovered length is within budget") {
        for (double l : {0.3, 0.15, 0.07}) {
            auto cover = square_cover(H, l, 0.1);
            double covered = 0.0;
            for (std::size_t i = 0; i < cover.size(); ++i) {
                covered += cover[i].rect.sides[0];
                for (std::size_t j = i + 1; j < cover.size(); ++j) {
                    double gap = std::abs(cover[i].rect.center[1] - cover[j].rect.center[1]);
                    CHECK(gap >= (cover[i].rect.sides[0] + cover[j].rect.sides[0]) / 2 - 1e-9);
                }
            }
            CHECK(1.0 - covered <= 0.1 + 1e-9);
        }
    }
}

TEST_CASE("cylinder lattice sets on the unit square") {
    CylinderSpec c;
    c.base.center = {0.5, 0.5};
    c.base.frame = {{0.0, 1.0}};
    c.base.sides = {1.0};
    c.v = {1.0, 0.0};
    c.h = 0.5;
    c.one_sided = true;
    auto sets = cylinder_lattice_sets(c, 4);
    // cyl = [1/2, 1] x [0, 1]: 3 x 5 lattice points.
    CHECK(sets.points.size() == 15);
    CHECK(sets.top.size() == 5);
    CHECK(sets.bottom.size() == 5);
    for (std::size_t i : sets.top) CHECK(sets.points[i][0] == 4);
    for (std::size_t i : sets.bottom) CHECK(sets.points[i][0] == 2);
}

TEST_CASE("thin cylinders return empty sets without error") {
    CylinderSpec c;
    c.base.center = {0.5, 0.126};
    c.base.frame = {{1.0, 0.0}};
    c.base.sides = {0.9};
    c.v = {0.0, 1.0};
    c.h = 0.1;
    c.one_sided = true;
    auto sets = cylinder_lattice_sets(c, 4);
    CHECK(sets.points.empty());
}

TEST_CASE("top and bottom are disjoint once the cylinder is thick enough") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        double ang = keyed_uniform(seed, 1, 0) * 3.14159265;
        CylinderSpec c;
        c.base.center = {keyed_uniform(seed, 2, 0), keyed_uniform(seed, 3, 0)};
        c.base.frame = {{-std::sin(ang), std::cos(ang)}};
        c.base.sides = {0.5 + keyed_uniform(seed, 4, 0)};
        c.v = {std::cos(ang), std::sin(ang)};
        c.h = 0.3 + keyed_uniform(seed, 5, 0);
        c.one_sided = false;
        auto sets = cylinder_lattice_sets(c, 8);
        for (std::size_t t : sets.top)
            for (std::size_t b : sets.bottom) CHECK(t != b);
    }
}

TEST_CASE("side to side flow on unit capacities counts disjoint lattice lines") {
    CylinderSpec c;
    c.base.center = {0.0, 0.5};
    c.base.frame = {{0.0, 1.0}};
    c.base.sides = {1.0};
    c.v = {1.0, 0.0};
    c.h = 0.5;
    c.one_sided = false;
    CapacityField field{CapacityLaw::constant(1.0), 0};
    CHECK(tau(c, 4, field) == doctest::Approx(5.0));
    CapacityField zero{CapacityLaw::constant(0.0), 0};
    CHECK(tau(c, 4, zero) == doctest::Approx(0.0));
}

TEST_CASE("bottom to top flow matches the disjoint-lines count") {
    CylinderSpec c;
    c.base.center = {0.5, 0.5};
    c.base.frame = {{0.0, 1.0}};
    c.base.sides = {1.0};
    c.v = {1.0, 0.0};
    c.h = 0.5;
    c.one_sided = true;
    CapacityField field{CapacityLaw::constant(1.0), 0};
    CHECK(phi_cyl(c, 4, field) == doctest::Approx(5.0));
}

TEST_CASE("cylinder flows equal their min-cut values and obey the crossing bound") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        CylinderSpec c;
        c.base.center = {0.0, 0.5};
        c.base.frame = {{0.0, 1.0}};
        c.base.sides = {1.0};
        c.v = {1.0, 0.0};
        c.h = 0.5;
        c.one_sided = false;
        CapacityField field{CapacityLaw::exponential(1.0), seed};
        auto sets = cylinder_lattice_sets(c, 6);
        auto p = cylinder_problem(sets, field, CylinderVariable::Tau);
        double value = max_flow(p).value;
        CHECK(min_cut(p).capacity == doctest::Approx(value).epsilon(1e-9));
        CHECK(value == doctest::Approx(tau(c, 6, field)));
        // Edges crossing the base plane form a cut.
        double crossing = 0.0;
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            const auto& e = p.edges[i];
            if (sets.points[e.u][0] * sets.points[e.v][0] < 0 ||
                (sets.points[e.u][0] == 0) != (sets.points[e.v][0] == 0))
                crossing += e.cap;
        }
        CHECK(value <= crossing + 1e-9);
    }
}

TEST_CASE("splitting a cylinder in half never increases the side flow by more than the seam") {
    CylinderSpec full;
    full.base.center = {0.0, 0.5};
    full.base.frame = {{0.0, 1.0}};
    full.base.sides = {1.0};
    full.v = {1.0, 0.0};
    full.h = 0.5;
    full.one_sided = false;
    CylinderSpec lowhalf = full, highhalf = full;
    lowhalf.base.center = {0.0, 0.25};
    lowhalf.base.sides = {0.5};
    highhalf.base.center = {0.0, 0.75};
    highhalf.base.sides = {0.5};
    CapacityField field{CapacityLaw::constant(1.0), 0};
    int n = 4;
    double whole = tau(full, n, field);
    double parts = tau(lowhalf, n, field) + tau(highhalf, n, field);
    // Seam correction: unit capacities, edges within 1/n of the split line.
    double seam = 2.0 * (2.0 * full.h * n + 1);
    CHECK(whole <= parts + seam);
}
