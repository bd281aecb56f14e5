#include "doctest.h"

#include "fpp/domain.hpp"
#include "fpp/lattice.hpp"

using namespace fpp;

namespace {

std::size_t count_flag(const LatticeDomain& lat, bool (LatticeDomain::*f)(std::size_t) const) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < lat.vertex_count(); ++i)
        if ((lat.*f)(i)) ++c;
    return c;
}

}  // namespace

TEST_CASE("unit square at n = 4: interior and boundary vertex counts") {
    auto dom = ContinuousDomain::unit_box(2);
    dom.validate();
    auto lat = discretize(dom, 4);
    // Brute-force oracle: the 5x5 grid {0, 1/4, ..., 1}^2.
    std::size_t omega = 0, gamma = 0;
    for (std::size_t i = 0; i < lat.vertex_count(); ++i) {
        if (!lat.in_omega(i)) continue;
        ++omega;
        auto c = lat.coords(i);
        CHECK(c[0] >= 0);
        CHECK(c[0] <= 4);
        CHECK(c[1] >= 0);
        CHECK(c[1] <= 4);
        if (lat.in_gamma(i)) {
            ++gamma;
            CHECK((c[0] == 0 || c[0] == 4 || c[1] == 0 || c[1] == 4));
        }
    }
    CHECK(omega == 25);
    CHECK(lat.omega_count() == 25);
    CHECK(gamma == 16);
}

TEST_CASE("a point at distance exactly 1/n stays outside") {
    auto dom = ContinuousDomain::unit_box(2);
    auto lat = discretize(dom, 4);
    std::size_t idx = lat.index_of({-1, 2});  // point (-1/4, 1/2), distance 1/4
    REQUIRE(idx != LatticeDomain::npos);
    CHECK(!lat.in_omega(idx));
}

TEST_CASE("source and sink vertex tagging on the unit square") {
    auto dom = ContinuousDomain::unit_box(2);
    auto lat = discretize(dom, 4);
    std::size_t left = lat.index_of({0, 2});   // (0, 1/2)
    std::size_t right = lat.index_of({4, 2});  // (1, 1/2)
    REQUIRE(left != LatticeDomain::npos);
    REQUIRE(right != LatticeDomain::npos);
    CHECK(lat.in_gamma1(left));
    CHECK(lat.in_gamma2(right));
    CHECK(count_flag(lat, &LatticeDomain::in_gamma1) == 5);
    CHECK(count_flag(lat, &LatticeDomain::in_gamma2) == 5);
    for (std::size_t i = 0; i < lat.vertex_count(); ++i) {
        CHECK(!(lat.in_gamma1(i) && lat.in_gamma2(i)));
        if (lat.in_gamma1(i) || lat.in_gamma2(i)) CHECK(lat.in_gamma(i));
        if (lat.in_gamma(i)) CHECK(lat.in_omega(i));
    }
}

TEST_CASE("every boundary vertex has an outside neighbour") {
    auto dom = ContinuousDomain::unit_box(2);
    for (int n : {3, 4, 7}) {
        auto lat = discretize(dom, n);
        for (std::size_t i = 0; i < lat.vertex_count(); ++i) {
            if (!lat.in_gamma(i)) continue;
            auto c = lat.coords(i);
            bool outside_nb = false;
            for (std::size_t a = 0; a < 2; ++a)
                for (int s : {-1, 1}) {
                    auto c2 = c;
                    c2[a] += s;
                    std::size_t j = lat.index_of(c2);
                    if (j == LatticeDomain::npos || !lat.in_omega(j)) outside_nb = true;
                }
            CHECK(outside_nb);
        }
    }
}

TEST_CASE("edge restriction to regions") {
    auto dom = ContinuousDomain::unit_box(2);
    auto lat = discretize(dom, 4);

    SUBCASE("universal region keeps every graph edge") {
        // 5x5 grid graph: 2 * 5 * 4 = 40 edges.
        CHECK(lat.edges_in(EverythingRegion{}).size() == 40);
    }
    SUBCASE("region disjoint from the domain keeps nothing") {
        ConvexRegion neg(ConvexPolytope(2, {{{1.0, 0.0}, 0.0}}), true);
        CHECK(lat.edges_in(neg).empty());
    }
    SUBCASE("open slab keeps exactly the crossing horizontal edges") {
        ConvexRegion slab(ConvexPolytope(2, {{{1.0, 0.0}, 0.5}, {{-1.0, 0.0}, -0.25}}), true);
        auto edges = lat.edges_in(slab);
        CHECK(edges.size() == 5);
        for (const auto& e : edges) {
            CHECK(e.axis == 0);
            CHECK(e.base[0] == 1);
        }
    }
}

TEST_CASE("discretization is deterministic and refines toward the domain") {
    auto dom = ContinuousDomain::unit_box(2);
    for (int n : {4, 8, 16}) {
        auto lat = discretize(dom, n);
        for (std::size_t i = 0; i < lat.vertex_count(); ++i) {
            if (!lat.in_omega(i)) continue;
            Vec x = lat.point(i);
            double dist = 0.0;
            for (double c : x) dist = std::max({dist, -c, c - 1.0});
            CHECK(dist <= 4.0 / n);
        }
    }
    auto a = discretize(dom, 8);
    auto b = discretize(dom, 8);
    CHECK(a.omega_count() == b.omega_count());
}

TEST_CASE("an empty domain body reports an empty discretization") {
    ContinuousDomain dom;
    dom.d = 2;
    // Contradictory half-spaces: x1 <= 0 and x1 >= 1.
    dom.body = PolyhedralSet({ConvexPolytope(2, {{{1.0, 0.0}, 0.0}, {{-1.0, 0.0}, -1.0}})});
    CHECK_THROWS_AS(discretize(dom, 4), EmptyDiscretization);
}

TEST_CASE("edge keys are canonical and collision-free locally") {
    GridEdge a{{0, 0}, 0}, b{{0, 0}, 1}, c{{1, 0}, 0};
    CHECK(a.key() != b.key());
    CHECK(a.key() != c.key());
    CHECK(a.key() == GridEdge{{0, 0}, 0}.key());
}

TEST_CASE("domain JSON round trip preserves the discretization") {
    auto dom = ContinuousDomain::unit_box(2);
    auto dom2 = ContinuousDomain::from_json(dom.to_json());
    auto a = discretize(dom, 5);
    auto b = discretize(dom2, 5);
    CHECK(a.omega_count() == b.omega_count());
    CHECK(a.vertex_count() == b.vertex_count());
}
