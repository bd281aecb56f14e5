#include "doctest.h"

#include <cmath>

#include "fpp/nu.hpp"

using namespace fpp;

namespace {

NuEstimate manual_entry(const Vec& v, double value, double se = 0.0) {
    NuEstimate e;
    e.v = normalized(v);
    e.meshes = {1};
    e.means = {value};
    e.stderrs = {se};
    e.counts = {1};
    e.value = value;
    e.stderr_value = se;
    return e;
}

}  // namespace

TEST_CASE("constant capacities give flow constant exactly 1 in the axis direction") {
    auto est = estimate_nu({1.0, 0.0}, 1.0, 1.0, {4, 8}, 3, CapacityLaw::constant(1.0), 42);
    for (double m : est.means) CHECK(m == doctest::Approx(1.0));
    CHECK(est.value == doctest::Approx(1.0));
}

TEST_CASE("estimates for opposite directions agree statistically") {
    auto a = estimate_nu({1.0, 0.0}, 1.0, 1.0, {8}, 40, CapacityLaw::exponential(1.0), 7);
    auto b = estimate_nu({-1.0, 0.0}, 1.0, 1.0, {8}, 40, CapacityLaw::exponential(1.0), 8);
    double se = std::sqrt(a.stderr_value * a.stderr_value + b.stderr_value * b.stderr_value);
    CHECK(std::abs(a.value - b.value) <= 3 * se + 1e-9);
}

TEST_CASE("axis estimate stays below the mean capacity") {
    auto est = estimate_nu({1.0, 0.0}, 1.0, 1.0, {8}, 40, CapacityLaw::exponential(1.0), 3);
    CHECK(est.value <= 1.0 + 3 * est.stderr_value);
    CHECK(est.value > 0.0);
}

TEST_CASE("zero flow constant criterion from mass at zero") {
    CHECK(mass_at_zero(CapacityLaw::bernoulli(0.4, 0.0, 1.0)) == doctest::Approx(0.6));
    CHECK(mass_at_zero(CapacityLaw::exponential(1.0)) == 0.0);
    CHECK(mass_at_zero(CapacityLaw::constant(0.0)) == 1.0);

    CHECK(nu_zero_check(CapacityLaw::bernoulli(0.4, 0.0, 1.0), 2));
    CHECK(!nu_zero_check(CapacityLaw::exponential(1.0), 2));
    CHECK(nu_zero_check(CapacityLaw::constant(0.0), 2));
    CHECK(nu_zero_check(CapacityLaw::constant(0.0), 3));
    CHECK_THROWS(nu_zero_check(CapacityLaw::exponential(1.0), 4));
    CHECK(!nu_zero_check(CapacityLaw::exponential(1.0), 4, 0.1));
}

TEST_CASE("homogeneous extension scales and vanishes at zero") {
    NuTable table;
    table.entries = {manual_entry({1.0, 0.0}, 1.0), manual_entry({0.0, 1.0}, 2.0)};
    CHECK(nu_homogeneous(table, {0.0, 0.0}) == 0.0);
    CHECK(nu_homogeneous(table, {2.0, 0.0}) == doctest::Approx(2.0));
    CHECK(nu_homogeneous(table, {0.0, -3.0}) == doctest::Approx(6.0));
    for (double c : {0.5, 2.0, 7.0})
        CHECK(nu_homogeneous(table, {c, 0.0}) ==
              doctest::Approx(c * nu_homogeneous(table, {1.0, 0.0})));
    NuTable empty;
    CHECK_THROWS(nu_homogeneous(empty, {1.0, 0.0}));
}

TEST_CASE("table lookup matches opposite directions and reports missing ones") {
    NuTable table;
    table.entries = {manual_entry({1.0, 0.0}, 1.5)};
    CHECK(table.nu({-1.0, 0.0}) == doctest::Approx(1.5));
    CHECK_THROWS(table.nu({0.0, 1.0}));
}

TEST_CASE("triangle comparison with exact table values") {
    // Unit-capacity analytic values in two dimensions: axis directions cost
    // 1, the diagonal direction costs sqrt(2) per unit length.
    NuTable table;
    table.entries = {manual_entry({1.0, 0.0}, 1.0), manual_entry({0.0, 1.0}, 1.0),
                     manual_entry({1.0, 1.0}, std::sqrt(2.0)),
                     manual_entry({1.0, -1.0}, std::sqrt(2.0))};

    SUBCASE("right isoceles triangle holds") {
        auto res = weak_triangle_check({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, table);
        CHECK(res.pass);
    }
    SUBCASE("degenerate triangle is rejected") {
        CHECK_THROWS(weak_triangle_check({0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, table));
    }
    SUBCASE("identical normals reduce to the length triangle inequality") {
        NuTable flat;
        flat.entries = {manual_entry({1.0, 0.0}, 1.0), manual_entry({0.0, 1.0}, 1.0),
                        manual_entry({1.0, 1.0}, 1.0), manual_entry({1.0, -1.0}, 1.0)};
        auto res = weak_triangle_check({0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}, flat);
        CHECK(res.pass);
    }
}

TEST_CASE("capacity integral over a clipped candidate boundary") {
    NuTable table;
    table.entries = {manual_entry({1.0, 0.0}, 1.0), manual_entry({0.0, 1.0}, 1.0)};
    ConvexPolytope half(2, {{{1.0, 0.0}, 0.5},
                            {{-1.0, 0.0}, 2.0},
                            {{0.0, 1.0}, 3.0},
                            {{0.0, -1.0}, 2.0}});
    PolyhedralSet P({half});
    std::vector<ConvexPolytope> omega = {ConvexPolytope::box({0, 0}, {1, 1})};
    double base = capacity_integral(P, omega, {}, table);
    CHECK(base == doctest::Approx(1.0));

    SUBCASE("doubling the table doubles the integral") {
        NuTable twice;
        twice.entries = {manual_entry({1.0, 0.0}, 2.0), manual_entry({0.0, 1.0}, 2.0)};
        CHECK(capacity_integral(P, omega, {}, twice) == doctest::Approx(2.0 * base));
    }
    SUBCASE("empty clip region integrates to zero") {
        std::vector<ConvexPolytope> far = {ConvexPolytope::box({5, 5}, {6, 6})};
        CHECK(capacity_integral(P, far, {}, table) == doctest::Approx(0.0));
    }
}

TEST_CASE("finite-family candidate minimization on the unit square") {
    auto dom = ContinuousDomain::unit_box(2);
    NuTable table;
    table.entries = {manual_entry({1.0, 0.0}, 1.0), manual_entry({0.0, 1.0}, 1.0)};
    auto half = [](double c) {
        return PolyhedralSet({ConvexPolytope(2, {{{1.0, 0.0}, c},
                                                 {{-1.0, 0.0}, 2.0},
                                                 {{0.0, 1.0}, 3.0},
                                                 {{0.0, -1.0}, 2.0}})});
    };
    std::vector<PolyhedralSet> family = {half(0.25), half(0.5), half(0.75)};
    auto res = phi_tilde(dom, family, table);
    CHECK(res.value == doctest::Approx(1.0));
    for (const auto& cand : res.candidates) CHECK(cand.admissible());

    SUBCASE("non-transverse candidates are filtered with a witness") {
        // A half-plane whose boundary coincides with the domain's right side.
        family.push_back(half(1.0));
        auto res2 = phi_tilde(dom, family, table);
        CHECK(res2.value == doctest::Approx(1.0));
        CHECK(!res2.candidates.back().admissible());
    }
    SUBCASE("adding candidates never increases the minimum") {
        NuTable table2;
        table2.entries = {manual_entry({1.0, 0.0}, 1.0), manual_entry({0.0, 1.0}, 0.25)};
        // A notch candidate with horizontal pieces cheaper than vertical.
        auto res_before = phi_tilde(dom, {half(0.5)}, table2);
        std::vector<PolyhedralSet> fam2 = {half(0.5),
                                           PolyhedralSet({ConvexPolytope(
                                               2, {{{0.0, 1.0}, 0.35},
                                                   {{-1.0, 0.0}, 2.0},
                                                   {{0.0, -1.0}, 2.0},
                                                   {{1.0, 0.0}, 3.0}})})};
        // The horizontal half-plane candidate fails admissibility (it does
        // not separate the patches), so the minimum is unchanged.
        auto res_after = phi_tilde(dom, fam2, table2);
        CHECK(res_after.value <= res_before.value + 1e-12);
    }
    SUBCASE("a family with no admissible member is an error") {
        CHECK_THROWS(phi_tilde(dom, {half(1.0)}, table));
    }
}

TEST_CASE("nu table serialization round trips") {
    NuTable table;
    table.seed = 99;
    table.law_json = CapacityLaw::exponential(1.0).to_json();
    table.entries = {manual_entry({1.0, 0.0}, 1.25, 0.01)};
    auto back = NuTable::from_json(table.to_json());
    CHECK(back.seed == 99);
    REQUIRE(back.entries.size() == 1);
    CHECK(back.entries[0].value == doctest::Approx(1.25));
    CHECK(back.nu({1.0, 0.0}) == doctest::Approx(1.25));
    CHECK(table.to_csv().find("direction,mesh,mean") == 0);
}
