#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "fpp/cylflow.hpp"
#include "fpp/flow.hpp"
#include "fpp/lattice.hpp"
#include "fpp/ldp.hpp"

using namespace fpp;

namespace {

// phi_n / n^{d-1} for the constant(1) field on the unit box, the exact
// reference value for the deterministic tail tests.
double unit_flow_per_area(const ContinuousDomain& dom, int n) {
    LatticeDomain lat = discretize(dom, n);
    FlowProblem p = domain_problem(lat, CapacityField{CapacityLaw::constant(1.0), 0});
    return max_flow(p).value / std::pow(double(n), double(dom.d) - 1.0);
}

}  // namespace

TEST_CASE("deterministic fields give exact zero-one tail probabilities") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::constant(1.0);
    double value = unit_flow_per_area(dom, 8);
    TailEstimate above = tail_prob(dom, law, value * 1.01, 8, 50, 0.0, 11);
    CHECK(above.p_hat == 0.0);
    CHECK(above.hits == 0);
    CHECK(above.rule_of_three);
    CHECK(above.ci_hi == doctest::Approx(3.0 / 50).epsilon(1e-12));
    CHECK(above.rate < 0.0);  // reported from the rule-of-three bound
    TailEstimate below = tail_prob(dom, law, value * 0.99, 8, 50, 0.0, 11);
    CHECK(below.p_hat == 1.0);
    CHECK(below.hits == 50);
    CHECK(below.rate == 0.0);
}

TEST_CASE("tail_prob rejects bad arguments") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    CHECK_THROWS_AS(tail_prob(dom, law, 0.0, 4, 10, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(tail_prob(dom, law, 1.0, 4, 10, -0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(tail_prob(dom, law, 1.0, 4, 0, 0.0, 1), std::invalid_argument);
    // exponential(1) has no moment at theta >= 1
    CHECK_THROWS_AS(tail_prob(dom, law, 1.0, 4, 10, 1.0, 1), std::invalid_argument);
}

TEST_CASE("tilted and plain estimates agree on a moderate event") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    // Put lambda near the median of phi_8 / 8 so plain MC has plenty of hits.
    double lambda = 0.3;
    for (double cand : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
        TailEstimate pilot = tail_prob(dom, law, cand, 8, 200, 0.0, 99);
        lambda = cand;
        if (pilot.p_hat >= 0.2 && pilot.p_hat <= 0.8) break;
    }
    const std::size_t trials = 10000;
    TailEstimate plain = tail_prob(dom, law, lambda, 8, trials, 0.0, 42, 4);
    TailEstimate tilted = tail_prob(dom, law, lambda, 8, trials, 0.15, 43, 4);
    double se_plain = (plain.ci_hi - plain.ci_lo) / (2 * 1.96);
    double se_tilted = (tilted.ci_hi - tilted.ci_lo) / (2 * 1.96);
    double gap = std::abs(plain.p_hat - tilted.p_hat);
    CHECK(gap <= 3.0 * (se_plain + se_tilted));
    CHECK(plain.p_hat > 0.05);
    CHECK(plain.p_hat < 0.95);
}

TEST_CASE("p_hat is nonincreasing in lambda under common random numbers") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    double prev = 2.0;
    for (double lambda : {0.15, 0.25, 0.35, 0.45, 0.6}) {
        TailEstimate e = tail_prob(dom, law, lambda, 6, 400, 0.0, 7);
        CHECK(e.p_hat <= prev + 1e-12);
        CHECK(e.ci_lo <= e.p_hat);
        CHECK(e.p_hat <= e.ci_hi);
        if (e.p_hat < 1.0 && e.p_hat > 0.0) CHECK(e.rate < 0.0);
        prev = e.p_hat;
    }
}

TEST_CASE("worker count does not change the estimate") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    TailEstimate a = tail_prob(dom, law, 0.4, 6, 300, 0.2, 5, 1);
    TailEstimate b = tail_prob(dom, law, 0.4, 6, 300, 0.2, 5, 4);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.weight_sum == b.weight_sum);
    CHECK(a.hits == b.hits);
}

TEST_CASE("pilot tilt brackets the target level") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    double theta = pilot_tilt(dom, law, 0.8, 6, 17);
    CHECK(theta > 0.0);
    CHECK(theta < 1.0);  // stays below the moment divergence
    // An easy level needs no tilt.
    CHECK(pilot_tilt(dom, law, 0.05, 6, 17) == 0.0);
}

TEST_CASE("rate_series flags the wrong regime and detects decay") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    RateSeries low = rate_series(dom, law, 0.05, {4, 6}, 200, 3, 0.35);
    CHECK(low.warning.find("does not exceed") != std::string::npos);
    CHECK(low.verdict == "hypothesis not met");
    CHECK(low.estimates.front().p_hat > 0.9);

    RateSeries high = rate_series(dom, law, 0.9, {4, 6}, 400, 3, 0.35);
    CHECK(high.warning.empty());
    for (const TailEstimate& e : high.estimates) {
        CHECK(e.rate < 0.0);
        CHECK(e.theta > 0.0);
    }
    CHECK(high.verdict == "consistent with volume-order decay");
    std::string csv = high.to_csv();
    CHECK(csv.find("n,lambda,p_hat,ci_lo,ci_hi,rate") == 0);
}

TEST_CASE("doubling trials shrinks the CI width by about 1/sqrt(2)") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    TailEstimate small = tail_prob(dom, law, 0.3, 6, 4000, 0.0, 21, 4);
    TailEstimate big = tail_prob(dom, law, 0.3, 6, 8000, 0.0, 21, 4);
    double ratio = (big.ci_hi - big.ci_lo) / (small.ci_hi - small.ci_lo);
    double target = 1.0 / std::sqrt(2.0);
    CHECK(ratio > target * 0.8);
    CHECK(ratio < target * 1.2);
}

TEST_CASE("sum_tail matches the Cramer exponent for exponential capacities") {
    CapacityLaw law = CapacityLaw::exponential(1.0);
    SumTailEstimate est = sum_tail(1.0, 2.0, law, 100, 100000, 9, 4);
    double target = -100.0 * (2.0 - 1.0 - std::log(2.0));
    CHECK(est.cramer_log == doctest::Approx(target).epsilon(1e-12));
    CHECK(est.theta == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(est.p_hat > 0.0);
    CHECK(std::abs(est.log_p - target) <= 0.25 * std::abs(target));
}

TEST_CASE("sum_tail rejects non-rare events and degenerate sums") {
    CapacityLaw exp1 = CapacityLaw::exponential(1.0);
    CHECK_THROWS_WITH_AS(sum_tail(1.0, 1.0, exp1, 100, 10),
                         doctest::Contains("not a rare event"), std::invalid_argument);
    CHECK_THROWS_AS(sum_tail(1.0, 0.5, exp1, 100, 10), std::invalid_argument);
    SumTailEstimate c = sum_tail(1.0, 1.5, CapacityLaw::constant(1.0), 100, 10);
    CHECK(c.p_hat == 0.0);
    CHECK(c.log_p == -std::numeric_limits<double>::infinity());
}

TEST_CASE("tail estimates round-trip through JSON") {
    ContinuousDomain dom = ContinuousDomain::unit_box(2);
    CapacityLaw law = CapacityLaw::exponential(1.0);
    RateSeries s = rate_series(dom, law, 0.8, {4}, 100, 13, 0.35);
    RateSeries back = RateSeries::from_json(s.to_json());
    CHECK(back.to_json() == s.to_json());
    TailEstimate zero = tail_prob(dom, CapacityLaw::constant(1.0), 5.0, 4, 20, 0.0, 1);
    TailEstimate zb = TailEstimate::from_json(zero.to_json());
    CHECK(zb.p_hat == 0.0);
    CHECK(zb.rule_of_three);
}
