#pragma once

// Tail probabilities of the rescaled max flow by tilted Monte Carlo,
// rate series across meshes, and i.i.d. capacity-sum tails compared with
// the Cramer prediction.

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/domain.hpp"

namespace fpp {

struct TailEstimate {
    double lambda = 0.0;
    int n = 0;
    std::size_t trials = 0;
    std::size_t hits = 0;        // raw hit count
    double weight_sum = 0.0;     // likelihood-ratio mass on hits
    double p_hat = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // 95% interval
    double rate = 0.0;           // n^{-d} log p_hat; uses ci_hi when p_hat = 0
    double theta = 0.0;          // tilt parameter (0 = plain MC)
    bool rule_of_three = false;  // zero hits: ci_hi is the 3/trials bound

    std::string to_json() const;
    static TailEstimate from_json(const std::string& text);
};

// Estimates P[phi_n >= lambda n^{d-1}] over i.i.d. capacity fields.
// theta > 0 samples the exponentially tilted law per edge and reweights
// each trial by prod e^{-theta t(e)} * MGF(theta)^{|E|}; theta = 0 is
// plain Monte Carlo. Trials are independent streams keyed by index, so
// the result is identical for any worker count.
TailEstimate tail_prob(const ContinuousDomain& dom, const CapacityLaw& law, double lambda,
                       int n, std::size_t trials, double theta, std::uint64_t seed,
                       int workers = 1);

// Smallest tilt (by bisection on a common pilot sample) under which the
// tilted median of phi_n / n^{d-1} reaches lambda; 0 when the untilted
// median already does.
double pilot_tilt(const ContinuousDomain& dom, const CapacityLaw& law, double lambda, int n,
                  std::uint64_t seed, std::size_t pilot_trials = 15);

struct RateSeries {
    double lambda = 0.0;
    std::vector<TailEstimate> estimates;  // one per mesh, ascending
    std::string verdict;   // "consistent with volume-order decay" or
                           // "hypothesis not met"
    std::string warning;   // set when lambda does not exceed the continuous bound

    std::string to_csv() const;  // n,lambda,p_hat,ci_lo,ci_hi,rate
    std::string to_json() const;
    static RateSeries from_json(const std::string& text);
};

// Runs tail_prob at each mesh with a pilot-chosen tilt. phi_tilde_hint,
// when positive, is an estimate of the continuous min-cut value; lambda at
// or below it only warns (the decay hypothesis fails, the run proceeds).
// The verdict is positive iff every rate is negative and the sequence is
// nonincreasing within the confidence intervals.
RateSeries rate_series(const ContinuousDomain& dom, const CapacityLaw& law, double lambda,
                       const std::vector<int>& meshes, std::size_t trials, std::uint64_t seed,
                       double phi_tilde_hint = -1.0, int workers = 1);

struct SumTailEstimate {
    double alpha = 0.0, beta = 0.0;
    std::size_t npow = 0;   // n^{d-1}
    std::size_t terms = 0;  // floor(alpha * npow)
    std::size_t trials = 0;
    std::size_t hits = 0;
    double theta = 0.0;
    double p_hat = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    double log_p = 0.0;       // log p_hat (-inf when p_hat = 0)
    double cramer_log = 0.0;  // -alpha * npow * cramer_rate(law, beta/alpha)

    std::string to_json() const;
};

// P[sum of floor(alpha*npow) i.i.d. capacities >= beta*npow] by tilted
// Monte Carlo, with the Cramer exponent for comparison. Requires
// beta > alpha * E[t].
SumTailEstimate sum_tail(double alpha, double beta, const CapacityLaw& law, std::size_t npow,
                         std::size_t trials, std::uint64_t seed = 1, int workers = 1);

}  // namespace fpp
