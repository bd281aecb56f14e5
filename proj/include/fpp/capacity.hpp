#pragma once

// Edge capacity laws: sampling, exponential moments, tilting, and the
// Cramer rate function.

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/rng.hpp"

namespace fpp {

enum class LawKind { Constant, Bernoulli, Exponential, Uniform, Discrete };

// A nonnegative law, optionally exponentially tilted by theta (density
// proportional to e^{theta x} against the base law). theta = 0 is the base
// law itself; tilting twice composes additively.
struct CapacityLaw {
    LawKind kind = LawKind::Constant;
    double c = 1.0;                       // constant
    double p = 0.5, lo = 0.0, hi = 1.0;   // bernoulli: P(hi) = p
    double rate = 1.0;                    // exponential
    double a = 0.0, b = 1.0;              // uniform
    std::vector<double> atoms, weights;   // discrete
    double theta = 0.0;                   // accumulated tilt

    static CapacityLaw constant(double c);
    static CapacityLaw bernoulli(double p, double lo, double hi);
    static CapacityLaw exponential(double rate);
    static CapacityLaw uniform(double a, double b);
    static CapacityLaw discrete(std::vector<double> atoms, std::vector<double> weights);

    void validate() const;  // throws std::invalid_argument

    double mean() const;
    double min_support() const;
    double max_support() const;
    // Inverse CDF of the (tilted) law at u in (0,1).
    double quantile(double u) const;
    double sample(std::uint64_t seed, std::uint64_t key) const {
        return quantile(keyed_uniform(seed, key, 0));
    }

    std::string to_json() const;
    static CapacityLaw from_json(const std::string& text);
};

struct MomentResult {
    bool finite = true;
    double value = 1.0;
};

// E[e^{s X}] under the law (tilt included). Divergence reported, not thrown.
MomentResult exp_moment_check(const CapacityLaw& law, double s);

// sup_s (s x - log MGF(s)); +infinity outside the support hull.
double cramer_rate(const CapacityLaw& law, double x);

// Tilted law and log MGF(s) of the input law, for likelihood-ratio
// reweighting. Throws std::invalid_argument on a divergent moment.
std::pair<CapacityLaw, double> tilt(const CapacityLaw& law, double s);

// An i.i.d. field over lattice edges; values are a pure function of
// (law, seed, edge key), so any sub-lattice sees consistent capacities.
struct CapacityField {
    CapacityLaw law;
    std::uint64_t seed = 0;

    double value(const GridEdge& e) const { return law.sample(seed, e.key()); }
};

inline CapacityField sample(const CapacityLaw& law, std::uint64_t seed) {
    law.validate();
    return CapacityField{law, seed};
}

}  // namespace fpp
