#include "fpp/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the base-law MGF at s; +inf when divergent.
double base_log_mgf(const CapacityLaw& law, double s) {
    switch (law.kind) {
        case LawKind::Constant:
            return s * law.c;
        case LawKind::Bernoulli: {
            double q = 1.0 - law.p;
            // log(q e^{s lo} + p e^{s hi}), stabilized around the larger term
            double m = std::max(s * law.lo, s * law.hi);
            return m + std::log(q * std::exp(s * law.lo - m) + law.p * std::exp(s * law.hi - m));
        }
        case LawKind::Exponential:
            if (s >= law.rate) return kInf;
            return std::log(law.rate) - std::log(law.rate - s);
        case LawKind::Uniform: {
            if (std::abs(s) < 1e-12) {
                double mid = 0.5 * (law.a + law.b), w = law.b - law.a;
                return s * mid + s * s * w * w / 24.0;
            }
            double m = std::max(s * law.a, s * law.b);
            return m + std::log((std::exp(s * law.b - m) - std::exp(s * law.a - m)) /
                                (s * (law.b - law.a)));
        }
        case LawKind::Discrete: {
            double m = -kInf;
            for (double x : law.atoms) m = std::max(m, s * x);
            double acc = 0.0;
            for (std::size_t i = 0; i < law.atoms.size(); ++i)
                acc += law.weights[i] * std::exp(s * law.atoms[i] - m);
            return m + std::log(acc);
        }
    }
    return kInf;
}

// log MGF of the tilted law: log M(theta + s) - log M(theta).
double log_mgf(const CapacityLaw& law, double s) {
    double num = base_log_mgf(law, law.theta + s);
    if (!std::isfinite(num)) return kInf;
    return num - base_log_mgf(law, law.theta);
}

// P(X = hi) under the tilt.
double tilted_p(const CapacityLaw& law) {
    double q = 1.0 - law.p;
    double whi = law.p * std::exp(law.theta * (law.hi - law.lo));
    return whi / (q + whi);
}

std::vector<double> tilted_weights(const CapacityLaw& law) {
    double m = -kInf;
    for (double x : law.atoms) m = std::max(m, law.theta * x);
    std::vector<double> w(law.atoms.size());
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = law.weights[i] * std::exp(law.theta * law.atoms[i] - m);
        z += w[i];
    }
    for (auto& x : w) x /= z;
    return w;
}

}  // namespace

CapacityLaw CapacityLaw::constant(double c) {
    CapacityLaw l;
    l.kind = LawKind::Constant;
    l.c = c;
    return l;
}

CapacityLaw CapacityLaw::bernoulli(double p, double lo, double hi) {
    CapacityLaw l;
    l.kind = LawKind::Bernoulli;
    l.p = p;
    l.lo = lo;
    l.hi = hi;
    return l;
}

CapacityLaw CapacityLaw::exponential(double rate) {
    CapacityLaw l;
    l.kind = LawKind::Exponential;
    l.rate = rate;
    return l;
}

CapacityLaw CapacityLaw::uniform(double a, double b) {
    CapacityLaw l;
    l.kind = LawKind::Uniform;
    l.a = a;
    l.b = b;
    return l;
}

CapacityLaw CapacityLaw::discrete(std::vector<double> atoms, std::vector<double> weights) {
    CapacityLaw l;
    l.kind = LawKind::Discrete;
    l.atoms = std::move(atoms);
    l.weights = std::move(weights);
    return l;
}

void CapacityLaw::validate() const {
    switch (kind) {
        case LawKind::Constant:
            if (c < 0) throw std::invalid_argument("constant capacity must be >= 0");
            break;
        case LawKind::Bernoulli:
            if (p < 0 || p > 1) throw std::invalid_argument("bernoulli p outside [0,1]");
            if (lo < 0 || hi < lo) throw std::invalid_argument("bernoulli support invalid");
            break;
        case LawKind::Exponential:
            if (rate <= 0) throw std::invalid_argument("exponential rate must be > 0");
            if (theta >= rate) throw std::invalid_argument("tilt beyond exponential moment");
            break;
        case LawKind::Uniform:
            if (a < 0 || b <= a) throw std::invalid_argument("uniform support invalid");
            break;
        case LawKind::Discrete: {
            if (atoms.empty() || atoms.size() != weights.size())
                throw std::invalid_argument("discrete law needs matching atoms/weights");
            double z = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                if (atoms[i] < 0) throw std::invalid_argument("negative atom");
                if (weights[i] < 0) throw std::invalid_argument("negative weight");
                z += weights[i];
            }
            if (std::abs(z - 1.0) > 1e-12) throw std::invalid_argument("weights must sum to 1");
            break;
        }
    }
}

double CapacityLaw::min_support() const {
    switch (kind) {
        case LawKind::Constant: return c;
        case LawKind::Bernoulli: return lo;
        case LawKind::Exponential: return 0.0;
        case LawKind::Uniform: return a;
        case LawKind::Discrete: return *std::min_element(atoms.begin(), atoms.end());
    }
    return 0.0;
}

double CapacityLaw::max_support() const {
    switch (kind) {
        case LawKind::Constant: return c;
        case LawKind::Bernoulli: return hi;
        case LawKind::Exponential: return kInf;
        case LawKind::Uniform: return b;
        case LawKind::Discrete: return *std::max_element(atoms.begin(), atoms.end());
    }
    return 0.0;
}

double CapacityLaw::mean() const {
    switch (kind) {
        case LawKind::Constant:
            return c;
        case LawKind::Bernoulli: {
            double pt = tilted_p(*this);
            return (1.0 - pt) * lo + pt * hi;
        }
        case LawKind::Exponential:
            return 1.0 / (rate - theta);
        case LawKind::Uniform: {
            if (std::abs(theta) < 1e-12) return 0.5 * (a + b);
            double m = std::max(theta * a, theta * b);
            double ea = std::exp(theta * a - m), eb = std::exp(theta * b - m);
            return (b * eb - a * ea) / (eb - ea) - 1.0 / theta;
        }
        case LawKind::Discrete: {
            auto w = tilted_weights(*this);
            double s = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) s += w[i] * atoms[i];
            return s;
        }
    }
    return 0.0;
}

double CapacityLaw::quantile(double u) const {
    switch (kind) {
        case LawKind::Constant:
            return c;
        case LawKind::Bernoulli:
            return u < 1.0 - tilted_p(*this) ? lo : hi;
        case LawKind::Exponential:
            return -std::log1p(-u) / (rate - theta);
        case LawKind::Uniform: {
            if (std::abs(theta) < 1e-12) return a + u * (b - a);
            // CDF (e^{tx} - e^{ta}) / (e^{tb} - e^{ta})
            double m = std::max(theta * a, theta * b);
            double ea = std::exp(theta * a - m), eb = std::exp(theta * b - m);
            return (std::log(ea + u * (eb - ea)) + m) / theta;
        }
        case LawKind::Discrete: {
            auto w = tilted_weights(*this);
            double acc = 0.0;
            std::vector<std::size_t> order(atoms.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(),
                      [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });
            for (std::size_t i : order) {
                acc += w[i];
                if (u < acc) return atoms[i];
            }
            return atoms[order.back()];
        }
    }
    return 0.0;
}

MomentResult exp_moment_check(const CapacityLaw& law, double s) {
    double v = log_mgf(law, s);
    if (!std::isfinite(v)) return {false, kInf};
    return {true, std::exp(v)};
}

std::pair<CapacityLaw, double> tilt(const CapacityLaw& law, double s) {
    double v = log_mgf(law, s);
    if (!std::isfinite(v)) throw std::invalid_argument("tilt has divergent exponential moment");
    CapacityLaw out = law;
    out.theta += s;
    if (out.kind == LawKind::Exponential && out.theta >= out.rate)
        throw std::invalid_argument("tilt has divergent exponential moment");
    return {out, v};
}

double cramer_rate(const CapacityLaw& law, double x) {
    double losup = law.min_support(), hisup = law.max_support();
    if (x < losup || x > hisup) return kInf;
    switch (law.kind) {
        case LawKind::Constant:
            return 0.0;
        case LawKind::Bernoulli: {
            if (law.hi == law.lo) return 0.0;
            double pt = tilted_p(law);
            double t = (x - law.lo) / (law.hi - law.lo);
            auto klterm = [](double t, double p) { return t <= 0 ? 0.0 : t * std::log(t / p); };
            return klterm(t, pt) + klterm(1.0 - t, 1.0 - pt);
        }
        case LawKind::Exponential: {
            double lam = law.rate - law.theta;
            if (x <= 0) return kInf;
            return lam * x - 1.0 - std::log(lam * x);
        }
        default:
            break;
    }
    // Endpoint atoms: I(x) = -log of the (tilted) weight there.
    if (law.kind == LawKind::Discrete && (x == losup || x == hisup)) {
        auto w = tilted_weights(law);
        double wt = 0.0;
        for (std::size_t i = 0; i < law.atoms.size(); ++i)
            if (law.atoms[i] == x) wt += w[i];
        return wt > 0 ? -std::log(wt) : kInf;
    }
    if (law.kind == LawKind::Uniform && (x == losup || x == hisup)) return kInf;
    // Concave 1-D maximization of g(s) = s x - log MGF(s) by golden section
    // on an expanding bracket.
    auto g = [&](double s) {
        double v = log_mgf(law, s);
        return std::isfinite(v) ? s * x - v : -kInf;
    };
    double loB = -1.0, hiB = 1.0;
    for (int pass = 0; pass < 60; ++pass) {
        bool grow = false;
        if (g(hiB) > g(0.5 * hiB) && std::isfinite(log_mgf(law, 2 * hiB))) {
            hiB *= 2;
            grow = true;
        }
        if (g(loB) > g(0.5 * loB)) {
            loB *= 2;
            grow = true;
        }
        if (!grow || hiB > 1e9 || loB < -1e9) break;
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hiB - gr * (hiB - loB), x2 = loB + gr * (hiB - loB);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 400 && hiB - loB > 1e-13 * (1 + std::abs(loB) + std::abs(hiB)); ++it) {
        if (f1 < f2) {
            loB = x1;
            x1 = x2;
            f1 = f2;
            x2 = loB + gr * (hiB - loB);
            f2 = g(x2);
        } else {
            hiB = x2;
            x2 = x1;
            f2 = f1;
            x1 = hiB - gr * (hiB - loB);
            f1 = g(x1);
        }
    }
    double best = std::max({g(loB), f1, f2, g(hiB), 0.0});
    return best;
}

std::string CapacityLaw::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case LawKind::Constant:
            j["kind"] = "constant";
            j["c"] = c;
            break;
        case LawKind::Bernoulli:
            j["kind"] = "bernoulli";
            j["p"] = p;
            j["lo"] = lo;
            j["hi"] = hi;
            break;
        case LawKind::Exponential:
            j["kind"] = "exponential";
            j["rate"] = rate;
            break;
        case LawKind::Uniform:
            j["kind"] = "uniform";
            j["a"] = a;
            j["b"] = b;
            break;
        case LawKind::Discrete:
            j["kind"] = "discrete";
            j["atoms"] = atoms;
            j["weights"] = weights;
            break;
    }
    if (theta != 0.0) j["theta"] = theta;
    return j.dump();
}

CapacityLaw CapacityLaw::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    CapacityLaw l;
    if (kind == "constant")
        l = constant(j.at("c").get<double>());
    else if (kind == "bernoulli")
        l = bernoulli(j.at("p").get<double>(), j.at("lo").get<double>(), j.at("hi").get<double>());
    else if (kind == "exponential")
        l = exponential(j.at("rate").get<double>());
    else if (kind == "uniform")
        l = uniform(j.at("a").get<double>(), j.at("b").get<double>());
    else if (kind == "discrete")
        l = discrete(j.at("atoms").get<std::vector<double>>(),
                     j.at("weights").get<std::vector<double>>());
    else
        throw std::invalid_argument("unknown law kind: " + kind);
    if (j.contains("theta")) l.theta = j.at("theta").get<double>();
    l.validate();
    return l;
}

}  // namespace fpp
