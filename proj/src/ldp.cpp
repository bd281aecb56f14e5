#include "fpp/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "fpp/cylflow.hpp"
#include "fpp/flow.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
void parallel_for(std::size_t count, int workers, F&& f) {
    std::size_t w = workers > 1 ? std::min<std::size_t>(workers, count) : 1;
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k)
        pool.emplace_back([&, k] {
            for (std::size_t i = k; i < count; i += w) f(i);
        });
    for (auto& t : pool) t.join();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Trial {
    double weight = 0.0;
    bool hit = false;
};

// p_hat with a normal 95% interval from the trial weights, in fixed trial
// order so the reduction is independent of the worker count.
void summarize(const std::vector<Trial>& trials, std::size_t& hits, double& wsum, double& p_hat,
               double& ci_lo, double& ci_hi, bool& flagged) {
    hits = 0;
    wsum = 0.0;
    double wsq = 0.0;
    for (const Trial& t : trials) {
        if (!t.hit) continue;
        ++hits;
        wsum += t.weight;
        wsq += t.weight * t.weight;
    }
    double nt = static_cast<double>(trials.size());
    p_hat = std::clamp(wsum / nt, 0.0, 1.0);
    flagged = hits == 0;
    if (flagged) {
        ci_lo = 0.0;
        ci_hi = std::min(1.0, 3.0 / nt);  // rule of three
        return;
    }
    double var = std::max(0.0, wsq / nt - (wsum / nt) * (wsum / nt)) / nt;
    double half = 1.96 * std::sqrt(var);
    ci_lo = std::clamp(p_hat - half, 0.0, 1.0);
    ci_hi = std::clamp(p_hat + half, 0.0, 1.0);
}

double rate_of(double p, double ci_hi, int n, std::size_t d) {
    double pe = p > 0.0 ? p : ci_hi;
    return pe > 0.0 ? std::log(pe) / std::pow(double(n), double(d)) : -kInf;
}

double json_num(const nlohmann::json& j) {
    return j.is_null() ? -kInf : j.get<double>();
}

nlohmann::json num_json(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

TailEstimate tail_prob(const ContinuousDomain& dom, const CapacityLaw& law, double lambda,
                       int n, std::size_t trials, double theta, std::uint64_t seed,
                       int workers) {
    law.validate();
    if (lambda <= 0.0) throw std::invalid_argument("ldp.tail_prob: lambda must be positive");
    if (theta < 0.0) throw std::invalid_argument("ldp.tail_prob: theta must be nonnegative");
    if (trials == 0) throw std::invalid_argument("ldp.tail_prob: trials must be positive");
    CapacityLaw sampling = law;
    double log_mgf = 0.0;
    if (theta > 0.0) {
        auto tilted = tilt(law, theta);  // throws on a divergent moment
        sampling = tilted.first;
        log_mgf = tilted.second;
    }
    LatticeDomain lat = discretize(dom, n);
    FlowProblem base = domain_problem(lat, CapacityField{sampling, 0});
    double m = static_cast<double>(base.edges.size());
    double threshold = lambda * std::pow(double(n), double(dom.d) - 1.0);

    std::vector<Trial> results(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        std::uint64_t s = child_seed(seed, t);
        FlowProblem p = base;
        double total = 0.0;
        for (FlowEdge& e : p.edges) {
            e.cap = sampling.sample(s, e.grid.key());
            total += e.cap;
        }
        Trial& out = results[t];
        out.hit = max_flow(p).value >= threshold - 1e-9;
        out.weight = theta > 0.0 ? std::exp(m * log_mgf - theta * total) : 1.0;
    });

    TailEstimate est;
    est.lambda = lambda;
    est.n = n;
    est.trials = trials;
    est.theta = theta;
    summarize(results, est.hits, est.weight_sum, est.p_hat, est.ci_lo, est.ci_hi,
              est.rule_of_three);
    est.rate = rate_of(est.p_hat, est.ci_hi, n, dom.d);
    return est;
}

double pilot_tilt(const ContinuousDomain& dom, const CapacityLaw& law, double lambda, int n,
                  std::uint64_t seed, std::size_t pilot_trials) {
    law.validate();
    if (lambda <= 0.0) throw std::invalid_argument("ldp.pilot_tilt: lambda must be positive");
    LatticeDomain lat = discretize(dom, n);
    FlowProblem base = domain_problem(lat, CapacityField{law, 0});
    double scale = std::pow(double(n), double(dom.d) - 1.0);
    // Common per-trial streams across tilts, so the median is monotone in
    // theta and the bisection is well behaved.
    auto med = [&](double theta) {
        CapacityLaw sampling = theta > 0.0 ? tilt(law, theta).first : law;
        std::vector<double> vals(pilot_trials);
        for (std::size_t t = 0; t < pilot_trials; ++t) {
            std::uint64_t s = child_seed(seed, 0x70697400ULL + t);
            FlowProblem p = base;
            for (FlowEdge& e : p.edges) e.cap = sampling.sample(s, e.grid.key());
            vals[t] = max_flow(p).value / scale;
        }
        return median(std::move(vals));
    };
    if (med(0.0) >= lambda) return 0.0;
    double lo = 0.0, hi = 0.0, step = 0.25;
    bool bracketed = false;
    for (int it = 0; it < 200 && !bracketed; ++it) {
        double cand = hi + step;
        if (!exp_moment_check(law, cand).finite) {
            step *= 0.5;
            if (step < 1e-9) break;
            continue;
        }
        if (med(cand) >= lambda) {
            lo = hi;
            hi = cand;
            bracketed = true;
        } else {
            hi = cand;
            step *= 2.0;
        }
    }
    if (!bracketed) return hi;  // best effort: bounded law short of lambda
    for (int it = 0; it < 30 && hi - lo > 1e-3 * (1.0 + hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (med(mid) >= lambda ? hi : lo) = mid;
    }
    return hi;
}

RateSeries rate_series(const ContinuousDomain& dom, const CapacityLaw& law, double lambda,
                       const std::vector<int>& meshes, std::size_t trials, std::uint64_t seed,
                       double phi_tilde_hint, int workers) {
    if (meshes.empty()) throw std::invalid_argument("ldp.rate_series: meshes must be nonempty");
    RateSeries out;
    out.lambda = lambda;
    if (phi_tilde_hint > 0.0 && lambda <= phi_tilde_hint) {
        std::ostringstream w;
        w << "lambda = " << lambda << " does not exceed the continuous min-cut estimate "
          << phi_tilde_hint << "; the volume-order decay hypothesis fails, proceeding anyway";
        out.warning = w.str();
    }
    for (int n : meshes) {
        double theta =
            pilot_tilt(dom, law, lambda, n, child_seed(seed, 0x7000ULL + std::uint64_t(n)));
        out.estimates.push_back(tail_prob(dom, law, lambda, n, trials, theta,
                                          child_seed(seed, std::uint64_t(n)), workers));
    }
    bool all_neg = true, mono = true;
    for (std::size_t i = 0; i < out.estimates.size(); ++i) {
        const TailEstimate& e = out.estimates[i];
        if (!(e.rate < 0.0)) all_neg = false;
        if (i > 0) {
            const TailEstimate& prev = out.estimates[i - 1];
            double prev_hi = rate_of(prev.ci_hi, prev.ci_hi, prev.n, dom.d);
            double cur_lo = rate_of(e.ci_lo, e.ci_lo, e.n, dom.d);
            if (cur_lo > prev_hi) mono = false;
        }
    }
    out.verdict = (all_neg && mono) ? "consistent with volume-order decay" : "hypothesis not met";
    return out;
}

SumTailEstimate sum_tail(double alpha, double beta, const CapacityLaw& law, std::size_t npow,
                         std::size_t trials, std::uint64_t seed, int workers) {
    law.validate();
    if (alpha <= 0.0) throw std::invalid_argument("ldp.sum_tail: alpha must be positive");
    if (npow == 0) throw std::invalid_argument("ldp.sum_tail: npow must be positive");
    if (trials == 0) throw std::invalid_argument("ldp.sum_tail: trials must be positive");
    double mean = law.mean();
    if (beta <= alpha * mean + 1e-12)
        throw std::invalid_argument("ldp.sum_tail: not a rare event (beta <= alpha * E[t])");
    std::size_t m = static_cast<std::size_t>(std::floor(alpha * double(npow)));
    if (m == 0) throw std::invalid_argument("ldp.sum_tail: alpha * npow below one term");

    SumTailEstimate est;
    est.alpha = alpha;
    est.beta = beta;
    est.npow = npow;
    est.terms = m;
    est.trials = trials;
    est.cramer_log = -alpha * double(npow) * cramer_rate(law, beta / alpha);

    double threshold = beta * double(npow);
    double x = threshold / double(m);  // per-term target mean

    if (law.max_support() - law.min_support() < 1e-15) {
        // Deterministic sum: no sampling needed.
        bool hit = double(m) * law.mean() >= threshold - 1e-12;
        est.p_hat = hit ? 1.0 : 0.0;
        est.ci_lo = est.ci_hi = est.p_hat;
        est.hits = hit ? trials : 0;
        est.log_p = hit ? 0.0 : -kInf;
        return est;
    }

    // Tilt so the tilted per-term mean hits the target (the Cramer-optimal
    // change of measure), capped below any moment divergence.
    auto tilt_mean = [&](double s) { return tilt(law, s).first.mean(); };
    double lo = 0.0, hi = 0.0, step = 0.25;
    bool bracketed = false;
    for (int it = 0; it < 200 && !bracketed; ++it) {
        double cand = hi + step;
        if (!exp_moment_check(law, cand).finite || !std::isfinite(tilt_mean(cand))) {
            step *= 0.5;
            if (step < 1e-9) break;
            continue;
        }
        if (tilt_mean(cand) >= x) {
            lo = hi;
            hi = cand;
            bracketed = true;
        } else {
            hi = cand;
            step *= 2.0;
        }
    }
    double theta = hi;
    if (bracketed) {
        for (int it = 0; it < 60 && hi - lo > 1e-10 * (1.0 + hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (tilt_mean(mid) >= x ? hi : lo) = mid;
        }
        theta = hi;
    }
    est.theta = theta;
    auto tilted = tilt(law, theta);
    const CapacityLaw& sampling = tilted.first;
    double log_mgf = tilted.second;

    std::vector<Trial> results(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        std::uint64_t s = child_seed(seed, t);
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) total += sampling.sample(s, i);
        Trial& out = results[t];
        out.hit = total >= threshold - 1e-9;
        out.weight = std::exp(double(m) * log_mgf - theta * total);
    });
    bool flagged = false;
    double wsum = 0.0;
    summarize(results, est.hits, wsum, est.p_hat, est.ci_lo, est.ci_hi, flagged);
    est.log_p = est.p_hat > 0.0 ? std::log(est.p_hat) : -kInf;
    return est;
}

std::string TailEstimate::to_json() const {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["n"] = n;
    j["trials"] = trials;
    j["hits"] = hits;
    j["weight_sum"] = weight_sum;
    j["p_hat"] = p_hat;
    j["ci_lo"] = ci_lo;
    j["ci_hi"] = ci_hi;
    j["rate"] = num_json(rate);
    j["theta"] = theta;
    j["rule_of_three"] = rule_of_three;
    return j.dump(2);
}

TailEstimate TailEstimate::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TailEstimate e;
    e.lambda = j.at("lambda");
    e.n = j.at("n");
    e.trials = j.at("trials");
    e.hits = j.at("hits");
    e.weight_sum = j.at("weight_sum");
    e.p_hat = j.at("p_hat");
    e.ci_lo = j.at("ci_lo");
    e.ci_hi = j.at("ci_hi");
    e.rate = json_num(j.at("rate"));
    e.theta = j.at("theta");
    e.rule_of_three = j.at("rule_of_three");
    return e;
}

std::string RateSeries::to_csv() const {
    std::ostringstream out;
    out << "n,lambda,p_hat,ci_lo,ci_hi,rate\n";
    out.precision(17);
    for (const TailEstimate& e : estimates)
        out << e.n << ',' << e.lambda << ',' << e.p_hat << ',' << e.ci_lo << ',' << e.ci_hi
            << ',' << e.rate << '\n';
    return out.str();
}

std::string RateSeries::to_json() const {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["verdict"] = verdict;
    j["warning"] = warning;
    j["estimates"] = nlohmann::json::array();
    for (const TailEstimate& e : estimates)
        j["estimates"].push_back(nlohmann::json::parse(e.to_json()));
    return j.dump(2);
}

RateSeries RateSeries::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RateSeries s;
    s.lambda = j.at("lambda");
    s.verdict = j.at("verdict");
    s.warning = j.at("warning");
    for (const auto& e : j.at("estimates")) s.estimates.push_back(TailEstimate::from_json(e.dump()));
    return s;
}

std::string SumTailEstimate::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["npow"] = npow;
    j["terms"] = terms;
    j["trials"] = trials;
    j["hits"] = hits;
    j["theta"] = theta;
    j["p_hat"] = p_hat;
    j["ci_lo"] = ci_lo;
    j["ci_hi"] = ci_hi;
    j["log_p"] = num_json(log_p);
    j["cramer_log"] = num_json(cramer_log);
    return j.dump(2);
}

}  // namespace fpp
