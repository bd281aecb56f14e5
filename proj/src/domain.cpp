#include "fpp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace fpp {

double ContinuousDomain::separation() const {
    if (sep_ >= 0.0) return sep_;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s1 : source)
        for (const auto& s2 : sink) best = std::min(best, polytope_distance(s1, s2));
    sep_ = best;
    return sep_;
}

std::pair<Vec, Vec> ContinuousDomain::bounding_box() const {
    Vec lo(d, std::numeric_limits<double>::infinity());
    Vec hi(d, -std::numeric_limits<double>::infinity());
    for (const auto& part : body.parts()) {
        for (std::size_t i = 0; i < d; ++i) {
            hi[i] = std::max(hi[i], part.support(unit(d, i, 1.0)));
            lo[i] = std::min(lo[i], -part.support(unit(d, i, -1.0)));
        }
    }
    return {lo, hi};
}

void ContinuousDomain::validate() const {
    if (d < 2) throw std::invalid_argument("dimension must be >= 2");
    if (body.parts().empty()) throw std::invalid_argument("domain body is empty");
    for (const auto& part : body.parts()) {
        if (part.empty()) throw std::invalid_argument("domain contains an empty polytope");
        for (std::size_t i = 0; i < d; ++i) {
            if (!std::isfinite(part.support(unit(d, i, 1.0))) ||
                !std::isfinite(-part.support(unit(d, i, -1.0))))
                throw std::invalid_argument("domain is unbounded");
        }
    }
    // Gamma^1 and Gamma^2 must be disjoint.
    for (const auto& s1 : source)
        for (const auto& s2 : sink)
            if (!s1.intersect(s2).empty())
                throw std::invalid_argument("source and sink patches intersect");
    // Connectivity on a fine rasterization of the bounding box.
    auto [lo, hi] = bounding_box();
    const int res = 48;
    std::vector<double> step(d);
    for (std::size_t i = 0; i < d; ++i) step[i] = (hi[i] - lo[i]) / res;
    std::vector<int> dims(d, res);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= res;
    auto cell_center = [&](std::size_t idx) {
        Vec x(d);
        for (std::size_t i = d; i-- > 0;) {
            x[i] = lo[i] + (idx % res + 0.5) * step[i];
            idx /= res;
        }
        return x;
    };
    std::vector<char> inside(total, 0);
    std::size_t first = total, count = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        inside[idx] = body.strictly_contains(cell_center(idx));
        if (inside[idx]) {
            ++count;
            if (first == total) first = idx;
        }
    }
    if (count == 0) throw std::invalid_argument("domain interior rasterizes to nothing");
    std::vector<char> seen(total, 0);
    std::queue<std::size_t> q;
    q.push(first);
    seen[first] = 1;
    std::size_t reached = 0;
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t i = d - 1; i-- > 0;) stride[i] = stride[i + 1] * res;
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        ++reached;
        for (std::size_t i = 0; i < d; ++i) {
            std::size_t ci = (u / stride[i]) % res;
            for (int s : {-1, 1}) {
                if ((s < 0 && ci == 0) || (s > 0 && ci + 1 == static_cast<std::size_t>(res)))
                    continue;
                std::size_t v = u + static_cast<std::size_t>(s) * stride[i];
                if (s < 0) v = u - stride[i];
                if (inside[v] && !seen[v]) { seen[v] = 1; q.push(v); }
            }
        }
    }
    if (reached != count) throw std::invalid_argument("domain is not connected");
}

ContinuousDomain ContinuousDomain::unit_box(std::size_t d) {
    ContinuousDomain dom;
    dom.d = d;
    Vec lo(d, 0.0), hi(d, 1.0);
    dom.body = PolyhedralSet({ConvexPolytope::box(lo, hi)});
    // Source: {x_1 = 0} facet; sink: {x_1 = 1} facet.
    auto facet = [&](double c) {
        std::vector<Halfspace> hs;
        hs.push_back({unit(d, 0, 1.0), c});
        hs.push_back({unit(d, 0, -1.0), -c});
        for (std::size_t i = 1; i < d; ++i) {
            hs.push_back({unit(d, i, 1.0), 1.0});
            hs.push_back({unit(d, i, -1.0), 0.0});
        }
        return ConvexPolytope(d, std::move(hs));
    };
    dom.source = {facet(0.0)};
    dom.sink = {facet(1.0)};
    return dom;
}

namespace {

nlohmann::json polytope_to_json(const ConvexPolytope& p) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& h : p.halfspaces()) j.push_back({{"a", h.a}, {"b", h.b}});
    return j;
}

ConvexPolytope polytope_from_json(const nlohmann::json& j, std::size_t d) {
    std::vector<Halfspace> hs;
    for (const auto& e : j) {
        Halfspace h;
        h.a = e.at("a").get<std::vector<double>>();
        h.b = e.at("b").get<double>();
        if (h.a.size() != d) throw std::invalid_argument("half-space dimension mismatch");
        hs.push_back(std::move(h));
    }
    return ConvexPolytope(d, std::move(hs));
}

}  // namespace

std::string ContinuousDomain::to_json() const {
    nlohmann::json j;
    j["dimension"] = d;
    j["body"] = nlohmann::json::array();
    for (const auto& p : body.parts()) j["body"].push_back(polytope_to_json(p));
    j["source"] = nlohmann::json::array();
    for (const auto& p : source) j["source"].push_back(polytope_to_json(p));
    j["sink"] = nlohmann::json::array();
    for (const auto& p : sink) j["sink"].push_back(polytope_to_json(p));
    return j.dump(2);
}

ContinuousDomain ContinuousDomain::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ContinuousDomain dom;
    dom.d = j.at("dimension").get<std::size_t>();
    std::vector<ConvexPolytope> parts;
    for (const auto& e : j.at("body")) parts.push_back(polytope_from_json(e, dom.d));
    dom.body = PolyhedralSet(std::move(parts));
    for (const auto& e : j.at("source")) dom.source.push_back(polytope_from_json(e, dom.d));
    for (const auto& e : j.at("sink")) dom.sink.push_back(polytope_from_json(e, dom.d));
    return dom;
}

}  // namespace fpp
