#include "fpp/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace fpp {

bool Region::segment_inside(const Vec& a, const Vec& b) const {
    // Interior samples; endpoints are only limits of the open segment.
    for (int k = 1; k <= 9; ++k) {
        double t = k / 10.0;
        Vec p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
        if (!contains(p)) return false;
    }
    return true;
}

bool ConvexRegion::segment_inside(const Vec& a, const Vec& b) const {
    // Open segment in a convex set: closure contains both endpoints and, for
    // the open case, the midpoint lies in the interior.
    if (!p_.contains(a) || !p_.contains(b)) return false;
    if (!open_) return true;
    Vec mid(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
    return p_.strictly_contains(mid);
}

LatticeDomain::LatticeDomain(int n, const Vec& box_lo, const Vec& box_hi) : n_(n) {
    if (n < 1) throw std::invalid_argument("mesh n must be >= 1");
    const std::size_t d = box_lo.size();
    lo_.resize(d);
    hi_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        lo_[i] = static_cast<int>(std::floor(box_lo[i] * n));
        hi_[i] = static_cast<int>(std::ceil(box_hi[i] * n));
    }
    stride_.assign(d, 1);
    count_ = 1;
    for (std::size_t i = d; i-- > 0;) {
        stride_[i] = count_;
        count_ *= static_cast<std::size_t>(hi_[i] - lo_[i] + 1);
    }
    omega_.assign(count_, 0);
    gamma_.assign(count_, 0);
    gamma1_.assign(count_, 0);
    gamma2_.assign(count_, 0);
    ambiguous_.assign(count_, 0);
}

Vec LatticeDomain::point(std::size_t idx) const {
    auto c = coords(idx);
    Vec p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) p[i] = static_cast<double>(c[i]) / n_;
    return p;
}

std::vector<int> LatticeDomain::coords(std::size_t idx) const {
    std::vector<int> c(lo_.size());
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        c[i] = lo_[i] + static_cast<int>(idx / stride_[i]);
        idx %= stride_[i];
    }
    return c;
}

std::size_t LatticeDomain::index_of(const std::vector<int>& c) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (c[i] < lo_[i] || c[i] > hi_[i]) return npos;
        idx += stride_[i] * static_cast<std::size_t>(c[i] - lo_[i]);
    }
    return idx;
}

std::vector<std::size_t> LatticeDomain::omega_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count_; ++i)
        if (omega_[i]) out.push_back(i);
    return out;
}

std::size_t LatticeDomain::omega_count() const {
    std::size_t c = 0;
    for (char f : omega_) c += f != 0;
    return c;
}

void LatticeDomain::for_each_edge(
    const std::function<void(const GridEdge&, std::size_t, std::size_t)>& f) const {
    const std::size_t d = lo_.size();
    for (std::size_t idx = 0; idx < count_; ++idx) {
        auto c = coords(idx);
        for (std::size_t a = 0; a < d; ++a) {
            if (c[a] + 1 > hi_[a]) continue;
            auto c2 = c;
            ++c2[a];
            std::size_t j = index_of(c2);
            if (j == npos) continue;
            f(GridEdge{c, static_cast<int>(a)}, idx, j);
        }
    }
}

std::pair<std::size_t, std::size_t> LatticeDomain::endpoints(const GridEdge& e) const {
    auto c2 = e.base;
    ++c2[static_cast<std::size_t>(e.axis)];
    return {index_of(e.base), index_of(c2)};
}

Vec LatticeDomain::endpoint_point(const GridEdge& e, int which) const {
    Vec p(e.base.size());
    for (std::size_t i = 0; i < e.base.size(); ++i) p[i] = static_cast<double>(e.base[i]) / n_;
    if (which != 0) p[static_cast<std::size_t>(e.axis)] += 1.0 / n_;
    return p;
}

std::vector<GridEdge> LatticeDomain::edges_in(const Region& region, bool omega_only) const {
    std::vector<GridEdge> out;
    for_each_edge([&](const GridEdge& e, std::size_t i, std::size_t j) {
        if (omega_only && !(omega_[i] && omega_[j])) return;
        if (region.segment_inside(endpoint_point(e, 0), endpoint_point(e, 1)))
            out.push_back(e);
    });
    return out;
}

std::vector<GridEdge> LatticeDomain::omega_edges() const {
    std::vector<GridEdge> out;
    for_each_edge([&](const GridEdge& e, std::size_t i, std::size_t j) {
        if (omega_[i] && omega_[j]) out.push_back(e);
    });
    return out;
}

LatticeDomain discretize(const ContinuousDomain& dom, int n, double margin) {
    {
        bool any_part = false;
        for (const auto& part : dom.body.parts()) any_part |= !part.empty();
        if (!any_part)
            throw EmptyDiscretization("empty discretization: the domain is empty");
    }
    margin = std::max(margin, 2.0 / n);
    auto [blo, bhi] = dom.bounding_box();
    for (std::size_t i = 0; i < blo.size(); ++i) {
        blo[i] -= margin;
        bhi[i] += margin;
    }
    LatticeDomain lat(n, blo, bhi);
    const double inv_n = 1.0 / n;
    const double tol = 1e-9;

    std::vector<const ConvexPolytope*> parts;
    for (const auto& part : dom.body.parts())
        if (!part.empty()) parts.push_back(&part);
    if (parts.empty()) throw EmptyDiscretization("empty discretization: the domain is empty");

    // Omega_n: d_inf(x, Omega) < 1/n. The distance to the open set equals
    // the distance to its closure, with membership short-circuiting to 0.
    for (std::size_t idx = 0; idx < lat.count_; ++idx) {
        Vec x = lat.point(idx);
        double dinf = std::numeric_limits<double>::infinity();
        for (const auto* part : parts) {
            dinf = std::min(dinf, part->dinf(x));
            if (dinf == 0.0) break;
        }
        lat.omega_[idx] = dinf < inv_n - tol;
    }
    bool any = false;
    for (char f : lat.omega_) any |= f != 0;
    if (!any) throw EmptyDiscretization("empty discretization: mesh too coarse for the domain");

    // Gamma_n: vertices of Omega_n with a lattice neighbour outside Omega_n.
    const std::size_t d = lat.lo_.size();
    for (std::size_t idx = 0; idx < lat.count_; ++idx) {
        if (!lat.omega_[idx]) continue;
        auto c = lat.coords(idx);
        bool boundary = false;
        for (std::size_t a = 0; a < d && !boundary; ++a) {
            for (int s : {-1, 1}) {
                auto c2 = c;
                c2[a] += s;
                std::size_t j = lat.index_of(c2);
                if (j == LatticeDomain::npos || !lat.omega_[j]) { boundary = true; break; }
            }
        }
        lat.gamma_[idx] = boundary;
    }

    auto patch_dinf = [&](const std::vector<ConvexPolytope>& patches, const Vec& x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : patches) best = std::min(best, p.dinf(x));
        return best;
    };
    for (std::size_t idx = 0; idx < lat.count_; ++idx) {
        if (!lat.gamma_[idx]) continue;
        Vec x = lat.point(idx);
        bool near1 = !dom.source.empty() && patch_dinf(dom.source, x) < inv_n - tol;
        bool near2 = !dom.sink.empty() && patch_dinf(dom.sink, x) < inv_n - tol;
        lat.gamma1_[idx] = near1 && !near2;
        lat.gamma2_[idx] = near2 && !near1;
        lat.ambiguous_[idx] = near1 && near2;
    }
    return lat;
}

}  // namespace fpp
