#include "fpp/cutset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fpp {

namespace {

// The flat polytope carrying one boundary face: the part's system plus the
// face plane from both sides.
ConvexPolytope face_polytope(const PolyhedralSet& P, const BoundaryFace& f) {
    std::vector<Halfspace> hs = P.parts()[f.part].halfspaces();
    hs.push_back({f.normal, f.offset});
    hs.push_back({scale(f.normal, -1.0), -f.offset});
    return ConvexPolytope(f.normal.size(), std::move(hs));
}

ConvexPolytope point_polytope(const Vec& x) { return ConvexPolytope::box(x, x); }

// U(k) intersected with the enlarged domain. The innermost band excludes
// the interior of P (it is closure(P(1)) minus int P); the others are the
// half-open distance bands [lo, hi). The domain test is slackened by the
// lattice tolerance 1/n so edges of the discrete domain near its boundary
// are kept.
class BandRegion : public Region {
  public:
    BandRegion(const PolyhedralSet& P, const PolyhedralSet& body, double lo, double hi,
               bool innermost, double slack)
        : P_(&P), body_(&body), lo_(lo), hi_(hi), inner_(innermost), slack_(slack) {}

    bool contains(const Vec& x) const override {
        double dd = P_->d2(x);
        if (dd >= hi_) return false;
        if (inner_) {
            if (P_->strictly_contains(x)) return false;
        } else if (dd < lo_) {
            return false;
        }
        return body_->contains(x) || body_->d2(x) < slack_;
    }

  private:
    const PolyhedralSet* P_;
    const PolyhedralSet* body_;
    double lo_, hi_;
    bool inner_;
    double slack_;
};

// {x in B : lo <= d2(x, boundary of R + R v) < hi}, the in-plane rim band.
class WallBand : public Region {
  public:
    WallBand(const ConvexPolytope& B, const HyperRect& rect, double lo, double hi)
        : B_(&B), rect_(&rect), lo_(lo), hi_(hi) {}

    bool contains(const Vec& x) const override {
        if (!B_->contains(x, 1e-9)) return false;
        Vec rel = sub(x, rect_->center);
        double rim = 1e300;
        for (std::size_t i = 0; i < rect_->frame.size(); ++i) {
            double u = dot(rel, rect_->frame[i]);
            rim = std::min(rim, rect_->sides[i] / 2 - std::fabs(u));
        }
        rim = std::max(rim, 0.0);
        return rim >= lo_ && rim < hi_;
    }

  private:
    const ConvexPolytope* B_;
    const HyperRect* rect_;
    double lo_, hi_;
};

std::map<GridEdge, std::size_t> edge_index(const FlowProblem& p) {
    std::map<GridEdge, std::size_t> m;
    for (std::size_t i = 0; i < p.edges.size(); ++i) m.emplace(p.edges[i].grid, i);
    return m;
}

std::vector<std::size_t> map_edges(const std::vector<GridEdge>& es,
                                   const std::map<GridEdge, std::size_t>& m) {
    std::vector<std::size_t> out;
    for (const GridEdge& e : es) {
        auto it = m.find(e);
        if (it != m.end()) out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

nlohmann::json edges_to_json(const std::vector<GridEdge>& es) {
    nlohmann::json j = nlohmann::json::array();
    for (const GridEdge& e : es) {
        nlohmann::json je;
        je["base"] = e.base;
        je["axis"] = e.axis;
        j.push_back(std::move(je));
    }
    return j;
}

std::vector<GridEdge> edges_from_json(const nlohmann::json& j) {
    std::vector<GridEdge> es;
    for (const auto& je : j) {
        GridEdge e;
        e.base = je.at("base").get<std::vector<int>>();
        e.axis = je.at("axis").get<int>();
        es.push_back(std::move(e));
    }
    return es;
}

nlohmann::json poly_to_json(const ConvexPolytope& p) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& h : p.halfspaces()) j.push_back({{"a", h.a}, {"b", h.b}});
    return j;
}

ConvexPolytope poly_from_json(const nlohmann::json& j, std::size_t d) {
    std::vector<Halfspace> hs;
    for (const auto& jh : j) hs.push_back({jh.at("a").get<Vec>(), jh.at("b").get<double>()});
    return ConvexPolytope(d, std::move(hs));
}

nlohmann::json set_to_json(const PolyhedralSet& s) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : s.parts()) j.push_back(poly_to_json(p));
    return j;
}

PolyhedralSet set_from_json(const nlohmann::json& j, std::size_t d) {
    std::vector<ConvexPolytope> parts;
    for (const auto& jp : j) parts.push_back(poly_from_json(jp, d));
    return PolyhedralSet(std::move(parts));
}

// Sum of field values over a set of grid edges.
double edge_capacity(const std::vector<GridEdge>& es, const CapacityField& field) {
    double s = 0.0;
    for (const GridEdge& e : es) s += field.value(e);
    return s;
}

}  // namespace

double boundary_clearance(const PolyhedralSet& P, const ContinuousDomain& dom) {
    double best = 1e300;
    for (const BoundaryFace& f : P.faces()) {
        ConvexPolytope fp = face_polytope(P, f);
        for (const auto& g : dom.source) best = std::min(best, polytope_distance(fp, g));
        for (const auto& g : dom.sink) best = std::min(best, polytope_distance(fp, g));
    }
    return best;
}

ShellFamily shells(const PolyhedralSet& P, double zeta, int n, double h,
                   const ContinuousDomain& omega_prime) {
    const std::size_t d = omega_prime.d;
    if (P.parts().empty()) throw std::invalid_argument("P must be nonempty");
    if (zeta < 2.0 * static_cast<double>(d))
        throw std::invalid_argument("zeta must be at least 2d");
    if (h <= 0) throw std::invalid_argument("h must be positive");
    double h0 = boundary_clearance(P, omega_prime);
    if (h >= h0)
        throw std::invalid_argument("h must stay below the boundary clearance h0 = " +
                                    std::to_string(h0));
    int count = static_cast<int>(std::floor(h * n / zeta + 1e-12));
    if (count < 1)
        throw std::invalid_argument(
            "mesh too coarse: floor(h n / zeta) = 0, no shell fits (needs larger n)");

    ShellFamily sf;
    sf.P = P;
    sf.zeta = zeta;
    sf.n = n;
    sf.h = h;
    sf.h0 = h0;
    LatticeDomain lat = discretize(omega_prime, n);
    for (int k = 0; k < count; ++k) {
        BandRegion band(sf.P, omega_prime.body, k * zeta / n, (k + 1) * zeta / n, k == 0,
                        1.0 / n);
        sf.mprime.push_back(lat.edges_in(band));
    }
    return sf;
}

ShellCutCheck family_cut_check(const ShellFamily& sf, const LatticeDomain& lat) {
    ShellCutCheck out;
    CapacityField unit{CapacityLaw::constant(1.0), 0};
    FlowProblem p = domain_problem(lat, unit);
    auto index = edge_index(p);
    out.all_pass = true;
    for (const auto& m : sf.mprime) {
        bool ok = is_cutset(map_edges(m, index), p);
        out.pass.push_back(ok ? 1 : 0);
        out.all_pass = out.all_pass && ok;
    }
    out.gamma1_inside = true;
    out.gamma2_outside = true;
    double beyond = sf.count() * sf.zeta / sf.n;
    for (std::size_t i = 0; i < lat.vertex_count(); ++i) {
        if (lat.in_gamma1(i) && !sf.P.strictly_contains(lat.point(i))) out.gamma1_inside = false;
        if (lat.in_gamma2(i) && sf.P.d2(lat.point(i)) <= beyond) out.gamma2_outside = false;
    }
    return out;
}

int minimal_valid_mesh(const PolyhedralSet& P, double zeta, double h,
                       const ContinuousDomain& omega_prime, const std::vector<int>& meshes) {
    std::vector<int> ms = meshes;
    std::sort(ms.begin(), ms.end());
    for (int n : ms) {
        ShellFamily sf;
        try {
            sf = shells(P, zeta, n, h, omega_prime);
        } catch (const std::invalid_argument&) {
            continue;  // no shell fits at this mesh
        }
        LatticeDomain lat = discretize(omega_prime, n);
        if (family_cut_check(sf, lat).all_pass) return n;
    }
    return -1;
}

CoveringCutset build_covering(const PolyhedralSet& P, const ContinuousDomain& omega_prime,
                              double l, double eps, double h, double eta, double zeta, int n) {
    const std::size_t d = omega_prime.d;
    if (eta <= 0) throw std::invalid_argument("eta must be positive");
    if (l <= 0) throw std::invalid_argument("square side l must be positive");

    CoveringCutset cc;
    cc.P = P;
    cc.zeta = zeta;
    cc.h = h;
    cc.eta = eta;
    cc.l = l;
    cc.eps = eps;
    cc.n = n;

    // Transversality of the boundary bend (the h2 requirement): without it
    // the glue sets near Gamma' are uncontrolled.
    TransverseCheck tc = transverse(P, omega_prime.body);
    if (!tc.ok)
        throw std::invalid_argument(
            "boundary of P is not transverse to the domain boundary (h2 requirement): " +
            tc.detail);
    cc.theta0 = tc.min_angle;

    // Shells check zeta >= 2d, h < h0 and the mesh resolution.
    cc.shellfam = shells(P, zeta, n, h, omega_prime);

    int wall_count = static_cast<int>(std::floor(eta * n / zeta + 1e-12));
    if (wall_count < 1)
        throw std::invalid_argument(
            "mesh too coarse for the wall bands: eta < zeta/n (needs larger n)");

    // Square cover of each face of P inside the domain. Per-face in-plane
    // slices of the domain parts are merged (d=2) or covered greedily with
    // overlapping squares dropped (d=3).
    const auto& fs = P.faces();
    const auto& parts = omega_prime.body.parts();
    struct PendingFace {
        std::size_t face;
        FaceRef ref;
    };
    std::vector<PendingFace> refs;
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        const BoundaryFace& f = fs[fi];
        FaceRef base;
        base.origin = f.origin;
        base.basis = f.basis;
        base.normal = f.normal;
        if (f.basis.size() == 1) {
            std::vector<std::pair<double, double>> ivals;
            for (const auto& part : parts) {
                PlanarPoly s = f.face.intersect(part.slice(f.origin, f.basis));
                auto iv = s.interval();
                if (iv && iv->second - iv->first > 1e-9) ivals.push_back(*iv);
            }
            std::sort(ivals.begin(), ivals.end());
            for (std::size_t i = 0; i < ivals.size(); ++i) {
                auto [a, b] = ivals[i];
                while (i + 1 < ivals.size() && ivals[i + 1].first <= b + 1e-9) {
                    b = std::max(b, ivals[i + 1].second);
                    ++i;
                }
                FaceRef r = base;
                r.region.fd = 1;
                r.region.hs = {{{1.0}, b}, {{-1.0}, -a}};
                refs.push_back({fi, std::move(r)});
            }
        } else {
            for (const auto& part : parts) {
                PlanarPoly s = f.face.intersect(part.slice(f.origin, f.basis));
                if (s.measure() < 1e-9) continue;
                FaceRef r = base;
                r.region = s;
                refs.push_back({fi, std::move(r)});
            }
        }
    }
    if (refs.empty())
        throw std::invalid_argument("the boundary of P does not meet the domain");

    double budget = eps / static_cast<double>(refs.size());
    for (const auto& pf : refs) {
        std::vector<SquarePatch> patches = square_cover(pf.ref, l, budget, 1);
        for (const SquarePatch& sp : patches) {
            // Drop overlaps with squares accepted earlier (d=3 slices of the
            // domain parts can overlap); the loss is part of the eps budget.
            bool overlap = false;
            for (const CylinderSpec& prev : cc.cylinders) {
                if (norminf(sub(prev.base.center, sp.rect.center)) >
                    0.5 * (prev.base.sides[0] + sp.rect.sides[0]) + 1e-9)
                    continue;
                Vec rel = sub(sp.rect.center, prev.base.center);
                bool apart = std::fabs(dot(rel, prev.v)) > 1e-9;
                for (std::size_t m = 0; m < prev.base.frame.size() && !apart; ++m)
                    if (std::fabs(dot(rel, prev.base.frame[m])) >=
                        0.5 * (prev.base.sides[m] + sp.rect.sides[m]) - 1e-9)
                        apart = true;
                if (!apart) overlap = true;
                if (overlap) break;
            }
            if (overlap) continue;
            CylinderSpec spec;
            spec.base = sp.rect;
            spec.v = sp.normal;
            spec.h = h;
            spec.one_sided = true;
            cc.cylinders.push_back(std::move(spec));
            cc.face_of.push_back(static_cast<int>(pf.face));
        }
    }
    if (cc.cylinders.empty())
        throw std::invalid_argument("square cover produced no squares: eps swallows the faces");

    // Shrunken cores B' with in-plane margin eta. A square too small for the
    // margin gets an empty core: its glue edges simply stay in M(k).
    for (const CylinderSpec& c : cc.cylinders) {
        std::vector<Halfspace> hs;
        bool degenerate = false;
        for (std::size_t m = 0; m < c.base.frame.size(); ++m) {
            double half = c.base.sides[m] / 2 - eta;
            if (half <= 1e-9) degenerate = true;
            double cm = dot(c.base.center, c.base.frame[m]);
            hs.push_back({c.base.frame[m], cm + half});
            hs.push_back({scale(c.base.frame[m], -1.0), -(cm - half)});
        }
        double cv = dot(c.base.center, c.v);
        hs.push_back({c.v, cv + h});
        hs.push_back({scale(c.v, -1.0), -cv});
        if (degenerate) hs.push_back({Vec(d, 0.0), -1.0});  // infeasible: empty core
        cc.core.push_back(ConvexPolytope(d, std::move(hs)));
    }

    // Pairwise interior disjointness (the h1 requirement).
    std::vector<ConvexPolytope> solids;
    for (const CylinderSpec& c : cc.cylinders) solids.push_back(c.polytope().inflated(-1e-7));
    for (std::size_t i = 0; i < solids.size(); ++i)
        for (std::size_t j = i + 1; j < solids.size(); ++j)
            if (!solids[i].intersect(solids[j]).empty())
                throw std::invalid_argument(
                    "cylinders " + std::to_string(i) + " and " + std::to_string(j) +
                    " have overlapping interiors: h exceeds the disjointness bound h1");

    // Wall bands and glue sets need lattice edges beyond the domain body.
    LatticeDomain lat = discretize(omega_prime, n, 0.25 + h);
    std::vector<ConvexPolytope> full;
    for (const CylinderSpec& c : cc.cylinders) full.push_back(c.polytope());
    for (int k = 0; k < wall_count; ++k) {
        std::set<GridEdge> w;
        for (std::size_t ci = 0; ci < cc.cylinders.size(); ++ci) {
            WallBand band(full[ci], cc.cylinders[ci].base, k * zeta / n, (k + 1) * zeta / n);
            for (const GridEdge& e : lat.edges_in(band, false)) w.insert(e);
        }
        cc.wall.emplace_back(w.begin(), w.end());
    }

    for (const auto& m : cc.shellfam.mprime) {
        std::vector<GridEdge> g;
        for (const GridEdge& e : m) {
            Vec a(d), b(d);
            for (std::size_t i = 0; i < d; ++i)
                a[i] = b[i] = static_cast<double>(e.base[i]) / n;
            b[static_cast<std::size_t>(e.axis)] += 1.0 / n;
            bool inside_core = false;
            for (const ConvexPolytope& cp : cc.core)
                if (cp.contains(a, -1e-9) && cp.contains(b, -1e-9)) {
                    inside_core = true;
                    break;
                }
            if (!inside_core) g.push_back(e);
        }
        cc.glue.push_back(std::move(g));
    }
    return cc;
}

CoveringCutset build_covering_resolved(const PolyhedralSet& P,
                                       const ContinuousDomain& omega_prime,
                                       ScaffoldConstants req, int n, ScaffoldConstants* used) {
    const std::size_t d = omega_prime.d;
    ScaffoldConstants c = req;
    c.zeta = std::max(c.zeta, 2.0 * static_cast<double>(d));
    double band = c.zeta / n;
    c.h = std::max(c.h, 1.02 * band);
    c.eta = std::max(c.eta, 1.02 * band);
    for (int attempt = 0;; ++attempt) {
        CoveringCutset cc = build_covering(P, omega_prime, c.l, c.eps, c.h, c.eta, c.zeta, n);
        bool have_core = false;
        for (const ConvexPolytope& cp : cc.core) have_core = have_core || !cp.empty();
        if (have_core || attempt >= 8) {
            if (used) *used = c;
            return cc;
        }
        c.l *= 1.5;  // squares too small for the eta margin; retry coarser
    }
}

namespace {

// Shared by upper_bound and combined_cutset_check: per-cylinder bottom->top
// flows and their min-cut edges.
struct CylinderCuts {
    std::vector<double> values;
    std::vector<GridEdge> cut_edges;
};

CylinderCuts cylinder_cuts(const CoveringCutset& cc, const CapacityField& field) {
    CylinderCuts out;
    for (const CylinderSpec& c : cc.cylinders) {
        CylinderSets sets = cylinder_lattice_sets(c, cc.n);
        if (sets.points.empty()) {
            out.values.push_back(0.0);
            continue;
        }
        FlowProblem p = cylinder_problem(sets, field, CylinderVariable::Phi);
        if (p.sources.empty() || p.sinks.empty()) {
            out.values.push_back(0.0);
            continue;
        }
        CutResult cut = min_cut(p);
        out.values.push_back(cut.capacity);
        for (std::size_t idx : cut.edge_indices) out.cut_edges.push_back(p.edges[idx].grid);
    }
    return out;
}

bool combined_check(const CoveringCutset& cc, const FlowProblem& p,
                    const std::map<GridEdge, std::size_t>& index,
                    const CylinderCuts& cyl, std::size_t k1, std::size_t k2) {
    std::vector<GridEdge> all = cyl.cut_edges;
    all.insert(all.end(), cc.wall[k1].begin(), cc.wall[k1].end());
    all.insert(all.end(), cc.glue[k2].begin(), cc.glue[k2].end());
    return is_cutset(map_edges(all, index), p);
}

}  // namespace

UpperBoundResult upper_bound(const CoveringCutset& cc, const LatticeDomain& lat,
                             const CapacityField& field) {
    UpperBoundResult r;
    FlowProblem p = domain_problem(lat, field);
    r.phi_n = max_flow(p).value;

    CylinderCuts cyl = cylinder_cuts(cc, field);
    r.cyl_values = cyl.values;
    for (double v : cyl.values) r.cyl_sum += v;

    for (const auto& w : cc.wall) r.wall_caps.push_back(edge_capacity(w, field));
    for (const auto& g : cc.glue) r.glue_caps.push_back(edge_capacity(g, field));
    r.k1 = std::min_element(r.wall_caps.begin(), r.wall_caps.end()) - r.wall_caps.begin();
    r.k2 = std::min_element(r.glue_caps.begin(), r.glue_caps.end()) - r.glue_caps.begin();
    r.wall_min = r.wall_caps[r.k1];
    r.glue_min = r.glue_caps[r.k2];
    r.bound = r.cyl_sum + r.wall_min + r.glue_min;
    r.holds = r.phi_n <= r.bound + 1e-9 * std::max(1.0, r.bound);

    auto index = edge_index(p);
    r.cutset_ok = combined_check(cc, p, index, cyl, r.k1, r.k2);
    return r;
}

bool combined_cutset_check(const CoveringCutset& cc, const LatticeDomain& lat,
                           const CapacityField& field, std::size_t k1, std::size_t k2) {
    FlowProblem p = domain_problem(lat, field);
    auto index = edge_index(p);
    CylinderCuts cyl = cylinder_cuts(cc, field);
    return combined_check(cc, p, index, cyl, k1, k2);
}

AuditResult cardinality_audit(const std::vector<CoveringCutset>& scaffolds) {
    AuditResult out;
    if (scaffolds.empty()) return out;
    out.theta0 = 1e300;
    for (const CoveringCutset& sc : scaffolds) {
        out.theta0 = std::min(out.theta0, sc.theta0);
        const std::size_t d = sc.P.dim();
        double nd1 = std::pow(sc.n, static_cast<double>(d) - 1);
        for (std::size_t k = 0; k < sc.wall.size(); ++k) {
            double ratio = static_cast<double>(sc.wall[k].size()) * sc.l / (sc.h * nd1);
            out.c2_hat = std::max(out.c2_hat, ratio);
            out.rows.push_back({sc.n, "W", k, sc.wall[k].size(), 0.0});
        }
        double glue_scale =
            (sc.eps + sc.eta / sc.l + std::pow(sc.h, static_cast<double>(d) - 2) + sc.h) * nd1;
        for (std::size_t k = 0; k < sc.glue.size(); ++k) {
            out.c6_hat = std::max(out.c6_hat, static_cast<double>(sc.glue[k].size()) / glue_scale);
            out.rows.push_back({sc.n, "M", k, sc.glue[k].size(), 0.0});
        }
    }
    // Fill the fitted bounds now that the constants are known.
    std::size_t row = 0;
    for (const CoveringCutset& sc : scaffolds) {
        const std::size_t d = sc.P.dim();
        double nd1 = std::pow(sc.n, static_cast<double>(d) - 1);
        for (std::size_t k = 0; k < sc.wall.size(); ++k)
            out.rows[row++].bound = out.c2_hat * sc.h / sc.l * nd1;
        double glue_scale =
            (sc.eps + sc.eta / sc.l + std::pow(sc.h, static_cast<double>(d) - 2) + sc.h) * nd1;
        for (std::size_t k = 0; k < sc.glue.size(); ++k)
            out.rows[row++].bound = out.c6_hat * glue_scale;
    }

    // Split of the glue sets: over a face translate (M1), near a face-pair
    // bend (M2), remainder near the domain boundary (M3).
    for (const CoveringCutset& sc : scaffolds) {
        const std::size_t d = sc.P.dim();
        const auto& fs = sc.P.faces();
        std::vector<ConvexPolytope> fpolys;
        for (const BoundaryFace& f : fs) fpolys.push_back(face_polytope(sc.P, f));
        std::size_t m1 = 0, m2 = 0, m3 = 0;
        for (std::size_t k = 0; k < sc.glue.size(); ++k) {
            double lo = k * sc.zeta / sc.n, hi = (k + 1) * sc.zeta / sc.n;
            for (const GridEdge& e : sc.glue[k]) {
                Vec x(d);
                for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(e.base[i]) / sc.n;
                x[static_cast<std::size_t>(e.axis)] += 0.5 / sc.n;
                bool translate = false;
                for (std::size_t fi = 0; fi < fs.size() && !translate; ++fi) {
                    const BoundaryFace& f = fs[fi];
                    double t = dot(f.normal, x) - f.offset;
                    if (t < lo - 1e-9 || t >= hi + 1e-9) continue;
                    Vec proj = sub(x, scale(f.normal, t));
                    if (!f.face.contains(f.to_plane(proj))) continue;
                    bool in_core_footprint = false;
                    for (std::size_t ci = 0; ci < sc.cylinders.size(); ++ci) {
                        if (sc.face_of[ci] != static_cast<int>(fi)) continue;
                        const HyperRect& rect = sc.cylinders[ci].base;
                        Vec rel = sub(proj, rect.center);
                        bool inside = true;
                        for (std::size_t m = 0; m < rect.frame.size(); ++m)
                            if (std::fabs(dot(rel, rect.frame[m])) >=
                                rect.sides[m] / 2 - sc.eta)
                                inside = false;
                        if (inside) in_core_footprint = true;
                        if (in_core_footprint) break;
                    }
                    if (!in_core_footprint) translate = true;
                }
                if (translate) {
                    ++m1;
                    continue;
                }
                bool bend = false;
                ConvexPolytope px = point_polytope(x);
                for (std::size_t i = 0; i < fpolys.size() && !bend; ++i)
                    for (std::size_t j = i + 1; j < fpolys.size() && !bend; ++j) {
                        ConvexPolytope inter = fpolys[i].intersect(fpolys[j]);
                        if (inter.empty()) continue;
                        if (polytope_distance(px, inter) <= hi + 1e-9) bend = true;
                    }
                if (bend)
                    ++m2;
                else
                    ++m3;
            }
        }
        out.m1.push_back(m1);
        out.m2.push_back(m2);
        out.m3.push_back(m3);
    }
    return out;
}

std::string AuditResult::to_csv() const {
    std::ostringstream os;
    os << "n,family,k,count,bound\n";
    for (const AuditRow& r : rows)
        os << r.n << "," << r.family << "," << r.k << "," << r.count << "," << r.bound << "\n";
    return os.str();
}

Calibration calibrate_constants(double s, const PolyhedralSet& P,
                                const ContinuousDomain& omega_prime, const CapacityLaw& law,
                                double c2_hat, double c6_hat, const NuTable& table,
                                double h_cap, int n) {
    Calibration cal;
    const std::size_t d = omega_prime.d;
    cal.zeta = 2.0 * static_cast<double>(d);
    if (s <= 0) throw std::invalid_argument("margin s must be positive");
    law.validate();

    // Surface measure and flow-constant range of the boundary of P inside
    // the domain.
    const auto& parts = omega_prime.body.parts();
    cal.nu_min = 1e300;
    for (const BoundaryFace& f : P.faces()) {
        double a = face_clipped_area(f, parts);
        if (a < 1e-9) continue;
        cal.area += a;
        double nv = table.nu(f.normal);
        cal.nu_min = std::min(cal.nu_min, nv);
        cal.nu_max = std::max(cal.nu_max, nv);
    }
    if (cal.area < 1e-9)
        throw std::invalid_argument("the boundary of P does not meet the domain");
    cal.rhs = cal.area * cal.nu_min * law.mean() * s / 16.0;
    if (cal.nu_min <= 1e-12) {
        cal.feasible = false;
        cal.report =
            "infeasible: the flow constant vanishes along some face (mass at zero reaches "
            "the percolation threshold), so the capacity target is zero";
        return cal;
    }

    // eps first, capped by the half-integral budget; then l from the face
    // extent; then h and eta against the fitted cardinality constants.
    double integral = capacity_integral(P, parts, {}, table);
    double eps0 = integral / (2.0 * cal.nu_max);
    cal.eps = 0.9 * std::min(eps0, cal.rhs / (4.0 * c6_hat));
    double min_face = 1e300;
    for (const BoundaryFace& f : P.faces()) {
        double a = face_clipped_area(f, parts);
        if (a < 1e-9) continue;
        min_face = std::min(min_face, std::pow(a, 1.0 / (static_cast<double>(d) - 1)));
    }
    cal.l = min_face / 4.0;
    double budget = cal.rhs / (4.0 * std::max(c2_hat, c6_hat));
    double h_max = std::min(0.999 * h_cap, 0.9 * std::min(budget, budget * cal.l));
    if (d > 2) h_max = std::min(h_max, std::pow(0.9 * budget, 1.0 / (static_cast<double>(d) - 2)));
    cal.h = h_max;
    cal.eta = std::min({0.9 * budget * cal.l, 0.45 * cal.l, cal.h});

    double band = cal.zeta / n;
    if (cal.h < band || cal.eta < band) {
        cal.feasible = false;
        std::ostringstream os;
        os << "infeasible: needs larger n; the calibrated h = " << cal.h << " and eta = "
           << cal.eta << " cannot resolve a band of width zeta/n = " << band;
        cal.report = os.str();
        return cal;
    }

    cal.cond_wall = c2_hat * cal.h / cal.l < cal.rhs;
    cal.cond_glue =
        c6_hat * (cal.eps + cal.eta / cal.l + std::pow(cal.h, static_cast<double>(d) - 2) +
                  cal.h) < cal.rhs;
    cal.feasible = cal.cond_wall && cal.cond_glue;
    std::ostringstream os;
    if (cal.feasible) {
        os << "feasible: eps = " << cal.eps << ", l = " << cal.l << ", h = " << cal.h
           << ", eta = " << cal.eta << ", zeta = " << cal.zeta << " against rhs = " << cal.rhs;
    } else {
        os << "infeasible: the capacity target rhs = " << cal.rhs
           << " is below the fitted cardinality terms (wall " << c2_hat * cal.h / cal.l
           << ", glue "
           << c6_hat * (cal.eps + cal.eta / cal.l +
                        std::pow(cal.h, static_cast<double>(d) - 2) + cal.h)
           << "); increase s or refine the audit";
    }
    cal.report = os.str();
    return cal;
}

std::string ShellFamily::to_json() const {
    nlohmann::json j;
    j["zeta"] = zeta;
    j["n"] = n;
    j["h"] = h;
    j["h0"] = h0;
    j["P"] = set_to_json(P);
    j["dim"] = P.dim();
    j["mprime"] = nlohmann::json::array();
    for (const auto& m : mprime) j["mprime"].push_back(edges_to_json(m));
    return j.dump(2);
}

ShellFamily ShellFamily::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ShellFamily sf;
    sf.zeta = j.at("zeta").get<double>();
    sf.n = j.at("n").get<int>();
    sf.h = j.at("h").get<double>();
    sf.h0 = j.at("h0").get<double>();
    sf.P = set_from_json(j.at("P"), j.at("dim").get<std::size_t>());
    for (const auto& jm : j.at("mprime")) sf.mprime.push_back(edges_from_json(jm));
    return sf;
}

std::string CoveringCutset::to_json() const {
    nlohmann::json j;
    j["zeta"] = zeta;
    j["h"] = h;
    j["eta"] = eta;
    j["l"] = l;
    j["eps"] = eps;
    j["n"] = n;
    j["theta0"] = theta0;
    j["dim"] = P.dim();
    j["P"] = set_to_json(P);
    j["face_of"] = face_of;
    j["cylinders"] = nlohmann::json::array();
    for (const CylinderSpec& c : cylinders) {
        nlohmann::json jc;
        jc["center"] = c.base.center;
        jc["frame"] = c.base.frame;
        jc["sides"] = c.base.sides;
        jc["v"] = c.v;
        jc["h"] = c.h;
        jc["one_sided"] = c.one_sided;
        j["cylinders"].push_back(std::move(jc));
    }
    j["core"] = nlohmann::json::array();
    for (const ConvexPolytope& p : core) j["core"].push_back(poly_to_json(p));
    j["shellfam"] = nlohmann::json::parse(shellfam.to_json());
    j["wall"] = nlohmann::json::array();
    for (const auto& w : wall) j["wall"].push_back(edges_to_json(w));
    j["glue"] = nlohmann::json::array();
    for (const auto& g : glue) j["glue"].push_back(edges_to_json(g));
    return j.dump(2);
}

CoveringCutset CoveringCutset::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CoveringCutset cc;
    cc.zeta = j.at("zeta").get<double>();
    cc.h = j.at("h").get<double>();
    cc.eta = j.at("eta").get<double>();
    cc.l = j.at("l").get<double>();
    cc.eps = j.at("eps").get<double>();
    cc.n = j.at("n").get<int>();
    cc.theta0 = j.at("theta0").get<double>();
    std::size_t d = j.at("dim").get<std::size_t>();
    cc.P = set_from_json(j.at("P"), d);
    cc.face_of = j.at("face_of").get<std::vector<int>>();
    for (const auto& jc : j.at("cylinders")) {
        CylinderSpec c;
        c.base.center = jc.at("center").get<Vec>();
        c.base.frame = jc.at("frame").get<std::vector<Vec>>();
        c.base.sides = jc.at("sides").get<Vec>();
        c.v = jc.at("v").get<Vec>();
        c.h = jc.at("h").get<double>();
        c.one_sided = jc.at("one_sided").get<bool>();
        cc.cylinders.push_back(std::move(c));
    }
    for (const auto& jp : j.at("core")) cc.core.push_back(poly_from_json(jp, d));
    cc.shellfam = ShellFamily::from_json(j.at("shellfam").dump());
    for (const auto& jw : j.at("wall")) cc.wall.push_back(edges_from_json(jw));
    for (const auto& jg : j.at("glue")) cc.glue.push_back(edges_from_json(jg));
    return cc;
}

}  // namespace fpp
