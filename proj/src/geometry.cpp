#include "fpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The part's full (untrimmed) face as a flat polytope in world coordinates.
ConvexPolytope face_polytope(const ConvexPolytope& part, const Vec& normal, double offset) {
    auto hs = part.halfspaces();
    hs.push_back({normal, offset});
    hs.push_back({scale(normal, -1.0), -offset});
    return ConvexPolytope(part.dim(), std::move(hs));
}

// Unit normal of the affine hull of a flat (d-1 dimensional) polytope.
Vec flat_normal(const ConvexPolytope& patch) {
    for (const auto& h : patch.halfspaces()) {
        double len = norm2(h.a);
        if (len < 1e-12) continue;
        Vec n = scale(h.a, 1.0 / len);
        double width = patch.support(n) + patch.support(scale(n, -1.0));
        if (width < 1e-9) return n;
    }
    throw std::invalid_argument("patch is not a flat polytope on a facet");
}

std::vector<Vec> rotation2(double t) {
    return {{std::cos(t), std::sin(t)}, {-std::sin(t), std::cos(t)}};
}

std::vector<Vec> rotation3(double a, double b, double c) {
    double ca = std::cos(a), sa = std::sin(a);
    double cb = std::cos(b), sb = std::sin(b);
    double cc = std::cos(c), sc = std::sin(c);
    // ZYZ Euler rotation rows.
    return {{ca * cb * cc - sa * sc, sa * cb * cc + ca * sc, -sb * cc},
            {-ca * cb * sc - sa * cc, -sa * cb * sc + ca * cc, sb * sc},
            {ca * sb, sa * sb, cb}};
}

double basis_score(const std::vector<Vec>& basis, const std::vector<Vec>& normals) {
    double worst = kPi;
    for (const auto& b : basis)
        for (const auto& m : normals) {
            double c = std::min(1.0, std::abs(dot(b, m)));
            worst = std::min(worst, std::acos(c));
        }
    return worst;
}

// Orthonormal basis whose directions stay as far as possible (in angle)
// from every given normal; cube faces along this basis are then transverse
// to every facet.
std::vector<Vec> pick_basis(std::size_t d, const std::vector<Vec>& normals, double* gap) {
    std::vector<Vec> best;
    double best_score = -1.0;
    if (d == 2) {
        for (int i = 0; i < 1800; ++i) {
            double t = i * (kPi / 2) / 1800;
            auto cand = rotation2(t);
            double s = basis_score(cand, normals);
            if (s > best_score) {
                best_score = s;
                best = cand;
            }
        }
    } else if (d == 3) {
        double pa = 0, pb = 0, pc = 0, step = kPi / 24;
        for (int ia = 0; ia < 24; ++ia)
            for (int ib = 0; ib < 24; ++ib)
                for (int ic = 0; ic < 24; ++ic) {
                    auto cand = rotation3(ia * step, ib * step, ic * step);
                    double s = basis_score(cand, normals);
                    if (s > best_score) {
                        best_score = s;
                        pa = ia * step;
                        pb = ib * step;
                        pc = ic * step;
                        best = cand;
                    }
                }
        for (int round = 0; round < 10; ++round) {
            step *= 0.5;
            double ba = pa, bb = pb, bc = pc;
            for (int ia = -2; ia <= 2; ++ia)
                for (int ib = -2; ib <= 2; ++ib)
                    for (int ic = -2; ic <= 2; ++ic) {
                        auto cand =
                            rotation3(ba + ia * step, bb + ib * step, bc + ic * step);
                        double s = basis_score(cand, normals);
                        if (s > best_score) {
                            best_score = s;
                            pa = ba + ia * step;
                            pb = bb + ib * step;
                            pc = bc + ic * step;
                            best = cand;
                        }
                    }
        }
    } else {
        throw std::invalid_argument("cube covers supported for d in {2,3}");
    }
    if (gap) *gap = best_score;
    return best;
}

std::vector<Vec> boundary_normals(const PolyhedralSet& body) {
    std::vector<Vec> out;
    for (const auto& part : body.parts())
        for (const auto& h : part.halfspaces()) {
            double len = norm2(h.a);
            if (len < 1e-12) continue;
            Vec n = scale(h.a, 1.0 / len);
            bool dup = false;
            for (const auto& m : out)
                if (std::abs(std::abs(dot(n, m)) - 1.0) < 1e-9) dup = true;
            if (!dup) out.push_back(n);
        }
    return out;
}

// Cubes of side r centered on a grid (spacing s) over each flat patch.
std::vector<ConvexPolytope> build_cubes(const std::vector<ConvexPolytope>& patches,
                                        const std::vector<Vec>& basis, double r, double s) {
    std::vector<ConvexPolytope> cubes;
    for (const auto& patch : patches) {
        const std::size_t d = basis.size();
        Vec u = flat_normal(patch);
        auto frame = plane_basis(u);
        Vec x0 = patch.project(Vec(d, 0.0));
        std::vector<double> lo(d - 1), hi(d - 1);
        for (std::size_t k = 0; k < d - 1; ++k) {
            hi[k] = patch.support(frame[k]) - dot(x0, frame[k]);
            lo[k] = -patch.support(scale(frame[k], -1.0)) - dot(x0, frame[k]);
        }
        std::vector<int> counts(d - 1);
        for (std::size_t k = 0; k < d - 1; ++k) {
            double len = std::max(0.0, hi[k] - lo[k]);
            counts[k] = len < 1e-12 ? 1 : static_cast<int>(std::ceil(len / s - 1e-9)) + 1;
        }
        double reach = s * std::sqrt(static_cast<double>(d - 1)) / 2 + 1e-9;
        std::vector<int> ix(d - 1, 0);
        while (true) {
            Vec c = x0;
            for (std::size_t k = 0; k < d - 1; ++k) {
                double t = counts[k] == 1 ? 0.5 * (lo[k] + hi[k])
                                          : lo[k] + ix[k] * (hi[k] - lo[k]) / (counts[k] - 1);
                c = add(c, scale(frame[k], t));
            }
            if (patch.d2(c) <= reach) cubes.push_back(ConvexPolytope::cube(c, basis, r));
            std::size_t k = 0;
            for (; k < d - 1; ++k) {
                if (++ix[k] < counts[k]) break;
                ix[k] = 0;
            }
            if (k == d - 1) break;
        }
    }
    return cubes;
}

}  // namespace

double HyperRect::area() const {
    double a = 1.0;
    for (double s : sides) a *= s;
    return a;
}

ConvexPolytope CylinderSpec::polytope() const {
    const std::size_t d = v.size();
    std::vector<Halfspace> hs;
    for (std::size_t k = 0; k < base.frame.size(); ++k) {
        double c = dot(base.center, base.frame[k]);
        hs.push_back({base.frame[k], c + base.sides[k] / 2});
        hs.push_back({scale(base.frame[k], -1.0), -(c - base.sides[k] / 2)});
    }
    double cv = dot(base.center, v);
    hs.push_back({v, cv + h});
    hs.push_back({scale(v, -1.0), -(cv + tmin())});
    return ConvexPolytope(d, std::move(hs));
}

const std::vector<BoundaryFace>& faces(const PolyhedralSet& P) { return P.faces(); }

TransverseCheck transverse(const PolyhedralSet& S, const PolyhedralSet& G) {
    TransverseCheck res;
    res.min_angle = kPi / 2;
    std::vector<std::pair<ConvexPolytope, Vec>> fs, fg;
    for (const auto& f : S.faces())
        if (f.area > 1e-12)
            fs.emplace_back(face_polytope(S.parts()[f.part], f.normal, f.offset), f.normal);
    for (const auto& f : G.faces())
        if (f.area > 1e-12)
            fg.emplace_back(face_polytope(G.parts()[f.part], f.normal, f.offset), f.normal);
    for (const auto& [ps, ns] : fs)
        for (const auto& [pg, ng] : fg) {
            Vec wp, wq;
            double dist = polytope_distance(ps, pg, &wp, &wq);
            if (dist > 1e-9) continue;
            double c = std::min(1.0, std::abs(dot(ns, ng)));
            if (c > 1.0 - 1e-9) {
                res.ok = false;
                res.witness = wp;
                res.detail = "collinear face normals at an intersection point";
                return res;
            }
            res.min_angle = std::min(res.min_angle, std::acos(c));
        }
    return res;
}

double face_clipped_area(const BoundaryFace& f, const std::vector<ConvexPolytope>& add,
                         const std::vector<ConvexPolytope>& sub) {
    int fd = static_cast<int>(f.basis.size());
    std::vector<PlanarPoly> in_add, in_add_sub, cov_add, cov_add_sub;
    std::vector<PlanarPoly> add_slices, sub_slices;
    for (const auto& a : add) add_slices.push_back(a.slice(f.origin, f.basis));
    for (const auto& s : sub) sub_slices.push_back(s.slice(f.origin, f.basis));
    for (const auto& a : add_slices) {
        PlanarPoly fa = f.face.intersect(a);
        in_add.push_back(fa);
        for (const auto& s : sub_slices) in_add_sub.push_back(fa.intersect(s));
        for (const auto& c : f.cover) {
            PlanarPoly fca = fa.intersect(c);
            cov_add.push_back(fca);
            for (const auto& s : sub_slices) cov_add_sub.push_back(fca.intersect(s));
        }
    }
    double m = union_measure(in_add, fd) - union_measure(in_add_sub, fd) -
               (union_measure(cov_add, fd) - union_measure(cov_add_sub, fd));
    return std::max(0.0, m);
}

double clip_surface_measure(const PolyhedralSet& P, const std::vector<ConvexPolytope>& add,
                            const std::vector<ConvexPolytope>& sub) {
    double total = 0.0;
    for (const auto& f : P.faces()) total += face_clipped_area(f, add, sub);
    return total;
}

CoverResult cube_cover(const std::vector<ConvexPolytope>& K, const ContinuousDomain& dom,
                       double r, double spacing, const std::vector<Vec>& extra_normals) {
    CoverResult res;
    res.side = r;
    if (K.empty()) {
        res.ok = true;
        return res;
    }
    if (r <= 0) throw std::invalid_argument("cube side must be positive");
    double sep = std::numeric_limits<double>::infinity();
    for (const auto& k : K)
        for (const auto& g2 : dom.sink) sep = std::min(sep, polytope_distance(k, g2));
    if (sep < 1e-12)
        throw std::invalid_argument(
            "finiteness witness unavailable: the patch touches the sink");
    auto normals = boundary_normals(dom.body);
    for (const auto& n : extra_normals) normals.push_back(normalized(n));
    auto basis = pick_basis(dom.d, normals, &res.basis_gap);
    double s = spacing > 0 ? spacing : r;
    auto cubes = build_cubes(K, basis, r, s);
    for (const auto& q : cubes)
        for (const auto& g2 : dom.sink)
            if (polytope_distance(q, g2) < 1e-9) {
                res.ok = false;
                res.message = "cube side too large: the covering reaches the sink";
                res.cover = PolyhedralSet(std::move(cubes));
                return res;
            }
    res.ok = true;
    res.cover = PolyhedralSet(std::move(cubes));
    return res;
}

EnlargedDomain enlarge_domain(const ContinuousDomain& dom, const PolyhedralSet& P,
                              double delta0) {
    if (delta0 <= 0) throw std::invalid_argument("delta0 must be positive");
    auto tv = transverse(P, dom.body);
    if (!tv.ok)
        throw std::invalid_argument("P is not transverse to the domain boundary");
    const std::size_t d = dom.d;
    // Circumradius r*sqrt(d)/2 <= delta0 keeps the cubes inside the
    // delta0-neighborhood of Omega.
    double r = 2 * delta0 / std::sqrt(static_cast<double>(d));
    double s = r / 2;
    auto normals = boundary_normals(dom.body);
    for (const auto& n : boundary_normals(P)) normals.push_back(n);
    double gap = 0.0;
    auto basis = pick_basis(d, normals, &gap);
    std::vector<ConvexPolytope> patches;
    for (const auto& f : dom.body.faces())
        if (f.area > 1e-12)
            patches.push_back(face_polytope(dom.body.parts()[f.part], f.normal, f.offset));
    auto cubes = build_cubes(patches, basis, r, s);
    EnlargedDomain out;
    out.added = PolyhedralSet(cubes);
    // Inscribed radius r/2 minus the grid covering radius: everything that
    // close to the boundary sits inside some cube.
    out.delta1 = r / 2 - s * std::sqrt(static_cast<double>(d - 1)) / 2;
    auto parts = dom.body.parts();
    for (auto& q : cubes) parts.push_back(std::move(q));
    out.omega_prime = dom;
    out.omega_prime.body = PolyhedralSet(std::move(parts));
    return out;
}

std::vector<SquarePatch> square_cover(const FaceRef& H, double l, double eps,
                                      std::size_t nfaces) {
    if (eps <= 0) throw std::invalid_argument("area budget must be positive");
    if (l <= 0) throw std::invalid_argument("square side must be positive");
    const int fd = H.region.fd;
    std::vector<SquarePatch> out;
    auto world = [&](const Vec& u) {
        Vec x = H.origin;
        for (std::size_t k = 0; k < H.basis.size(); ++k) x = add(x, scale(H.basis[k], u[k]));
        return x;
    };
    if (fd == 1) {
        auto iv = H.region.interval();
        if (!iv) return out;
        double L = iv->second - iv->first;
        if (eps >= L) return out;  // the budget swallows the face
        double m = eps / (4.0 * nfaces);  // relative boundary has two points
        for (int rounds = 0; rounds < 40; ++rounds, l *= 0.5) {
            double avail = L - 2 * m;
            int k = avail <= 0 ? 0 : static_cast<int>(std::floor(avail / l + 1e-9));
            if (L - k * l > eps + 1e-12) continue;
            double start = iv->first + m + (avail - k * l) / 2;
            for (int i = 0; i < k; ++i) {
                SquarePatch p;
                p.rect.center = world({start + (i + 0.5) * l});
                p.rect.frame = {H.basis[0]};
                p.rect.sides = {l};
                p.normal = H.normal;
                out.push_back(p);
            }
            return out;
        }
        throw std::runtime_error("square cover failed to meet the area budget");
    }
    if (fd != 2) throw std::invalid_argument("square covers supported for d in {2,3}");
    auto poly = H.region.polygon();
    if (poly.empty()) return out;
    double area = H.region.measure();
    if (eps >= area) return out;
    double perim = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        perim += norm2(sub(poly[(i + 1) % poly.size()], poly[i]));
    double m = eps / (2.0 * nfaces * std::max(perim, 1e-9));
    double lo0 = poly[0][0], hi0 = lo0, lo1 = poly[0][1], hi1 = lo1;
    for (const auto& v : poly) {
        lo0 = std::min(lo0, v[0]);
        hi0 = std::max(hi0, v[0]);
        lo1 = std::min(lo1, v[1]);
        hi1 = std::max(hi1, v[1]);
    }
    for (int rounds = 0; rounds < 24; ++rounds, l *= 0.5) {
        PlanarPoly inner = H.region.shrunk(m);
        std::vector<SquarePatch> cand;
        double covered = 0.0;
        for (double x = lo0; x + l <= hi0 + 1e-12; x += l)
            for (double y = lo1; y + l <= hi1 + 1e-12; y += l) {
                bool inside = inner.contains({x, y}) && inner.contains({x + l, y}) &&
                              inner.contains({x, y + l}) && inner.contains({x + l, y + l});
                if (!inside) continue;
                PlanarPoly cell;
                cell.fd = 2;
                cell.hs = {{{1, 0}, x + l}, {{-1, 0}, -x}, {{0, 1}, y + l}, {{0, -1}, -y}};
                if (cell.intersect(H.region).measure() < l * l - 1e-9) continue;
                SquarePatch p;
                p.rect.center = world({x + l / 2, y + l / 2});
                p.rect.frame = {H.basis[0], H.basis[1]};
                p.rect.sides = {l, l};
                p.normal = H.normal;
                cand.push_back(p);
                covered += l * l;
            }
        if (area - covered <= eps + 1e-12) return cand;
    }
    throw std::runtime_error("square cover failed to meet the area budget");
}

CylinderSets cylinder_lattice_sets(const CylinderSpec& c, int n) {
    CylinderSets out;
    const std::size_t d = c.v.size();
    ConvexPolytope poly = c.polytope();
    std::vector<int> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        double s_hi = poly.support(unit(d, i, 1.0));
        double s_lo = -poly.support(unit(d, i, -1.0));
        lo[i] = static_cast<int>(std::ceil(s_lo * n - 1e-9));
        hi[i] = static_cast<int>(std::floor(s_hi * n + 1e-9));
        if (lo[i] > hi[i]) return out;
    }
    std::map<std::vector<int>, std::size_t> index;
    std::vector<int> ix = lo;
    while (true) {
        Vec x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(ix[i]) / n;
        if (poly.contains(x, 1e-9)) {
            index.emplace(ix, out.points.size());
            out.points.push_back(ix);
        }
        std::size_t k = 0;
        for (; k < d; ++k) {
            if (++ix[k] <= hi[k]) break;
            ix[k] = lo[k];
        }
        if (k == d) break;
    }
    double cv = dot(c.base.center, c.v);
    double mid = cv + (c.h + c.tmin()) / 2;
    auto crosses_cap = [&](const Vec& x, const Vec& y, double plane) {
        double tx = dot(x, c.v), ty = dot(y, c.v);
        if (std::abs(ty - tx) < 1e-15) return false;
        double s = (plane - tx) / (ty - tx);
        if (s < -1e-9 || s > 1 + 1e-9) return false;
        Vec z = add(x, scale(sub(y, x), s));
        for (std::size_t k = 0; k < c.base.frame.size(); ++k) {
            double u = dot(sub(z, c.base.center), c.base.frame[k]);
            if (std::abs(u) > c.base.sides[k] / 2 + 1e-9) return false;
        }
        return true;
    };
    for (std::size_t pi = 0; pi < out.points.size(); ++pi) {
        Vec x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(out.points[pi][i]) / n;
        bool exits = false;
        for (std::size_t axis = 0; axis < d; ++axis)
            for (int sgn : {-1, 1}) {
                auto nb = out.points[pi];
                nb[axis] += sgn;
                auto it = index.find(nb);
                Vec y(d);
                for (std::size_t i = 0; i < d; ++i) y[i] = static_cast<double>(nb[i]) / n;
                if (it != index.end()) {
                    // Record each undirected in-cylinder edge once.
                    if (sgn > 0) {
                        out.edges.emplace_back(pi, it->second);
                        GridEdge e;
                        e.base = out.points[pi];
                        e.axis = static_cast<int>(axis);
                        out.grid_edges.push_back(e);
                    }
                    continue;
                }
                exits = true;
                if (crosses_cap(x, y, cv + c.h)) out.top.push_back(pi);
                if (crosses_cap(x, y, cv + c.tmin())) out.bottom.push_back(pi);
            }
        if (exits) {
            double t = dot(x, c.v) - mid;
            if (t > 1e-9)
                out.side1.push_back(pi);
            else if (t < -1e-9)
                out.side2.push_back(pi);
        }
    }
    auto dedupe = [](std::vector<std::size_t>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedupe(out.top);
    dedupe(out.bottom);
    return out;
}

}  // namespace fpp
