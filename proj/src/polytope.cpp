#include "fpp/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpp/linprog.hpp"

namespace fpp {

namespace {

constexpr double kTol = 1e-9;

// Solve M x = rhs (square) by Gaussian elimination; false if near-singular.
bool solve_square(std::vector<Vec> M, Vec rhs, Vec& out) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-10) return false;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = M[r][col] / M[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / M[i][i];
    return true;
}

void dedupe_points(std::vector<Vec>& pts, double tol = 1e-7) {
    std::vector<Vec> out;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : out)
            if (norminf(sub(p, q)) < tol) { dup = true; break; }
        if (!dup) out.push_back(p);
    }
    pts = std::move(out);
}

double polygon_area(const std::vector<Vec>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec& a = v[i];
        const Vec& b = v[(i + 1) % v.size()];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return std::fabs(s) / 2.0;
}

// [ymin, ymax] of an ordered convex polygon at abscissa x, if it meets it.
bool cross_section(const std::vector<Vec>& poly, double x, double& lo, double& hi) {
    bool found = false;
    lo = 0.0;
    hi = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& p = poly[i];
        const Vec& q = poly[(i + 1) % n];
        if ((p[0] - x) * (q[0] - x) > 0.0) continue;
        double y;
        if (std::fabs(q[0] - p[0]) < 1e-14) {
            for (double yy : {p[1], q[1]}) {
                if (!found) { lo = hi = yy; found = true; }
                lo = std::min(lo, yy);
                hi = std::max(hi, yy);
            }
            continue;
        }
        double t = (x - p[0]) / (q[0] - p[0]);
        if (t < -1e-12 || t > 1.0 + 1e-12) continue;
        y = p[1] + t * (q[1] - p[1]);
        if (!found) { lo = hi = y; found = true; }
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    return found;
}

double interval_union_length(std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    double total = 0.0, cur_lo = 0.0, cur_hi = -1.0;
    bool open = false;
    for (auto& [lo, hi] : iv) {
        if (hi <= lo) continue;
        if (!open || lo > cur_hi) {
            if (open) total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
            open = true;
        } else {
            cur_hi = std::max(cur_hi, hi);
        }
    }
    if (open) total += cur_hi - cur_lo;
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// PlanarPoly

bool PlanarPoly::contains(const Vec& u, double tol) const {
    for (const auto& h : hs)
        if (dot(h.a, u) > h.b + tol) return false;
    return true;
}

std::optional<std::pair<double, double>> PlanarPoly::interval() const {
    double lo = -1e30, hi = 1e30;
    for (const auto& h : hs) {
        double a = h.a[0];
        if (a > kTol)
            hi = std::min(hi, h.b / a);
        else if (a < -kTol)
            lo = std::max(lo, h.b / a);
        else if (h.b < -1e-12)
            return std::nullopt;
    }
    if (lo > hi + kTol) return std::nullopt;
    if (lo < -1e29 || hi > 1e29)
        throw std::runtime_error("unbounded planar interval");
    return std::make_pair(lo, std::max(lo, hi));
}

std::vector<Vec> PlanarPoly::polygon() const {
    if (fd != 2) throw std::logic_error("polygon() requires fd == 2");
    for (const auto& h : hs)
        if (norminf(h.a) < kTol && h.b < -1e-12) return {};
    std::vector<Vec> verts;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
            Vec x;
            if (!solve_square({hs[i].a, hs[j].a}, {hs[i].b, hs[j].b}, x)) continue;
            bool ok = true;
            for (const auto& h : hs)
                if (dot(h.a, x) > h.b + 1e-7) { ok = false; break; }
            if (ok) verts.push_back(x);
        }
    }
    dedupe_points(verts);
    if (verts.size() < 3) return verts;
    Vec c(2, 0.0);
    for (const auto& v : verts) { c[0] += v[0]; c[1] += v[1]; }
    c[0] /= verts.size();
    c[1] /= verts.size();
    std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
    });
    return verts;
}

double PlanarPoly::measure() const {
    if (fd == 1) {
        auto iv = interval();
        return iv ? iv->second - iv->first : 0.0;
    }
    auto poly = polygon();
    return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

PlanarPoly PlanarPoly::intersect(const PlanarPoly& other) const {
    PlanarPoly out = *this;
    out.hs.insert(out.hs.end(), other.hs.begin(), other.hs.end());
    return out;
}

PlanarPoly PlanarPoly::shrunk(double eps) const {
    PlanarPoly out = *this;
    for (auto& h : out.hs) h.b -= eps * norm2(h.a);
    return out;
}

double union_measure(const std::vector<PlanarPoly>& pieces, int fd) {
    if (fd == 1) {
        std::vector<std::pair<double, double>> iv;
        for (const auto& p : pieces)
            if (auto i = p.interval()) iv.push_back(*i);
        return interval_union_length(std::move(iv));
    }
    if (fd != 2) throw std::logic_error("union_measure supports fd in {1,2}");
    std::vector<std::vector<Vec>> polys;
    for (const auto& p : pieces) {
        auto poly = p.polygon();
        if (poly.size() >= 3 && polygon_area(poly) > 1e-14) polys.push_back(std::move(poly));
    }
    if (polys.empty()) return 0.0;
    // Slab sweep: breakpoints of the union length are vertex abscissae and
    // the abscissae of edge-line crossings; between them it is linear.
    std::vector<double> events;
    struct Edge { Vec p, q; };
    std::vector<Edge> edges;
    for (const auto& poly : polys) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            events.push_back(poly[i][0]);
            edges.push_back({poly[i], poly[(i + 1) % poly.size()]});
        }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            double dx1 = edges[i].q[0] - edges[i].p[0], dy1 = edges[i].q[1] - edges[i].p[1];
            double dx2 = edges[j].q[0] - edges[j].p[0], dy2 = edges[j].q[1] - edges[j].p[1];
            double det = dx1 * dy2 - dy1 * dx2;
            if (std::fabs(det) < 1e-13) continue;
            double bx = edges[j].p[0] - edges[i].p[0], by = edges[j].p[1] - edges[i].p[1];
            double t = (bx * dy2 - by * dx2) / det;
            events.push_back(edges[i].p[0] + t * dx1);
        }
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(),
                             [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
                 events.end());
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < events.size(); ++k) {
        double x0 = events[k], x1 = events[k + 1];
        if (x1 - x0 < 1e-13) continue;
        double xm = 0.5 * (x0 + x1);
        std::vector<std::pair<double, double>> iv;
        for (const auto& poly : polys) {
            double lo, hi;
            if (cross_section(poly, xm, lo, hi) && hi > lo) iv.emplace_back(lo, hi);
        }
        area += (x1 - x0) * interval_union_length(std::move(iv));
    }
    return area;
}

// ---------------------------------------------------------------------------
// ConvexPolytope

ConvexPolytope::ConvexPolytope(std::size_t dim, std::vector<Halfspace> hs)
    : dim_(dim), hs_(std::move(hs)) {
    for (const auto& h : hs_)
        if (h.a.size() != dim_) throw std::invalid_argument("half-space dimension mismatch");
}

ConvexPolytope ConvexPolytope::box(const Vec& lo, const Vec& hi) {
    std::size_t d = lo.size();
    std::vector<Halfspace> hs;
    for (std::size_t i = 0; i < d; ++i) {
        hs.push_back({unit(d, i, 1.0), hi[i]});
        hs.push_back({unit(d, i, -1.0), -lo[i]});
    }
    return ConvexPolytope(d, std::move(hs));
}

ConvexPolytope ConvexPolytope::cube(const Vec& center, const std::vector<Vec>& basis,
                                    double side) {
    std::size_t d = center.size();
    std::vector<Halfspace> hs;
    for (const auto& e : basis) {
        double c = dot(e, center);
        hs.push_back({e, c + side / 2.0});
        hs.push_back({scale(e, -1.0), -(c - side / 2.0)});
    }
    return ConvexPolytope(d, std::move(hs));
}

bool ConvexPolytope::contains(const Vec& x, double tol) const {
    for (const auto& h : hs_)
        if (dot(h.a, x) > h.b + tol * std::max(1.0, norm2(h.a))) return false;
    return true;
}

bool ConvexPolytope::strictly_contains(const Vec& x, double tol) const {
    for (const auto& h : hs_)
        if (dot(h.a, x) > h.b - tol * std::max(1.0, norm2(h.a))) return false;
    return true;
}

bool ConvexPolytope::empty() const {
    std::vector<Vec> A;
    std::vector<double> b;
    for (const auto& h : hs_) { A.push_back(h.a); b.push_back(h.b); }
    return !lp_feasible(A, b, dim_);
}

Vec ConvexPolytope::project(const Vec& x) const {
    if (contains(x, 0.0)) return x;
    Vec y = x;
    std::vector<Vec> corr(hs_.size(), Vec(dim_, 0.0));
    for (int pass = 0; pass < 5000; ++pass) {
        double moved = 0.0;
        for (std::size_t i = 0; i < hs_.size(); ++i) {
            Vec z = add(y, corr[i]);
            double viol = dot(hs_[i].a, z) - hs_[i].b;
            Vec ynew = viol <= 0.0 ? z : sub(z, scale(hs_[i].a, viol / dot(hs_[i].a, hs_[i].a)));
            corr[i] = sub(z, ynew);
            moved = std::max(moved, norminf(sub(ynew, y)));
            y = ynew;
        }
        if (moved < 1e-13) break;
    }
    return y;
}

double ConvexPolytope::d2(const Vec& x) const {
    if (contains(x)) return 0.0;
    return norm2(sub(x, project(x)));
}

double ConvexPolytope::dinf(const Vec& x) const {
    if (contains(x)) return 0.0;
    // min t : A y <= b, |y_i - x_i| <= t. Variables (y, t).
    std::vector<Vec> A;
    std::vector<double> b;
    for (const auto& h : hs_) {
        Vec row = h.a;
        row.push_back(0.0);
        A.push_back(row);
        b.push_back(h.b);
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        Vec row(dim_ + 1, 0.0);
        row[i] = 1.0;
        row[dim_] = -1.0;
        A.push_back(row);
        b.push_back(x[i]);
        row[i] = -1.0;
        A.push_back(row);
        b.push_back(-x[i]);
    }
    Vec c(dim_ + 1, 0.0);
    c[dim_] = 1.0;
    LpResult r = lp_minimize(A, b, c);
    if (r.status != LpStatus::Optimal)
        throw std::runtime_error("dinf: infeasible polytope");
    return std::max(0.0, r.objective);
}

double ConvexPolytope::support(const Vec& dir) const {
    std::vector<Vec> A;
    std::vector<double> b;
    for (const auto& h : hs_) { A.push_back(h.a); b.push_back(h.b); }
    LpResult r = lp_minimize(A, b, scale(dir, -1.0));
    if (r.status != LpStatus::Optimal) throw std::runtime_error("support: bad polytope");
    return -r.objective;
}

const std::vector<Vec>& ConvexPolytope::vertices() const {
    if (verts_done_) return verts_;
    verts_done_ = true;
    const std::size_t d = dim_, m = hs_.size();
    std::vector<std::size_t> idx(d);
    std::vector<Vec> found;
    // All d-subsets of constraints.
    std::vector<std::size_t> comb(d);
    for (std::size_t i = 0; i < d; ++i) comb[i] = i;
    if (m >= d) {
        for (;;) {
            std::vector<Vec> M;
            Vec rhs;
            for (std::size_t i : comb) { M.push_back(hs_[i].a); rhs.push_back(hs_[i].b); }
            Vec x;
            if (solve_square(M, rhs, x) && contains(x, 1e-7)) found.push_back(x);
            // next combination
            std::size_t i = d;
            while (i > 0) {
                --i;
                if (comb[i] != i + m - d) { ++comb[i]; for (std::size_t j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1; break; }
                if (i == 0) { i = m; break; }
            }
            if (i == m) break;
        }
    }
    dedupe_points(found);
    verts_ = std::move(found);
    return verts_;
}

ConvexPolytope ConvexPolytope::intersect(const ConvexPolytope& other) const {
    auto hs = hs_;
    hs.insert(hs.end(), other.hs_.begin(), other.hs_.end());
    return ConvexPolytope(dim_, std::move(hs));
}

ConvexPolytope ConvexPolytope::inflated(double r) const {
    auto hs = hs_;
    for (auto& h : hs) h.b += r * norm2(h.a);
    return ConvexPolytope(dim_, std::move(hs));
}

PlanarPoly ConvexPolytope::slice(const Vec& origin, const std::vector<Vec>& basis) const {
    PlanarPoly out;
    out.fd = static_cast<int>(basis.size());
    for (const auto& h : hs_) {
        Halfspace g;
        g.a.resize(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) g.a[k] = dot(h.a, basis[k]);
        g.b = h.b - dot(h.a, origin);
        if (norminf(g.a) < 1e-11 && g.b >= -1e-11) continue;  // trivially satisfied
        out.hs.push_back(std::move(g));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Faces

std::vector<Vec> plane_basis(const Vec& normal) {
    const std::size_t d = normal.size();
    Vec n = normalized(normal);
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < d && basis.size() + 1 < d; ++i) {
        Vec v = unit(d, i);
        v = sub(v, scale(n, dot(v, n)));
        for (const auto& b : basis) v = sub(v, scale(b, dot(v, b)));
        double len = norm2(v);
        if (len > 1e-8) basis.push_back(scale(v, 1.0 / len));
    }
    if (basis.size() + 1 != d) throw std::runtime_error("plane_basis failed");
    return basis;
}

std::vector<RawFace> polytope_faces(const ConvexPolytope& p) {
    const std::size_t d = p.dim();
    if (d < 2 || d > 3)
        throw std::runtime_error("face enumeration supported for d in {2,3}");
    const auto& verts = p.vertices();
    // Affine rank check: degenerate polytopes have no well-defined faces.
    if (verts.size() < d + 1) throw std::runtime_error("degenerate polytope");
    {
        std::vector<Vec> diffs;
        for (std::size_t i = 1; i < verts.size(); ++i) diffs.push_back(sub(verts[i], verts[0]));
        // Gram-Schmidt rank
        std::vector<Vec> ortho;
        for (auto v : diffs) {
            for (const auto& b : ortho) v = sub(v, scale(b, dot(v, b)));
            double len = norm2(v);
            if (len > 1e-8) ortho.push_back(scale(v, 1.0 / len));
        }
        if (ortho.size() < d) throw std::runtime_error("degenerate polytope");
    }
    std::vector<RawFace> faces;
    std::vector<std::pair<Vec, double>> seen;  // deduped (unit normal, offset)
    for (const auto& h : p.halfspaces()) {
        double len = norm2(h.a);
        if (len < 1e-12) continue;
        Vec n = scale(h.a, 1.0 / len);
        double c = h.b / len;
        bool dup = false;
        for (const auto& [sn, sc] : seen)
            if (norminf(sub(sn, n)) < 1e-9 && std::fabs(sc - c) < 1e-9) { dup = true; break; }
        if (dup) continue;
        seen.emplace_back(n, c);
        RawFace f;
        f.normal = n;
        f.offset = c;
        // Point on the plane: project the vertex centroid.
        Vec centroid(d, 0.0);
        for (const auto& v : verts) centroid = add(centroid, v);
        centroid = scale(centroid, 1.0 / verts.size());
        f.origin = add(centroid, scale(n, c - dot(n, centroid)));
        f.basis = plane_basis(n);
        f.poly = p.slice(f.origin, f.basis);
        f.area = f.poly.measure();
        if (f.area > 1e-12) faces.push_back(std::move(f));
    }
    return faces;
}

// ---------------------------------------------------------------------------
// PolyhedralSet

Vec BoundaryFace::to_world(const Vec& u) const {
    Vec x = origin;
    for (std::size_t k = 0; k < basis.size(); ++k) x = add(x, scale(basis[k], u[k]));
    return x;
}

Vec BoundaryFace::to_plane(const Vec& x) const {
    Vec u(basis.size());
    Vec rel = sub(x, origin);
    for (std::size_t k = 0; k < basis.size(); ++k) u[k] = dot(rel, basis[k]);
    return u;
}

PolyhedralSet::PolyhedralSet(std::vector<ConvexPolytope> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_)
        if (p.dim() != parts_[0].dim())
            throw std::invalid_argument("mixed dimensions in polyhedral set");
}

bool PolyhedralSet::contains(const Vec& x, double tol) const {
    for (const auto& p : parts_)
        if (p.contains(x, tol)) return true;
    return false;
}

bool PolyhedralSet::strictly_contains(const Vec& x, double tol) const {
    for (const auto& p : parts_)
        if (p.strictly_contains(x, tol)) return true;
    return false;
}

double PolyhedralSet::d2(const Vec& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : parts_) {
        best = std::min(best, p.d2(x));
        if (best == 0.0) return 0.0;
    }
    return best;
}

const std::vector<BoundaryFace>& PolyhedralSet::faces() const {
    if (faces_done_) return faces_;
    faces_done_ = true;
    const double kOutside = 1e-7;  // probe offset outside the face plane
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        for (auto& rf : polytope_faces(parts_[i])) {
            BoundaryFace bf;
            bf.part = i;
            bf.normal = rf.normal;
            bf.offset = rf.offset;
            bf.origin = rf.origin;
            bf.basis = rf.basis;
            bf.face = rf.poly;
            for (std::size_t j = 0; j < parts_.size(); ++j) {
                if (j == i) continue;
                // Material just outside the plane makes the face interior there.
                Vec off = add(rf.origin, scale(rf.normal, kOutside));
                PlanarPoly outside = parts_[j].slice(off, rf.basis);
                bf.cover.push_back(bf.face.intersect(outside));
                if (j < i) {
                    // Coplanar same-normal faces would be double counted;
                    // the earlier part keeps the overlap.
                    for (const auto& h : parts_[j].halfspaces()) {
                        double len = norm2(h.a);
                        if (len < 1e-12) continue;
                        if (norminf(sub(scale(h.a, 1.0 / len), rf.normal)) < 1e-9 &&
                            std::fabs(h.b / len - rf.offset) < 1e-9) {
                            bf.cover.push_back(
                                bf.face.intersect(parts_[j].slice(rf.origin, rf.basis)));
                            break;
                        }
                    }
                }
            }
            double covered = union_measure(bf.cover, bf.face.fd);
            bf.area = std::max(0.0, rf.area - covered);
            if (bf.area > 1e-12) faces_.push_back(std::move(bf));
        }
    }
    return faces_;
}

double PolyhedralSet::surface_area() const {
    double s = 0.0;
    for (const auto& f : faces()) s += f.area;
    return s;
}

double polytope_distance(const ConvexPolytope& p, const ConvexPolytope& q, Vec* wp, Vec* wq) {
    Vec x = p.vertices().empty() ? Vec(p.dim(), 0.0) : p.vertices()[0];
    Vec y = x;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
        y = q.project(x);
        x = p.project(y);
        double d = norm2(sub(x, y));
        if (prev - d < 1e-12) break;
        prev = d;
    }
    if (wp) *wp = x;
    if (wq) *wq = y;
    return norm2(sub(x, y));
}

}  // namespace fpp
