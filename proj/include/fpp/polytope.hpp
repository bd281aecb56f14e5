#pragma once

// Convex polytopes as half-space systems, with the small amount of exact
// computational geometry this project needs: vertex/face enumeration for
// d in {2,3}, point distances (L2 and Linf), plane slices, and exact
// (d-1)-dimensional measures of unions of convex pieces in a face plane.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fpp/vec.hpp"

namespace fpp {

struct Halfspace {
    Vec a;     // outward coefficient vector, a.x <= b
    double b = 0.0;
};

// A convex polytope in a (d-1)-dimensional face plane, expressed in the
// plane's own coordinates. fd = 1 gives an interval, fd = 2 a polygon.
struct PlanarPoly {
    int fd = 1;
    std::vector<Halfspace> hs;

    bool contains(const Vec& u, double tol = 1e-9) const;
    // Interval [lo, hi] for fd = 1; empty optional when infeasible.
    std::optional<std::pair<double, double>> interval() const;
    // Hull-ordered vertex list for fd = 2 (empty when infeasible/degenerate).
    std::vector<Vec> polygon() const;
    double measure() const;
    PlanarPoly intersect(const PlanarPoly& other) const;
    // Shrinks every half-space by eps (towards the interior).
    PlanarPoly shrunk(double eps) const;
};

// Exact measure of a union of convex pieces, all living in the same plane
// coordinates. fd = 1 unions intervals; fd = 2 sweeps slabs between the
// x-events of the polygon arrangement (the union length is linear on each
// slab, so the midpoint rule is exact).
double union_measure(const std::vector<PlanarPoly>& pieces, int fd);

class ConvexPolytope {
  public:
    ConvexPolytope() = default;
    ConvexPolytope(std::size_t dim, std::vector<Halfspace> hs);

    static ConvexPolytope box(const Vec& lo, const Vec& hi);
    // Cube of side `side` centered at `center` with edges along `basis`.
    static ConvexPolytope cube(const Vec& center, const std::vector<Vec>& basis, double side);

    std::size_t dim() const { return dim_; }
    const std::vector<Halfspace>& halfspaces() const { return hs_; }

    bool contains(const Vec& x, double tol = 1e-9) const;
    bool strictly_contains(const Vec& x, double tol = 1e-9) const;
    bool empty() const;

    // Euclidean projection onto the polytope (Dykstra's algorithm).
    Vec project(const Vec& x) const;
    double d2(const Vec& x) const;
    double dinf(const Vec& x) const;  // via LP
    double support(const Vec& dir) const;

    const std::vector<Vec>& vertices() const;  // cached, d <= 4

    ConvexPolytope intersect(const ConvexPolytope& other) const;
    ConvexPolytope inflated(double r) const;  // shift every half-space out by r (L2)

    // Slice by the plane n.x = c, in plane coordinates u -> origin + B u.
    PlanarPoly slice(const Vec& origin, const std::vector<Vec>& basis) const;

  private:
    std::size_t dim_ = 0;
    std::vector<Halfspace> hs_;
    mutable std::vector<Vec> verts_;
    mutable bool verts_done_ = false;
};

// One maximal flat boundary piece of a union of convex polytopes.
struct BoundaryFace {
    std::size_t part = 0;
    Vec normal;          // unit, exterior to the part (hence to the union)
    double offset = 0.0; // normal.x = offset on the face plane
    Vec origin;          // point on the plane
    std::vector<Vec> basis;   // orthonormal in-plane directions, d-1 of them
    PlanarPoly face;          // the part's face, in plane coordinates
    std::vector<PlanarPoly> cover;  // in-plane pieces covered by other parts
    double area = 0.0;        // measure(face) - measure(face ∩ ∪cover)

    Vec to_world(const Vec& u) const;
    Vec to_plane(const Vec& x) const;
};

class PolyhedralSet {
  public:
    PolyhedralSet() = default;
    explicit PolyhedralSet(std::vector<ConvexPolytope> parts);

    const std::vector<ConvexPolytope>& parts() const { return parts_; }
    std::size_t dim() const { return parts_.empty() ? 0 : parts_[0].dim(); }
    bool contains(const Vec& x, double tol = 1e-9) const;
    bool strictly_contains(const Vec& x, double tol = 1e-9) const;
    double d2(const Vec& x) const;  // 0 inside

    // Maximal boundary faces of the union, with trimmed areas.
    // Throws on degenerate (lower-dimensional) parts.
    const std::vector<BoundaryFace>& faces() const;
    double surface_area() const;

  private:
    std::vector<ConvexPolytope> parts_;
    mutable std::vector<BoundaryFace> faces_;
    mutable bool faces_done_ = false;
};

// Orthonormal basis of the orthogonal complement of `normal` (deterministic).
std::vector<Vec> plane_basis(const Vec& normal);

// L2 distance between two convex polytopes (alternating projections).
double polytope_distance(const ConvexPolytope& p, const ConvexPolytope& q, Vec* wp = nullptr,
                         Vec* wq = nullptr);

// Raw faces of a single bounded polytope: (plane normal, offset, ordered
// vertices, area). Used by PolyhedralSet::faces and directly in tests.
struct RawFace {
    Vec normal;
    double offset;
    Vec origin;
    std::vector<Vec> basis;
    PlanarPoly poly;
    double area;
};
std::vector<RawFace> polytope_faces(const ConvexPolytope& p);

}  // namespace fpp
