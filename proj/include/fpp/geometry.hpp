#pragma once

// Surface-level constructions: transversality checks, clipped surface
// measure, tilted cube coverings of boundary patches, the enlarged domain,
// hypersquare coverings of faces, and cylinder lattice sets.

#include <string>
#include <vector>

#include "fpp/domain.hpp"
#include "fpp/lattice.hpp"
#include "fpp/polytope.hpp"
#include "fpp/vec.hpp"

namespace fpp {

// A (d-1)-dimensional rectangle: center, orthonormal in-plane frame, full
// side lengths.
struct HyperRect {
    Vec center;
    std::vector<Vec> frame;  // d-1 orthonormal vectors
    Vec sides;               // full lengths, one per frame vector

    double area() const;
};

struct CylinderSpec {
    HyperRect base;
    Vec v;          // unit normal to the base plane
    double h = 0.0;
    bool one_sided = false;  // base at the bottom (t in [0,h]) vs t in [-h,h]

    double tmin() const { return one_sided ? 0.0 : -h; }
    ConvexPolytope polytope() const;  // the solid cylinder (a box)
};

struct TransverseCheck {
    bool ok = true;
    double min_angle = 0.0;  // radians, over intersecting face pairs
    Vec witness;             // a point of an offending (collinear) contact
    std::string detail;
};

// Face-by-face wrapper over PolyhedralSet::faces.
const std::vector<BoundaryFace>& faces(const PolyhedralSet& P);

// True iff every intersecting pair of boundary faces of S and G has
// non-collinear normals; reports the minimal crossing angle.
TransverseCheck transverse(const PolyhedralSet& S, const PolyhedralSet& G);

// Measure of one boundary face restricted to region (union of add) minus
// (union of sub), cover pieces excluded; exact.
double face_clipped_area(const BoundaryFace& f, const std::vector<ConvexPolytope>& add,
                         const std::vector<ConvexPolytope>& sub = {});

// H^{d-1}(boundary of P restricted to region (union of add) minus (union of
// sub)); exact, face by face.
double clip_surface_measure(const PolyhedralSet& P, const std::vector<ConvexPolytope>& add,
                            const std::vector<ConvexPolytope>& sub = {});

struct CoverResult {
    bool ok = false;
    std::string message;
    PolyhedralSet cover;
    double side = 0.0;     // common cube side
    double basis_gap = 0.0;  // min |angle| between cube normals and facet normals
};

// Covers the patches K (flat polytopes on facets of dom's boundary) by
// finitely many cubes of side r, tilted so every cube face is transverse to
// the boundary (and to extra_normals if given). spacing <= r controls the
// center grid; 0 means r. Fails (ok = false) if the cubes reach the sink.
CoverResult cube_cover(const std::vector<ConvexPolytope>& K, const ContinuousDomain& dom,
                       double r, double spacing = 0.0,
                       const std::vector<Vec>& extra_normals = {});

struct EnlargedDomain {
    ContinuousDomain omega_prime;
    PolyhedralSet added;  // the cubes
    double delta1 = 0.0;  // every point within delta1 of Omega lies in Omega'
};

// Omega' = Omega plus a cube covering of its whole boundary, transverse to
// both the boundary and the faces of P, contained in the delta0-neighborhood.
EnlargedDomain enlarge_domain(const ContinuousDomain& dom, const PolyhedralSet& P, double delta0);

// A face of P clipped to a region, in its own plane coordinates.
struct FaceRef {
    Vec origin;
    std::vector<Vec> basis;
    Vec normal;
    PlanarPoly region;
};

struct SquarePatch {
    HyperRect rect;
    Vec normal;
};

// Disjoint hypersquares of side <= l inside H, leaving uncovered measure
// <= eps and keeping a positive margin from the relative boundary; l is
// halved until the budget holds. nfaces scales the margin budget when the
// same eps is shared across several faces.
std::vector<SquarePatch> square_cover(const FaceRef& H, double l, double eps,
                                      std::size_t nfaces = 1);

struct CylinderSets {
    std::vector<std::vector<int>> points;  // integer lattice coords (point = coord/n)
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<GridEdge> grid_edges;
    std::vector<std::size_t> top, bottom;   // T(A,h), B(A,h)
    std::vector<std::size_t> side1, side2;  // A_1^h, A_2^h (tau variant)
};

CylinderSets cylinder_lattice_sets(const CylinderSpec& c, int n);

}  // namespace fpp
