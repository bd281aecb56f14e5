#pragma once

// The continuous problem statement: a bounded polytopal domain with tagged
// source and sink boundary patches.

#include <string>
#include <vector>

#include "fpp/polytope.hpp"
#include "fpp/vec.hpp"

namespace fpp {

struct ContinuousDomain {
    std::size_t d = 2;
    PolyhedralSet body;                     // closure of Omega, union of convex polytopes
    std::vector<ConvexPolytope> source;     // Gamma^1 pieces (flat polytopes on facets)
    std::vector<ConvexPolytope> sink;       // Gamma^2 pieces

    // Euclidean d(Gamma^1, Gamma^2); cached on first call.
    double separation() const;

    // Bounding box of the body, as (lo, hi).
    std::pair<Vec, Vec> bounding_box() const;

    // Throws std::invalid_argument with a description on any violated
    // invariant: emptiness, unboundedness, patch overlap, disconnectedness
    // (connectivity checked on a fine rasterization).
    void validate() const;

    // The (0,1)^d box with source = {x_1 = 0} facet and sink = {x_1 = 1}.
    static ContinuousDomain unit_box(std::size_t d);

    std::string to_json() const;
    static ContinuousDomain from_json(const std::string& text);

  private:
    mutable double sep_ = -1.0;
};

}  // namespace fpp
