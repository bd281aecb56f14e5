#pragma once

// Monte Carlo estimation of the directional flow constant nu, its
// homogeneous extension, property checks, and the continuous min-cut
// functional over polyhedral candidates.

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/cylflow.hpp"
#include "fpp/domain.hpp"

namespace fpp {

struct NuEstimate {
    Vec v;                       // unit direction
    double base_side = 1.0;      // side of the square base A
    double h = 1.0;              // cylinder half-height
    std::vector<int> meshes;
    std::vector<double> means;    // per-mesh mean of tau / (n^{d-1} area)
    std::vector<double> stderrs;  // per-mesh standard error
    std::vector<std::size_t> counts;
    double value = 0.0;     // largest-mesh mean (no extrapolation model)
    double stderr_value = 0.0;
};

NuEstimate estimate_nu(const Vec& v, double base_side, double h, const std::vector<int>& meshes,
                       std::size_t samples_per_mesh, const CapacityLaw& law,
                       std::uint64_t seed);

// Mass the law puts on {0}.
double mass_at_zero(const CapacityLaw& law);

// True iff the law's mass at zero meets the percolation threshold criterion
// that forces nu to vanish identically. d in {2,3}; pc_override for other d.
bool nu_zero_check(const CapacityLaw& law, std::size_t d, double pc_override = -1.0);

struct NuTable {
    std::string law_json;
    std::uint64_t seed = 0;
    std::vector<NuEstimate> entries;

    // Matches v or -v within 1e-9; null when absent.
    const NuEstimate* find(const Vec& v) const;
    double nu(const Vec& v) const;  // throws listing the missing direction

    std::string to_json() const;
    static NuTable from_json(const std::string& text);
    std::string to_csv() const;  // per-mesh series
};

// |w| * nu(w/|w|); 0 at 0.
double nu_homogeneous(const NuTable& table, const Vec& w);

struct TriangleCheck {
    bool pass = false;
    double lhs = 0.0, rhs = 0.0;
    double se = 0.0;      // combined standard error
    double margin = 0.0;  // rhs + 3 se - lhs
};

// |AB| nu(n_AB) <= |AC| nu(n_AC) + |BC| nu(n_BC) with a 3-sigma margin
// (2-D points; n_XY is the unit normal of segment XY).
TriangleCheck weak_triangle_check(const Vec& A, const Vec& B, const Vec& C,
                                  const NuTable& table);

// Integral of nu(face normal) over the boundary of P inside the region.
double capacity_integral(const PolyhedralSet& P, const std::vector<ConvexPolytope>& region_add,
                         const std::vector<ConvexPolytope>& region_sub, const NuTable& table);

struct CutCandidate {
    PolyhedralSet P;
    double capacity = 0.0;
    bool polyhedral = true;
    bool transverse_ok = false;
    bool source_inside = false;
    bool sink_outside = false;
    Vec witness;  // offending point when a flag is false

    bool admissible() const {
        return polyhedral && transverse_ok && source_inside && sink_outside;
    }
};

struct PhiTildeResult {
    double value = 0.0;
    std::size_t argmin = 0;  // index into candidates
    std::vector<CutCandidate> candidates;
};

// Minimum of capacity_integral over the admissible members of the family;
// an upper bound on the true infimum.
PhiTildeResult phi_tilde(const ContinuousDomain& dom, const std::vector<PolyhedralSet>& family,
                         const NuTable& table);

}  // namespace fpp
