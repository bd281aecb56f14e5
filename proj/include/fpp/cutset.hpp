#pragma once

// Discrete cutset constructions around a polyhedral set P: nested shell
// families M'(k), the cylinder-covering cutset with wall sets W(k) and glue
// sets M(k), the flow upper bound they induce, cardinality audits against
// the mesh, and calibration of the construction constants.

#include <cstddef>
#include <string>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/cylflow.hpp"
#include "fpp/domain.hpp"
#include "fpp/geometry.hpp"
#include "fpp/lattice.hpp"
#include "fpp/nu.hpp"
#include "fpp/polytope.hpp"

namespace fpp {

// Nested distance shells around P at thickness zeta/n: P(k) = {d(x,P) <=
// k zeta/n}, U(k) = closure(P(k+1)) minus interior(P(k)), and the edge sets
// M'(k) = edges inside U(k) intersected with the enlarged domain.
struct ShellFamily {
    PolyhedralSet P;
    double zeta = 0.0;
    int n = 0;
    double h = 0.0;
    double h0 = 0.0;  // d(boundary of P, source + sink patches)
    std::vector<std::vector<GridEdge>> mprime;  // M'(k), k = 0..count()-1

    std::size_t count() const { return mprime.size(); }

    std::string to_json() const;
    static ShellFamily from_json(const std::string& text);
};

// Euclidean distance from the boundary of P to the source and sink patches.
double boundary_clearance(const PolyhedralSet& P, const ContinuousDomain& dom);

// Builds the shell family; requires zeta >= 2d and h < h0 (throws with the
// computed h0 otherwise, or "mesh too coarse" when no shell fits).
ShellFamily shells(const PolyhedralSet& P, double zeta, int n, double h,
                   const ContinuousDomain& omega_prime);

struct ShellCutCheck {
    std::vector<char> pass;       // is_cutset(M'(k)) per k
    bool all_pass = false;
    bool gamma1_inside = false;   // source-side discrete boundary inside int P
    bool gamma2_outside = false;  // sink-side boundary beyond the last shell
};

// Checks every M'(k) against the source->sink flow problem on lat.
ShellCutCheck family_cut_check(const ShellFamily& sf, const LatticeDomain& lat);

// Smallest mesh in `meshes` where every shell of the family cuts; -1 if none.
int minimal_valid_mesh(const PolyhedralSet& P, double zeta, double h,
                       const ContinuousDomain& omega_prime, const std::vector<int>& meshes);

// Scaffold of the covering construction: one-sided cylinders over a square
// cover of the boundary of P inside the enlarged domain, their eta-shrunken
// cores B', wall edge bands W(k) around the cylinder sides, and glue edge
// sets M(k) = M'(k) minus the cores.
struct CoveringCutset {
    PolyhedralSet P;
    double zeta = 0.0, h = 0.0, eta = 0.0, l = 0.0, eps = 0.0;
    int n = 0;
    double theta0 = 0.0;  // min crossing angle between boundary of P and Gamma'
    std::vector<CylinderSpec> cylinders;  // B_{i,j}, one-sided, outward normals
    std::vector<int> face_of;             // index of the P-face each cylinder covers
    std::vector<ConvexPolytope> core;     // B'_{i,j}
    ShellFamily shellfam;
    std::vector<std::vector<GridEdge>> wall;  // W(k), k = 0..floor(eta n/zeta)-1
    std::vector<std::vector<GridEdge>> glue;  // M(k), same k range as M'(k)

    std::string to_json() const;
    static CoveringCutset from_json(const std::string& text);
};

// Builds the scaffold; throws naming the violated bound when h >= h0, the
// cylinders fail pairwise interior disjointness, the boundary bend is not
// transverse, eta leaves no core, or the mesh cannot resolve a band.
CoveringCutset build_covering(const PolyhedralSet& P, const ContinuousDomain& omega_prime,
                              double l, double eps, double h, double eta, double zeta, int n);

struct ScaffoldConstants {
    double l = 0.0, eps = 0.0, h = 0.0, eta = 0.0, zeta = 0.0;
};

// build_covering after minimally raising h and eta to the band width the
// mesh can resolve and growing l until the cores survive; `used` reports
// the constants actually applied.
CoveringCutset build_covering_resolved(const PolyhedralSet& P,
                                       const ContinuousDomain& omega_prime,
                                       ScaffoldConstants req, int n,
                                       ScaffoldConstants* used = nullptr);

struct UpperBoundResult {
    double phi_n = 0.0;     // max flow source -> sink on the lattice domain
    double cyl_sum = 0.0;   // sum of the per-cylinder bottom->top flows
    double wall_min = 0.0;  // min over k1 of V(W(k1))
    double glue_min = 0.0;  // min over k2 of V(M(k2))
    std::size_t k1 = 0, k2 = 0;
    double bound = 0.0;           // cyl_sum + wall_min + glue_min
    bool holds = false;           // phi_n <= bound
    bool cutset_ok = false;       // combined set cuts source from sink
    std::vector<double> wall_caps, glue_caps, cyl_values;
};

// Evaluates the flow upper bound phi_n <= sum phi_B + min V(W) + min V(M)
// on one capacity field and verifies the combined cutset at the argmin.
UpperBoundResult upper_bound(const CoveringCutset& cc, const LatticeDomain& lat,
                             const CapacityField& field);

// True iff the per-cylinder min-cuts plus W(k1) plus M(k2) cut the source
// from the sink on lat under the given field.
bool combined_cutset_check(const CoveringCutset& cc, const LatticeDomain& lat,
                           const CapacityField& field, std::size_t k1, std::size_t k2);

struct AuditRow {
    int n = 0;
    std::string family;  // "W" or "M"
    std::size_t k = 0;
    std::size_t count = 0;
    double bound = 0.0;  // fitted-constant bound at this scaffold's parameters
};

struct AuditResult {
    std::vector<AuditRow> rows;
    double c2_hat = 0.0;  // card W(k) <= c2_hat * l^{-1} h n^{d-1}
    double c6_hat = 0.0;  // card M(k) <= c6_hat (eps + l^{-1} eta + h^{d-2} + h) n^{d-1}
    double theta0 = 0.0;  // min transversality angle over the scaffolds
    // Glue split per scaffold: edges over a face translate, near a face-pair
    // bend, and the remainder near Gamma'.
    std::vector<std::size_t> m1, m2, m3;

    std::string to_csv() const;  // columns: n,family,k,count,bound
};

// Fits the empirical cardinality constants over a mesh sweep of scaffolds.
AuditResult cardinality_audit(const std::vector<CoveringCutset>& scaffolds);

struct Calibration {
    bool feasible = false;
    std::string report;  // reason when infeasible, summary when feasible
    double eps = 0.0, l = 0.0, h = 0.0, eta = 0.0, zeta = 0.0;
    double rhs = 0.0;     // area * nu_min * E[t] * s / 16
    double nu_min = 0.0, nu_max = 0.0, area = 0.0;
    bool cond_wall = false;  // c2_hat l^{-1} h < rhs
    bool cond_glue = false;  // c6_hat (eps + l^{-1} eta + h^{d-2} + h) < rhs
};

// Picks (eps, l, h, eta, zeta) satisfying the wall and glue capacity
// conditions, in the order eps, then l, then h and eta. h_cap caps h by the
// geometric bounds; n is the mesh the scaffold will be built at (bands must
// resolve: h, eta >= zeta/n).
Calibration calibrate_constants(double s, const PolyhedralSet& P,
                                const ContinuousDomain& omega_prime, const CapacityLaw& law,
                                double c2_hat, double c6_hat, const NuTable& table,
                                double h_cap, int n);

}  // namespace fpp
