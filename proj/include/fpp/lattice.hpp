#pragma once

// The rescaled lattice Z^d/n restricted to a box around the domain, with
// the discrete sets Omega_n, Gamma_n, Gamma^1_n, Gamma^2_n.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fpp/domain.hpp"
#include "fpp/rng.hpp"
#include "fpp/vec.hpp"

namespace fpp {

// Edge from base/n to (base + e_axis)/n; base is the lexicographically
// smaller endpoint. This canonical form keys the capacity RNG.
struct GridEdge {
    std::vector<int> base;
    int axis = 0;

    bool operator==(const GridEdge& o) const { return axis == o.axis && base == o.base; }
    bool operator<(const GridEdge& o) const {
        return base != o.base ? base < o.base : axis < o.axis;
    }
    std::uint64_t key() const {
        std::uint64_t k = mix64(0x9d2c5680u + static_cast<std::uint64_t>(axis));
        for (int c : base) k = mix64(k ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + (1LL << 32)));
        return k;
    }
};

struct EmptyDiscretization : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decidable point-set predicate on R^d, with an exact or conservative test
// for "the open segment (a,b) lies inside the region".
class Region {
  public:
    virtual ~Region() = default;
    virtual bool contains(const Vec& x) const = 0;
    // Default: endpoints are limits of the open segment, interior sampled.
    virtual bool segment_inside(const Vec& a, const Vec& b) const;
};

class EverythingRegion : public Region {
  public:
    bool contains(const Vec&) const override { return true; }
    bool segment_inside(const Vec&, const Vec&) const override { return true; }
};

// Open or closed convex polytope; segment test is exact by convexity.
class ConvexRegion : public Region {
  public:
    ConvexRegion(ConvexPolytope p, bool open) : p_(std::move(p)), open_(open) {}
    bool contains(const Vec& x) const override {
        return open_ ? p_.strictly_contains(x) : p_.contains(x);
    }
    bool segment_inside(const Vec& a, const Vec& b) const override;

  private:
    ConvexPolytope p_;
    bool open_;
};

// Open union of convex polytopes (pointwise exact, segment test sampled).
class UnionRegion : public Region {
  public:
    explicit UnionRegion(PolyhedralSet s) : s_(std::move(s)) {}
    bool contains(const Vec& x) const override { return s_.strictly_contains(x); }

  private:
    PolyhedralSet s_;
};

class LatticeDomain {
  public:
    // Lattice points of Z^d/n inside [box_lo, box_hi]; the discrete sets are
    // filled in by discretize().
    LatticeDomain(int n, const Vec& box_lo, const Vec& box_hi);

    int n() const { return n_; }
    std::size_t d() const { return lo_.size(); }
    std::size_t vertex_count() const { return count_; }

    Vec point(std::size_t idx) const;
    std::vector<int> coords(std::size_t idx) const;
    // Index of the lattice point with the given integer coordinates, or
    // npos when outside the box.
    std::size_t index_of(const std::vector<int>& c) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool in_omega(std::size_t idx) const { return omega_[idx]; }
    bool in_gamma(std::size_t idx) const { return gamma_[idx]; }
    bool in_gamma1(std::size_t idx) const { return gamma1_[idx]; }
    bool in_gamma2(std::size_t idx) const { return gamma2_[idx]; }
    // Boundary vertices within 1/n of both patches get assigned to neither
    // (the definition is literal); they are flagged here for diagnostics.
    bool ambiguous_boundary(std::size_t idx) const { return ambiguous_[idx]; }

    std::vector<std::size_t> omega_vertices() const;
    std::size_t omega_count() const;

    // All lattice edges of the box, in canonical (lexicographic) order.
    void for_each_edge(const std::function<void(const GridEdge&, std::size_t, std::size_t)>& f) const;
    // Endpoint indices of an edge; npos if outside the box.
    std::pair<std::size_t, std::size_t> endpoints(const GridEdge& e) const;
    Vec endpoint_point(const GridEdge& e, int which) const;

    // Every edge of the Omega_n graph (or of the whole box when omega_only
    // is false) whose open segment lies in `region`.
    std::vector<GridEdge> edges_in(const Region& region, bool omega_only = true) const;
    // Edges with both endpoints in Omega_n (the graph of Omega_n).
    std::vector<GridEdge> omega_edges() const;

    friend LatticeDomain discretize(const ContinuousDomain& dom, int n, double margin);

  private:
    int n_;
    std::vector<int> lo_, hi_;   // inclusive integer coordinate range
    std::vector<std::size_t> stride_;
    std::size_t count_ = 0;
    std::vector<char> omega_, gamma_, gamma1_, gamma2_, ambiguous_;
};

// The discrete version of (Omega, Gamma, Gamma^1, Gamma^2) at mesh 1/n.
// `margin` widens the lattice box beyond Omega (>= 2/n is enforced) so that
// Gamma_n's outside neighbours and enlarged domains fit.
LatticeDomain discretize(const ContinuousDomain& dom, int n, double margin = 0.25);

}  // namespace fpp
