#pragma once

// Cylinder flow variables: side-to-side flow tau and bottom-to-top flow phi
// on the lattice restriction of a cylinder.

#include "fpp/capacity.hpp"
#include "fpp/flow.hpp"
#include "fpp/geometry.hpp"

namespace fpp {

enum class CylinderVariable { Tau, Phi };

struct CylinderFlowSample {
    CylinderSpec spec;
    int n = 0;
    CylinderVariable kind = CylinderVariable::Tau;
    double value = 0.0;
    std::uint64_t seed = 0;
};

// The flow problem underlying tau (side-to-side) or phi (bottom-to-top).
FlowProblem cylinder_problem(const CylinderSets& sets, const CapacityField& field,
                             CylinderVariable kind);

double tau(const CylinderSpec& c, int n, const CapacityField& field);
double phi_cyl(const CylinderSpec& c, int n, const CapacityField& field);

// The source -> sink max-flow problem on the discrete domain graph.
FlowProblem domain_problem(const LatticeDomain& lat, const CapacityField& field);

}  // namespace fpp
