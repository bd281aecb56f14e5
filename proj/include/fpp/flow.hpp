#pragma once

// Exact maximal flow between vertex sets on an undirected capacitated graph,
// min-cut extraction from the residual partition, and stream validation.

#include <cstddef>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

struct FlowEdge {
    std::size_t u = 0, v = 0;
    double cap = 0.0;
    GridEdge grid;  // provenance on lattice problems; unused otherwise
};

struct FlowProblem {
    std::size_t num_vertices = 0;
    std::vector<FlowEdge> edges;
    std::vector<std::size_t> sources, sinks;

    void validate() const;   // throws std::invalid_argument
    std::string dump() const;  // one edge per line: endpoints, capacity
};

// A feasible stream: per-edge throughput g and orientation (+1 means u->v,
// -1 means v->u, 0 means idle).
struct Stream {
    std::vector<double> g;
    std::vector<int> orient;
};

struct MaxFlowResult {
    double value = 0.0;
    Stream stream;
};

struct CutResult {
    std::vector<std::size_t> edge_indices;
    double capacity = 0.0;
};

struct StreamCheck {
    bool ok = true;
    std::string violation;  // first violated constraint, empty when ok
    double flow = 0.0;      // recomputed sink-boundary flow
};

MaxFlowResult max_flow(const FlowProblem& p);
CutResult min_cut(const FlowProblem& p);
StreamCheck validate_stream(const Stream& s, const FlowProblem& p);
// True iff removing the given edges leaves no path from sources to sinks.
bool is_cutset(const std::vector<std::size_t>& edge_indices, const FlowProblem& p);

}  // namespace fpp
