#include "fpp/cylflow.hpp"

namespace fpp {

FlowProblem cylinder_problem(const CylinderSets& sets, const CapacityField& field,
                             CylinderVariable kind) {
    FlowProblem p;
    p.num_vertices = sets.points.size();
    for (std::size_t i = 0; i < sets.edges.size(); ++i) {
        FlowEdge e;
        e.u = sets.edges[i].first;
        e.v = sets.edges[i].second;
        e.grid = sets.grid_edges[i];
        e.cap = field.value(e.grid);
        p.edges.push_back(std::move(e));
    }
    if (kind == CylinderVariable::Tau) {
        p.sources = sets.side1;
        p.sinks = sets.side2;
    } else {
        p.sources = sets.bottom;
        p.sinks = sets.top;
    }
    // The boundary sets can overlap on degenerate thin cylinders; drop the
    // overlap from the sink side so the problem stays well formed.
    std::vector<char> is_src(p.num_vertices, 0);
    for (std::size_t v : p.sources) is_src[v] = 1;
    std::vector<std::size_t> snk;
    for (std::size_t v : p.sinks)
        if (!is_src[v]) snk.push_back(v);
    p.sinks = std::move(snk);
    return p;
}

namespace {

double cylinder_flow(const CylinderSpec& c, int n, const CapacityField& field,
                     CylinderVariable kind) {
    CylinderSets sets = cylinder_lattice_sets(c, n);
    if (sets.points.empty()) return 0.0;
    FlowProblem p = cylinder_problem(sets, field, kind);
    if (p.sources.empty() || p.sinks.empty()) return 0.0;
    return max_flow(p).value;
}

}  // namespace

double tau(const CylinderSpec& c, int n, const CapacityField& field) {
    return cylinder_flow(c, n, field, CylinderVariable::Tau);
}

double phi_cyl(const CylinderSpec& c, int n, const CapacityField& field) {
    return cylinder_flow(c, n, field, CylinderVariable::Phi);
}

FlowProblem domain_problem(const LatticeDomain& lat, const CapacityField& field) {
    FlowProblem p;
    p.num_vertices = lat.vertex_count();
    for (const GridEdge& e : lat.omega_edges()) {
        auto [u, v] = lat.endpoints(e);
        p.edges.push_back(FlowEdge{u, v, field.value(e), e});
    }
    for (std::size_t i = 0; i < lat.vertex_count(); ++i) {
        if (lat.in_gamma1(i)) p.sources.push_back(i);
        if (lat.in_gamma2(i)) p.sinks.push_back(i);
    }
    return p;
}

}  // namespace fpp
