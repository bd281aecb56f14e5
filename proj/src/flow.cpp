#include "fpp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kEps = 1e-12;  // residuals below this count as saturated
constexpr double kInf = std::numeric_limits<double>::infinity();

// Dinic's blocking-flow solver. Undirected edges become a pair of arcs, each
// carrying the full capacity; the net over the pair stays within capacity.
struct Dinic {
    struct Arc {
        std::size_t to;
        double cap;
        std::size_t rev;
    };
    std::vector<std::vector<Arc>> adj;
    std::vector<int> level;
    std::vector<std::size_t> iter;

    explicit Dinic(std::size_t n) : adj(n), level(n), iter(n) {}

    // Returns the index of the forward arc in adj[u].
    std::size_t add(std::size_t u, std::size_t v, double cap, double rcap) {
        adj[u].push_back({v, cap, adj[v].size()});
        adj[v].push_back({u, rcap, adj[u].size() - 1});
        return adj[u].size() - 1;
    }

    bool bfs(std::size_t s, std::size_t t) {
        std::fill(level.begin(), level.end(), -1);
        std::queue<std::size_t> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            for (const auto& a : adj[u])
                if (a.cap > kEps && level[a.to] < 0) {
                    level[a.to] = level[u] + 1;
                    q.push(a.to);
                }
        }
        return level[t] >= 0;
    }

    double dfs(std::size_t u, std::size_t t, double f) {
        if (u == t) return f;
        for (std::size_t& i = iter[u]; i < adj[u].size(); ++i) {
            Arc& a = adj[u][i];
            if (a.cap > kEps && level[a.to] == level[u] + 1) {
                double d = dfs(a.to, t, std::min(f, a.cap));
                if (d > kEps) {
                    a.cap -= d;
                    adj[a.to][a.rev].cap += d;
                    return d;
                }
            }
        }
        return 0.0;
    }

    double run(std::size_t s, std::size_t t) {
        double total = 0.0;
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            for (double f; (f = dfs(s, t, kInf)) > kEps;) total += f;
        }
        return total;
    }
};

struct Solved {
    double value = 0.0;
    Dinic net;
    std::vector<std::size_t> fwd;  // arc index of each edge's u->v arc
    std::size_t s, t;
};

Solved solve(const FlowProblem& p) {
    p.validate();
    std::size_t n = p.num_vertices;
    Solved r{0.0, Dinic(n + 2), {}, n, n + 1};
    for (const auto& e : p.edges) r.fwd.push_back(r.net.add(e.u, e.v, e.cap, e.cap));
    for (std::size_t v : p.sources) r.net.add(r.s, v, kInf, 0.0);
    for (std::size_t v : p.sinks) r.net.add(v, r.t, kInf, 0.0);
    if (!p.sources.empty() && !p.sinks.empty()) r.value = r.net.run(r.s, r.t);
    return r;
}

}  // namespace

void FlowProblem::validate() const {
    for (const auto& e : edges)
        if (e.u >= num_vertices || e.v >= num_vertices || e.cap < 0 || !std::isfinite(e.cap))
            throw std::invalid_argument("flow problem has an invalid edge");
    std::vector<char> is_src(num_vertices, 0);
    for (std::size_t v : sources) {
        if (v >= num_vertices) throw std::invalid_argument("source vertex out of range");
        is_src[v] = 1;
    }
    for (std::size_t v : sinks) {
        if (v >= num_vertices) throw std::invalid_argument("sink vertex out of range");
        if (is_src[v]) throw std::invalid_argument("source and sink sets intersect");
    }
}

std::string FlowProblem::dump() const {
    std::ostringstream out;
    for (const auto& e : edges) out << e.u << ' ' << e.v << ' ' << e.cap << '\n';
    return out.str();
}

MaxFlowResult max_flow(const FlowProblem& p) {
    Solved r = solve(p);
    MaxFlowResult res;
    res.value = r.value;
    res.stream.g.assign(p.edges.size(), 0.0);
    res.stream.orient.assign(p.edges.size(), 0);
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        // One arc pair with both capacities c models the undirected edge;
        // the pair's total residual is conserved, so net u->v flow is
        // c minus the forward residual (negative means v->u).
        const auto& arc = r.net.adj[p.edges[i].u][r.fwd[i]];
        double net = p.edges[i].cap - arc.cap;
        if (std::abs(net) <= kEps) continue;
        res.stream.g[i] = std::abs(net);
        res.stream.orient[i] = net > 0 ? 1 : -1;
    }
    return res;
}

CutResult min_cut(const FlowProblem& p) {
    Solved r = solve(p);
    std::vector<char> reach(p.num_vertices + 2, 0);
    std::queue<std::size_t> q;
    reach[r.s] = 1;
    q.push(r.s);
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (const auto& a : r.net.adj[u])
            if (a.cap > kEps && !reach[a.to]) {
                reach[a.to] = 1;
                q.push(a.to);
            }
    }
    CutResult cut;
    for (std::size_t i = 0; i < p.edges.size(); ++i)
        if (reach[p.edges[i].u] != reach[p.edges[i].v]) {
            cut.edge_indices.push_back(i);
            cut.capacity += p.edges[i].cap;
        }
    return cut;
}

StreamCheck validate_stream(const Stream& s, const FlowProblem& p) {
    StreamCheck res;
    if (s.g.size() != p.edges.size() || s.orient.size() != p.edges.size()) {
        res.ok = false;
        res.violation = "stream not defined on the problem's edge set";
        return res;
    }
    std::vector<double> balance(p.num_vertices, 0.0);  // net outflow
    double scale = 0.0;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto& e = p.edges[i];
        scale = std::max(scale, e.cap);
        if (s.g[i] < -1e-9 || s.g[i] > e.cap + 1e-9 * std::max(1.0, e.cap)) {
            res.ok = false;
            res.violation = "capacity violated on edge " + std::to_string(i);
            return res;
        }
        if (s.g[i] > 0 && s.orient[i] == 0) {
            res.ok = false;
            res.violation = "positive throughput without orientation on edge " + std::to_string(i);
            return res;
        }
        double signedf = s.orient[i] >= 0 ? s.g[i] : -s.g[i];
        balance[e.u] += signedf;
        balance[e.v] -= signedf;
    }
    std::vector<char> boundary(p.num_vertices, 0);
    for (std::size_t v : p.sources) boundary[v] = 1;
    for (std::size_t v : p.sinks) boundary[v] = 1;
    double tol = 1e-9 * std::max(1.0, scale) * std::max<std::size_t>(1, p.edges.size());
    for (std::size_t v = 0; v < p.num_vertices; ++v)
        if (!boundary[v] && std::abs(balance[v]) > tol) {
            res.ok = false;
            res.violation = "conservation violated at vertex " + std::to_string(v);
            return res;
        }
    // Flow value: net amount delivered into the sink set.
    for (std::size_t v : p.sinks) res.flow -= balance[v];
    return res;
}

bool is_cutset(const std::vector<std::size_t>& edge_indices, const FlowProblem& p) {
    std::vector<char> removed(p.edges.size(), 0);
    for (std::size_t i : edge_indices)
        if (i < p.edges.size()) removed[i] = 1;
    std::vector<std::vector<std::size_t>> adj(p.num_vertices);
    for (std::size_t i = 0; i < p.edges.size(); ++i)
        if (!removed[i]) {
            adj[p.edges[i].u].push_back(p.edges[i].v);
            adj[p.edges[i].v].push_back(p.edges[i].u);
        }
    std::vector<char> seen(p.num_vertices, 0);
    std::queue<std::size_t> q;
    for (std::size_t v : p.sources)
        if (!seen[v]) {
            seen[v] = 1;
            q.push(v);
        }
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (std::size_t v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
    }
    for (std::size_t v : p.sinks)
        if (seen[v]) return false;
    return true;
}

}  // namespace fpp
