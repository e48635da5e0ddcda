#pragma once
//
// Weighted undirected graph primitives: cut evaluation, Stoer-Wagner global
// minimum cut, and exact edge strong connectivity by recursive min-cut
// decomposition. Vertices are dense 0-based ids; parallel edges are merged
// by weight addition inside connectivity computations.
//

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

namespace robuststream {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

inline void validate_edge(const Edge& e, int n) {
    if (e.u == e.v) throw std::invalid_argument("edge: self-loop");
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
        throw std::invalid_argument("edge: vertex out of range");
    if (!(e.w > 0.0)) throw std::invalid_argument("edge: weight must be positive");
}

// Sum of weights of edges with exactly one endpoint in `side`.
inline double cut_value(const std::vector<Edge>& edges, const std::vector<bool>& side) {
    bool any_in = false, any_out = false;
    for (bool b : side) (b ? any_in : any_out) = true;
    if (!any_in || !any_out)
        throw std::invalid_argument("cut_value: side must be a proper nonempty subset");
    double total = 0.0;
    for (const auto& e : edges) {
        if (static_cast<std::size_t>(e.u) >= side.size() || static_cast<std::size_t>(e.v) >= side.size())
            throw std::invalid_argument("cut_value: edge endpoint outside vertex set");
        if (side[e.u] != side[e.v]) total += e.w;
    }
    return total;
}

struct MinCut {
    double value = 0.0;
    std::vector<int> side;  // one shore, original vertex ids
};

namespace detail {

// adjacency matrix on a vertex subset, parallel edges merged
inline std::vector<std::vector<double>> adjacency(const std::vector<Edge>& edges,
                                                  const std::vector<int>& verts) {
    std::vector<int> pos(*std::max_element(verts.begin(), verts.end()) + 1, -1);
    for (std::size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<int>(i);
    std::vector<std::vector<double>> adj(verts.size(), std::vector<double>(verts.size(), 0.0));
    for (const auto& e : edges) {
        if (e.u >= static_cast<int>(pos.size()) || e.v >= static_cast<int>(pos.size())) continue;
        int a = pos[e.u], b = pos[e.v];
        if (a < 0 || b < 0) continue;
        adj[a][b] += e.w;
        adj[b][a] += e.w;
    }
    return adj;
}

inline std::vector<std::vector<double>> adjacency_full(const std::vector<Edge>& edges, int n) {
    std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0.0));
    for (const auto& e : edges) {
        adj[e.u][e.v] += e.w;
        adj[e.v][e.u] += e.w;
    }
    return adj;
}

inline std::vector<int> component_of(const std::vector<std::vector<double>>& adj, int start) {
    std::vector<int> comp;
    std::vector<bool> seen(adj.size(), false);
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        comp.push_back(u);
        for (std::size_t v = 0; v < adj.size(); ++v)
            if (adj[u][v] > 0.0 && !seen[v]) { seen[v] = true; q.push(static_cast<int>(v)); }
    }
    std::sort(comp.begin(), comp.end());
    return comp;
}

} // namespace detail

// Stoer-Wagner. Requires a connected graph on >= 2 vertices; a disconnected
// input yields value 0 with one component as witness. Min-cut ties resolve to
// the lexicographically smallest witnessing side.
inline MinCut global_min_cut(const std::vector<Edge>& edges, const std::vector<int>& vertices) {
    const std::size_t n = vertices.size();
    if (n < 2) throw std::invalid_argument("global_min_cut: need >= 2 vertices");
    auto adj = detail::adjacency(edges, vertices);

    auto comp = detail::component_of(adj, 0);
    if (comp.size() < n) {
        MinCut mc;
        mc.value = 0.0;
        for (int i : comp) mc.side.push_back(vertices[i]);
        return mc;
    }

    // groups[i]: original vertices merged into contracted vertex i
    std::vector<std::vector<int>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[i] = {vertices[i]};
    std::vector<int> active(n);
    std::iota(active.begin(), active.end(), 0);

    MinCut best;
    best.value = std::numeric_limits<double>::infinity();

    while (active.size() > 1) {
        // maximum adjacency ordering
        std::vector<double> weight_to(adj.size(), 0.0);
        std::vector<bool> added(adj.size(), false);
        std::vector<int> order;
        for (std::size_t step = 0; step < active.size(); ++step) {
            int sel = -1;
            for (int v : active)
                if (!added[v] && (sel < 0 || weight_to[v] > weight_to[sel])) sel = v;
            added[sel] = true;
            order.push_back(sel);
            for (int v : active)
                if (!added[v]) weight_to[v] += adj[sel][v];
        }
        int t = order.back();
        int s = order[order.size() - 2];
        double cut_of_phase = weight_to[t];

        bool better = cut_of_phase < best.value - 1e-12;
        if (!better && cut_of_phase < best.value + 1e-12) {
            std::vector<int> cand = groups[t];
            std::sort(cand.begin(), cand.end());
            better = cand < best.side;
        }
        if (better) {
            best.value = cut_of_phase;
            best.side = groups[t];
            std::sort(best.side.begin(), best.side.end());
        }

        // contract t into s
        for (int v : active) {
            if (v == t || v == s) continue;
            adj[s][v] += adj[t][v];
            adj[v][s] = adj[s][v];
        }
        groups[s].insert(groups[s].end(), groups[t].begin(), groups[t].end());
        active.erase(std::find(active.begin(), active.end(), t));
    }
    return best;
}

inline MinCut global_min_cut(const std::vector<Edge>& edges, int n) {
    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 0);
    return global_min_cut(edges, verts);
}

// Exact strong connectivity of the pair (u, v) in the weighted graph: the
// maximum k such that some vertex-induced k-strong-connected subgraph contains
// both. Any component stronger than the current min cut lies entirely inside
// one shore, so peeling min cuts until the pair separates is exact.
inline double strong_connectivity(const std::vector<Edge>& edges, int n, int u, int v) {
    if (u == v) throw std::invalid_argument("strong_connectivity: endpoints must differ");
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    double best = 0.0;

    while (true) {
        // restrict to the connected component containing u
        auto adj = detail::adjacency(edges, comp);
        int upos = static_cast<int>(std::find(comp.begin(), comp.end(), u) - comp.begin());
        auto cc = detail::component_of(adj, upos);
        std::vector<int> verts;
        bool has_v = false;
        for (int i : cc) {
            verts.push_back(comp[i]);
            if (comp[i] == v) has_v = true;
        }
        if (!has_v) return best;  // pair disconnected at this level
        if (verts.size() == 2) {
            double w = 0.0;
            for (const auto& e : edges)
                if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) w += e.w;
            return std::max(best, w);
        }
        MinCut mc = global_min_cut(edges, verts);
        best = std::max(best, mc.value);
        bool u_in = std::binary_search(mc.side.begin(), mc.side.end(), u);
        bool v_in = std::binary_search(mc.side.begin(), mc.side.end(), v);
        if (u_in != v_in) return best;
        if (u_in) {
            comp = mc.side;
        } else {
            std::vector<int> other;
            std::set<int> in_side(mc.side.begin(), mc.side.end());
            for (int x : verts)
                if (!in_side.count(x)) other.push_back(x);
            comp = other;
        }
        if (comp.size() < 2) return best;
    }
}

inline double strong_connectivity(const std::vector<Edge>& edges, int n, const Edge& e) {
    return strong_connectivity(edges, n, e.u, e.v);
}

} // namespace robuststream
