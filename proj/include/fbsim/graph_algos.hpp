#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Connected components over the subgraph of edges accepted by `edge_pred`.
// Returns component id per node and the number of components.
inline std::pair<std::vector<int>, int> connected_components(
    const SyndromeGraph& g, const std::function<bool(const GraphEdge&)>& edge_pred) {
    std::vector<int> comp(static_cast<size_t>(g.n_nodes), -1);
    int n_comp = 0;
    std::vector<int32_t> stack;
    for (int32_t start = 0; start < g.n_nodes; ++start) {
        if (comp[static_cast<size_t>(start)] != -1) continue;
        comp[static_cast<size_t>(start)] = n_comp;
        stack.push_back(start);
        while (!stack.empty()) {
            int32_t u = stack.back();
            stack.pop_back();
            auto [b, e] = g.incident(u);
            for (const int32_t* it = b; it != e; ++it) {
                const GraphEdge& ge = g.edges[static_cast<size_t>(*it)];
                if (!edge_pred(ge)) continue;
                int32_t w = g.other_end(*it, u);
                if (comp[static_cast<size_t>(w)] == -1) {
                    comp[static_cast<size_t>(w)] = n_comp;
                    stack.push_back(w);
                }
            }
        }
        ++n_comp;
    }
    return {std::move(comp), n_comp};
}

// Extracts the subgraph of edges accepted by `edge_pred` restricted to one
// component (the one containing `seed_node`), with nodes relabeled densely.
inline SyndromeGraph extract_component(const SyndromeGraph& g,
                                       const std::function<bool(const GraphEdge&)>& edge_pred,
                                       int32_t seed_node) {
    auto [comp, n_comp] = connected_components(g, edge_pred);
    (void)n_comp;
    int target = comp[static_cast<size_t>(seed_node)];
    std::vector<int32_t> remap(static_cast<size_t>(g.n_nodes), -1);
    SyndromeGraph out;
    for (int32_t v = 0; v < g.n_nodes; ++v) {
        if (comp[static_cast<size_t>(v)] == target) {
            remap[static_cast<size_t>(v)] = out.n_nodes++;
            if (!g.node_sites.empty()) out.node_sites.push_back(g.node_sites[static_cast<size_t>(v)]);
        }
    }
    for (const GraphEdge& e : g.edges) {
        if (!edge_pred(e)) continue;
        if (comp[static_cast<size_t>(e.u)] != target) continue;
        GraphEdge ne = e;
        ne.u = remap[static_cast<size_t>(e.u)];
        ne.v = remap[static_cast<size_t>(e.v)];
        out.edges.push_back(ne);
    }
    out.finalize_adjacency();
    return out;
}

// Number of triangles through each edge. In a triangular lattice every edge
// lies in exactly two triangles.
inline std::vector<int> triangles_per_edge(const SyndromeGraph& g) {
    std::vector<int> count(g.edges.size(), 0);
    std::vector<char> mark(static_cast<size_t>(g.n_nodes), 0);
    for (size_t eid = 0; eid < g.edges.size(); ++eid) {
        const GraphEdge& e = g.edges[eid];
        auto [b1, e1] = g.incident(e.u);
        for (const int32_t* it = b1; it != e1; ++it) mark[static_cast<size_t>(g.other_end(*it, e.u))] = 1;
        auto [b2, e2] = g.incident(e.v);
        for (const int32_t* it = b2; it != e2; ++it) {
            int32_t w = g.other_end(*it, e.v);
            if (w != e.u && w != e.v && mark[static_cast<size_t>(w)]) ++count[eid];
        }
        for (const int32_t* it = b1; it != e1; ++it) mark[static_cast<size_t>(g.other_end(*it, e.u))] = 0;
    }
    return count;
}

// Exact equality of two graphs up to edge order.
inline bool graphs_equal(const SyndromeGraph& a, const SyndromeGraph& b) {
    if (a.n_nodes != b.n_nodes || a.edges.size() != b.edges.size()) return false;
    auto key = [](const SyndromeGraph& g) {
        std::vector<std::tuple<int32_t, int32_t, int, int, int32_t>> k;
        k.reserve(g.edges.size());
        for (const GraphEdge& e : g.edges)
            k.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v), static_cast<int>(e.label),
                           static_cast<int>(e.wrap), e.fusion);
        std::sort(k.begin(), k.end());
        return k;
    };
    return key(a) == key(b);
}

}  // namespace fbsim
