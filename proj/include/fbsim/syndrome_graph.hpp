#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbsim {

struct Coord {
    int x = 0, y = 0, z = 0;
    bool operator==(const Coord&) const = default;
};

enum class BasisLabel : uint8_t { XX = 0, ZZ = 1 };

inline const char* to_string(BasisLabel b) { return b == BasisLabel::XX ? "XX" : "ZZ"; }

// One measurement outcome viewed as a syndrome-graph edge. `wrap` has bit k
// set when the edge crosses the periodic boundary along axis k.
struct GraphEdge {
    int32_t u = -1;
    int32_t v = -1;
    BasisLabel label = BasisLabel::XX;
    uint8_t wrap = 0;
    int32_t fusion = -1;       // fusion that produces this outcome
    int8_t offset_class = -1;  // translation class of (label, spatial offset)
};

// Immutable graph of parity checks (nodes) and measurements (edges).
// Built once per network and shared read-only across trials.
struct SyndromeGraph {
    int32_t n_nodes = 0;
    std::vector<GraphEdge> edges;
    std::vector<Coord> node_sites;  // geometric anchor per node (diagnostics)

    // CSR adjacency: edge ids incident to each node.
    std::vector<int32_t> adj_offsets;
    std::vector<int32_t> adj_edges;

    void finalize_adjacency() {
        adj_offsets.assign(static_cast<size_t>(n_nodes) + 1, 0);
        for (const GraphEdge& e : edges) {
            if (e.u == e.v) throw std::logic_error("syndrome graph edge joins a node to itself");
            if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes)
                throw std::logic_error("syndrome graph edge endpoint out of range");
            ++adj_offsets[static_cast<size_t>(e.u) + 1];
            ++adj_offsets[static_cast<size_t>(e.v) + 1];
        }
        for (size_t i = 1; i < adj_offsets.size(); ++i) adj_offsets[i] += adj_offsets[i - 1];
        adj_edges.assign(adj_offsets.back(), -1);
        std::vector<int32_t> cursor(adj_offsets.begin(), adj_offsets.end() - 1);
        for (size_t eid = 0; eid < edges.size(); ++eid) {
            adj_edges[static_cast<size_t>(cursor[edges[eid].u]++)] = static_cast<int32_t>(eid);
            adj_edges[static_cast<size_t>(cursor[edges[eid].v]++)] = static_cast<int32_t>(eid);
        }
    }

    int degree(int32_t node) const { return adj_offsets[node + 1] - adj_offsets[node]; }

    // Edge ids incident to `node`.
    std::pair<const int32_t*, const int32_t*> incident(int32_t node) const {
        return {adj_edges.data() + adj_offsets[node], adj_edges.data() + adj_offsets[node + 1]};
    }

    int32_t other_end(int32_t edge, int32_t node) const {
        const GraphEdge& e = edges[edge];
        return e.u == node ? e.v : e.u;
    }

    size_t n_edges() const { return edges.size(); }
};

enum class NetworkKind : uint8_t { SixRing, SquarePair };

inline const char* to_string(NetworkKind k) {
    return k == NetworkKind::SixRing ? "six-ring" : "square-pair";
}

// One fusion: the primal edge and dual edge it measures, and which of the two
// carries the XX outcome.
struct FusionRef {
    int32_t primal_edge = -1;
    int32_t dual_edge = -1;
    bool xx_in_primal = false;
};

// Paired primal/dual syndrome graphs plus the fusion list in raster order.
struct FusionNetwork {
    NetworkKind kind = NetworkKind::SixRing;
    int L = 0;                  // six-ring lattice side
    int width = 0, height = 0;  // square-pair dimensions
    SyndromeGraph primal;
    SyndromeGraph dual;
    std::vector<FusionRef> fusions;  // index == raster position

    size_t n_fusions() const { return fusions.size(); }

    const SyndromeGraph& graph(bool is_primal) const { return is_primal ? primal : dual; }
};

enum class EdgeState : uint8_t { Unmeasured = 0, Measured = 1, Erased = 2 };

}  // namespace fbsim
