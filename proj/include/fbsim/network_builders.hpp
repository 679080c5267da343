#pragma once

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fbsim/six_ring_table.hpp"
#include "fbsim/stabilizer_network.hpp"
#include "fbsim/syndrome_graph.hpp"
#include "fbsim/unit_cell.hpp"

namespace fbsim {

inline const UnitCellTable& six_ring_unit_cell() {
    static const UnitCellTable table =
        unit_cell_from_json(nlohmann::json::parse(kSixRingUnitCellJson));
    return table;
}

namespace detail {

// Edge between the checks anchored at s+ua and s+ub on an L^3 torus, with
// wrap bits marking boundary crossings between the two endpoints.
inline GraphEdge make_torus_edge(Coord s, Coord ua, Coord ub, int L, BasisLabel label,
                                 int32_t fusion, int8_t offset_class, int32_t node_u,
                                 int32_t node_v, bool swap_ends) {
    GraphEdge e;
    e.label = label;
    e.fusion = fusion;
    e.offset_class = offset_class;
    e.u = swap_ends ? node_v : node_u;
    e.v = swap_ends ? node_u : node_v;
    Coord a_raw = coord_add(s, ua);
    Coord b_raw = coord_add(s, ub);
    int am[3] = {mod(a_raw.x, L), mod(a_raw.y, L), mod(a_raw.z, L)};
    int bm[3] = {mod(b_raw.x, L), mod(b_raw.y, L), mod(b_raw.z, L)};
    int off[3] = {b_raw.x - a_raw.x, b_raw.y - a_raw.y, b_raw.z - a_raw.z};
    for (int k = 0; k < 3; ++k)
        if (am[k] + off[k] != bm[k]) e.wrap |= static_cast<uint8_t>(1u << k);
    return e;
}

}  // namespace detail

// Builds the six-ring fusion network on an L^3 torus by replaying the
// derived unit-cell table. One parity check sits on every unit cube; each
// syndrome graph gets one edge per fusion.
inline FusionNetwork build_six_ring(int L) {
    if (L < 4) throw std::invalid_argument("six-ring network requires L >= 4, got " + std::to_string(L));
    if (L % 2 != 0)
        throw std::invalid_argument("six-ring network requires even L for a consistent "
                                    "primal/dual bipartition on the torus, got " +
                                    std::to_string(L));
    const UnitCellTable& table = six_ring_unit_cell();
    const int n_sites = L * L * L;
    const int32_t n_fusions = 3 * n_sites;

    FusionNetwork net;
    net.kind = NetworkKind::SixRing;
    net.L = L;
    net.primal.n_nodes = n_sites / 2;
    net.dual.n_nodes = n_sites / 2;
    net.primal.node_sites.resize(static_cast<size_t>(n_sites / 2));
    net.dual.node_sites.resize(static_cast<size_t>(n_sites / 2));
    for (int s = 0; s < n_sites; ++s) {
        Coord c = site_coord(s, L);
        // Sites alternate parity along x, so s >> 1 compacts each class.
        (site_parity(c) == 0 ? net.primal : net.dual).node_sites[s >> 1] = c;
    }
    net.primal.edges.resize(static_cast<size_t>(n_fusions));
    net.dual.edges.resize(static_cast<size_t>(n_fusions));
    net.fusions.resize(static_cast<size_t>(n_fusions));

    for (int head = 0; head < n_sites; ++head) {
        Coord h = site_coord(head, L);
        for (int axis = 0; axis < 3; ++axis) {
            int32_t f = static_cast<int32_t>(3 * head + axis);
            Coord s = coord_add(h, kDirections[2 * axis + 1]);  // base site = head - e_axis
            for (int which = 0; which < 2; ++which) {
                BasisLabel outcome = which == 0 ? BasisLabel::XX : BasisLabel::ZZ;
                const UnitCellRow& row = table.row(axis, outcome);
                Coord a_site = coord_add(s, row.node_a);
                Coord b_site = coord_add(s, row.node_b);
                int pa = site_parity(a_site);
                if (pa != site_parity(b_site))
                    throw std::logic_error("unit-cell table joins checks of opposite parity");
                int32_t na = static_cast<int32_t>(site_index(a_site, L) >> 1);
                int32_t nb = static_cast<int32_t>(site_index(b_site, L) >> 1);
                SyndromeGraph& g = pa == 0 ? net.primal : net.dual;
                bool swap_ends = nb < na;
                g.edges[static_cast<size_t>(f)] = detail::make_torus_edge(
                    s, row.node_a, row.node_b, L, outcome, f,
                    static_cast<int8_t>(2 * axis + which), na, nb, swap_ends);
                if (pa == 0) {
                    net.fusions[static_cast<size_t>(f)].primal_edge = f;
                    if (which == 0) net.fusions[static_cast<size_t>(f)].xx_in_primal = true;
                } else {
                    net.fusions[static_cast<size_t>(f)].dual_edge = f;
                }
            }
        }
    }
    net.primal.finalize_adjacency();
    net.dual.finalize_adjacency();
    return net;
}

// Two overlaid square-lattice syndrome graphs on a torus, paired so that
// edges sharing a midpoint come from the same fusion. Used for unit tests
// and worked examples only. The primal edge of every fusion carries the XX
// outcome.
inline FusionNetwork build_square_pair(int width, int height) {
    if (width < 2 || height < 2)
        throw std::invalid_argument("square-pair network requires width, height >= 2");
    FusionNetwork net;
    net.kind = NetworkKind::SquarePair;
    net.width = width;
    net.height = height;
    const int n = width * height;
    net.primal.n_nodes = n;
    net.dual.n_nodes = n;
    net.primal.node_sites.resize(static_cast<size_t>(n));
    net.dual.node_sites.resize(static_cast<size_t>(n));
    auto node = [&](int i, int j) {
        return static_cast<int32_t>(detail::mod(i, width) + detail::mod(j, height) * width);
    };
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) {
            net.primal.node_sites[static_cast<size_t>(node(i, j))] = Coord{i, j, 0};
            net.dual.node_sites[static_cast<size_t>(node(i, j))] = Coord{i, j, 0};
        }

    const int32_t n_fusions = static_cast<int32_t>(2 * n);
    net.primal.edges.resize(static_cast<size_t>(n_fusions));
    net.dual.edges.resize(static_cast<size_t>(n_fusions));
    net.fusions.resize(static_cast<size_t>(n_fusions));

    auto add_edge = [&](SyndromeGraph& g, int32_t f, int32_t u, int32_t v, bool wraps_x,
                        bool wraps_y, BasisLabel label, int8_t cls) {
        GraphEdge e;
        e.u = std::min(u, v);
        e.v = std::max(u, v);
        e.label = label;
        e.fusion = f;
        e.offset_class = cls;
        if (wraps_x) e.wrap |= 1;
        if (wraps_y) e.wrap |= 2;
        g.edges[static_cast<size_t>(f)] = e;
    };

    // Row-major raster order: for each cell, the horizontal fusion then the
    // vertical one. The horizontal primal edge pairs with a vertical dual
    // edge through the shared midpoint, and vice versa.
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) {
            int32_t fh = static_cast<int32_t>(2 * (j * width + i));
            int32_t fv = fh + 1;
            add_edge(net.primal, fh, node(i, j), node(i + 1, j), i + 1 == width, false,
                     BasisLabel::XX, 0);
            add_edge(net.dual, fh, node(i, j - 1), node(i, j), false, j == 0, BasisLabel::ZZ, 1);
            add_edge(net.primal, fv, node(i, j), node(i, j + 1), false, j + 1 == height,
                     BasisLabel::XX, 2);
            add_edge(net.dual, fv, node(i - 1, j), node(i, j), i == 0, false, BasisLabel::ZZ, 3);
            net.fusions[static_cast<size_t>(fh)] = FusionRef{fh, fh, true};
            net.fusions[static_cast<size_t>(fv)] = FusionRef{fv, fv, true};
        }
    net.primal.finalize_adjacency();
    net.dual.finalize_adjacency();
    return net;
}

}  // namespace fbsim
