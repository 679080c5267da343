#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "fbsim/derive.hpp"
#include "fbsim/stabilizer_network.hpp"

namespace fbsim {

// Translation-invariant adjacency rule of the six-ring syndrome graphs.
// For a fusion with base site s along `axis`, the outcome edge joins the
// checks anchored at s + node_a and s + node_b. One check lives on every
// unit cube of the resource-state lattice, anchored at the cube's minimum
// corner; even corner parity is the primal component.
struct UnitCellRow {
    int axis = 0;
    BasisLabel outcome = BasisLabel::XX;
    Coord node_a;
    Coord node_b;
};

struct UnitCellTable {
    int version = 1;
    int derived_from_L = 0;
    std::array<UnitCellRow, 6> rows;  // index = 2*axis + (outcome == ZZ)

    const UnitCellRow& row(int axis, BasisLabel outcome) const {
        return rows[static_cast<size_t>(2 * axis + (outcome == BasisLabel::ZZ ? 1 : 0))];
    }
};

namespace detail {

inline Coord centered_offset(Coord from, Coord to, int L) {
    auto c = [&](int d) { return mod(d + L / 2, L) - L / 2; };
    return Coord{c(to.x - from.x), c(to.y - from.y), c(to.z - from.z)};
}

inline bool coord_less(Coord a, Coord b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

}  // namespace detail

// Reads the adjacency rule off a derived instance and verifies it is the
// same for every fusion of a given axis (translation invariance).
inline UnitCellTable extract_unit_cell(const StabilizerNetworkDescription& desc,
                                       const DerivedGraphs& dg) {
    if (desc.L <= 0 || desc.fusion_base.empty())
        throw std::invalid_argument("unit-cell extraction needs lattice geometry metadata");
    UnitCellTable table;
    table.derived_from_L = desc.L;
    std::array<bool, 6> seen{};
    for (size_t f = 0; f < desc.fusions.size(); ++f) {
        Coord s = desc.fusion_base[f];
        int axis = desc.fusion_axis[f];
        for (int which = 0; which < 2; ++which) {
            BasisLabel outcome = which == 0 ? BasisLabel::XX : BasisLabel::ZZ;
            const FusionRef& fr = dg.fusions[f];
            bool in_primal = which == 0 ? fr.xx_in_primal : !fr.xx_in_primal;
            const SyndromeGraph& g = in_primal ? dg.primal : dg.dual;
            const GraphEdge& e = g.edges[static_cast<size_t>(in_primal ? fr.primal_edge : fr.dual_edge)];
            Coord ua = detail::centered_offset(s, g.node_sites[e.u], desc.L);
            Coord ub = detail::centered_offset(s, g.node_sites[e.v], desc.L);
            if (detail::coord_less(ub, ua)) std::swap(ua, ub);
            size_t idx = static_cast<size_t>(2 * axis + which);
            if (!seen[idx]) {
                table.rows[idx] = UnitCellRow{axis, outcome, ua, ub};
                seen[idx] = true;
            } else if (!(table.rows[idx].node_a == ua && table.rows[idx].node_b == ub)) {
                throw std::runtime_error("derived adjacency is not translation invariant for axis " +
                                         std::to_string(axis));
            }
        }
    }
    for (bool s : seen)
        if (!s) throw std::runtime_error("unit-cell extraction saw no fusion for some axis");
    return table;
}

inline nlohmann::json unit_cell_to_json(const UnitCellTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    const char* axis_names = "xyz";
    for (const UnitCellRow& r : t.rows) {
        rows.push_back({{"axis", std::string(1, axis_names[r.axis])},
                        {"outcome", to_string(r.outcome)},
                        {"node_a", {r.node_a.x, r.node_a.y, r.node_a.z}},
                        {"node_b", {r.node_b.x, r.node_b.y, r.node_b.z}}});
    }
    return nlohmann::json{
        {"format", "fbsim-six-ring-unit-cell"},
        {"version", t.version},
        {"derived_from_L", t.derived_from_L},
        {"ring_order", {"+x", "-y", "+z", "-x", "+y", "-z"}},
        {"node_rule",
         "one check per unit cube, anchored at the cube minimum corner; even corner parity is primal"},
        {"rows", rows}};
}

inline UnitCellTable unit_cell_from_json(const nlohmann::json& j) {
    if (j.at("format") != "fbsim-six-ring-unit-cell")
        throw std::invalid_argument("not a unit-cell table document");
    UnitCellTable t;
    t.version = j.at("version").get<int>();
    t.derived_from_L = j.at("derived_from_L").get<int>();
    std::array<bool, 6> seen{};
    for (const auto& rj : j.at("rows")) {
        std::string axis_s = rj.at("axis").get<std::string>();
        int axis = axis_s == "x" ? 0 : axis_s == "y" ? 1 : 2;
        BasisLabel outcome = rj.at("outcome").get<std::string>() == "XX" ? BasisLabel::XX : BasisLabel::ZZ;
        auto na = rj.at("node_a");
        auto nb = rj.at("node_b");
        size_t idx = static_cast<size_t>(2 * axis + (outcome == BasisLabel::ZZ ? 1 : 0));
        t.rows[idx] = UnitCellRow{axis, outcome, Coord{na[0], na[1], na[2]}, Coord{nb[0], nb[1], nb[2]}};
        seen[idx] = true;
    }
    for (bool s : seen)
        if (!s) throw std::invalid_argument("unit-cell table is missing rows");
    return t;
}

}  // namespace fbsim
