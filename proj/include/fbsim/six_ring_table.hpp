#pragma once

#include <string_view>

namespace fbsim {

// Unit-cell adjacency table of the six-ring fusion network, generated by the
// stabilizer derivation (`fbsim derive-graph`) and checked against a fresh
// derivation in the test suite. A copy lives at data/six_ring_unit_cell.json.
inline constexpr std::string_view kSixRingUnitCellJson = R"json({
  "format": "fbsim-six-ring-unit-cell",
  "version": 1,
  "derived_from_L": 4,
  "ring_order": ["+x", "-y", "+z", "-x", "+y", "-z"],
  "node_rule": "one check per unit cube, anchored at the cube minimum corner; even corner parity is primal",
  "rows": [
    {"axis": "x", "outcome": "XX", "node_a": [0, -1, -1], "node_b": [0, 0, 0]},
    {"axis": "x", "outcome": "ZZ", "node_a": [0, -1, 0], "node_b": [0, 0, -1]},
    {"axis": "y", "outcome": "XX", "node_a": [-1, 0, -1], "node_b": [0, 0, 0]},
    {"axis": "y", "outcome": "ZZ", "node_a": [-1, 0, 0], "node_b": [0, 0, -1]},
    {"axis": "z", "outcome": "XX", "node_a": [-1, -1, 0], "node_b": [0, 0, 0]},
    {"axis": "z", "outcome": "ZZ", "node_a": [-1, 0, 0], "node_b": [0, -1, 0]}
  ]
})json";

}  // namespace fbsim
