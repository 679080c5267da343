#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "fbsim/pauli.hpp"
#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Direction indexing used throughout: 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z.
inline constexpr std::array<Coord, 6> kDirections = {
    Coord{1, 0, 0}, Coord{-1, 0, 0}, Coord{0, 1, 0},
    Coord{0, -1, 0}, Coord{0, 0, 1},  Coord{0, 0, -1},
};

// Cyclic order of the six ring qubits by direction index. Axes alternate
// x,y,z twice around the ring with alternating orientation, which places the
// two qubits of each axis on opposite sides of the ring.
inline constexpr std::array<int, 6> kSixRingOrder = {0, 3, 4, 1, 2, 5};  // +x -y +z -x +y -z

struct FusionDesc {
    int32_t qubit_a = -1;
    int32_t qubit_b = -1;
    PauliOp op_xx;
    PauliOp op_zz;
};

// A fusion network in stabilizer form: resource-state generators plus the
// two commuting measurement operators of every fusion. `windows` lists
// candidate local supports (sets of fusion ids) inside which low-weight
// checks are searched; an empty list means one window covering everything.
struct StabilizerNetworkDescription {
    size_t n_qubits = 0;
    std::vector<PauliOp> generators;
    std::vector<FusionDesc> fusions;
    std::vector<std::vector<int32_t>> windows;

    // Geometry metadata for lattice networks (empty for generic inputs).
    int L = 0;
    std::vector<Coord> fusion_base;        // base site of each fusion
    std::vector<int> fusion_axis;          // 0,1,2
    std::vector<Coord> window_anchor;      // anchor site per window

    void validate() const {
        for (size_t i = 0; i < generators.size(); ++i)
            for (size_t j = i + 1; j < generators.size(); ++j)
                if (!generators[i].commutes_with(generators[j]))
                    throw std::invalid_argument(
                        "resource-state generators do not all commute (generators " +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
        std::vector<int> fusion_of_qubit(n_qubits, -1);
        for (size_t f = 0; f < fusions.size(); ++f) {
            const FusionDesc& fd = fusions[f];
            if (!fd.op_xx.commutes_with(fd.op_zz))
                throw std::invalid_argument("fusion " + std::to_string(f) +
                                            " measurement operators anticommute");
            for (int32_t q : {fd.qubit_a, fd.qubit_b}) {
                if (q < 0 || static_cast<size_t>(q) >= n_qubits)
                    throw std::invalid_argument("fusion qubit index out of range");
                if (fusion_of_qubit[q] != -1)
                    throw std::invalid_argument("qubit " + std::to_string(q) +
                                                " consumed by more than one fusion");
                fusion_of_qubit[q] = static_cast<int>(f);
            }
        }
        for (size_t q = 0; q < n_qubits; ++q)
            if (fusion_of_qubit[q] == -1)
                throw std::invalid_argument("qubit " + std::to_string(q) +
                                            " is not consumed by any fusion");
    }
};

namespace detail {
inline int mod(int a, int m) { return ((a % m) + m) % m; }
}  // namespace detail

inline int site_index(Coord c, int L) {
    return detail::mod(c.x, L) + detail::mod(c.y, L) * L + detail::mod(c.z, L) * L * L;
}

inline Coord site_coord(int idx, int L) {
    return Coord{idx % L, (idx / L) % L, idx / (L * L)};
}

inline int site_parity(Coord c) { return detail::mod(c.x + c.y + c.z, 2); }

// Qubit id of a site's qubit facing direction `dir` (0..5).
inline int32_t six_ring_qubit(Coord site, int dir, int L) {
    return static_cast<int32_t>(site_index(site, L) * 6 + dir);
}

inline Coord coord_add(Coord a, Coord b) { return Coord{a.x + b.x, a.y + b.y, a.z + b.z}; }

// Fusion id in raster order: fusions are appended when their head state
// (x + yL + zL^2 order) is added, in axis order x,y,z toward the already
// placed neighbors.
inline int32_t six_ring_fusion_id(Coord base, int axis, int L) {
    Coord head = coord_add(base, kDirections[2 * axis]);
    return static_cast<int32_t>(3 * site_index(head, L) + axis);
}

// Stabilizer description of the 6-ring fusion network on an L^3 torus.
// Resource states are six-qubit ring graph states; every fusion measures
// XX and ZZ on the facing qubits of neighboring states.
inline StabilizerNetworkDescription six_ring_description(int L) {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("six-ring description requires even L >= 2");
    StabilizerNetworkDescription d;
    d.L = L;
    const int n_sites = L * L * L;
    d.n_qubits = static_cast<size_t>(n_sites) * 6;

    // Ring graph-state generators: X on each qubit, Z on its ring neighbors.
    for (int s = 0; s < n_sites; ++s) {
        for (int p = 0; p < 6; ++p) {
            PauliOp g(d.n_qubits);
            int q = s * 6 + kSixRingOrder[p];
            int prev = s * 6 + kSixRingOrder[(p + 5) % 6];
            int next = s * 6 + kSixRingOrder[(p + 1) % 6];
            g.set_x(static_cast<size_t>(q));
            g.set_z(static_cast<size_t>(prev));
            g.set_z(static_cast<size_t>(next));
            d.generators.push_back(std::move(g));
        }
    }

    // Fusions in raster order.
    d.fusions.resize(static_cast<size_t>(3 * n_sites));
    d.fusion_base.resize(d.fusions.size());
    d.fusion_axis.resize(d.fusions.size());
    for (int head = 0; head < n_sites; ++head) {
        Coord h = site_coord(head, L);
        for (int axis = 0; axis < 3; ++axis) {
            Coord base = coord_add(h, kDirections[2 * axis + 1]);  // tail = head - e_axis
            int32_t qa = six_ring_qubit(base, 2 * axis, L);        // +axis qubit of tail
            int32_t qb = six_ring_qubit(h, 2 * axis + 1, L);       // -axis qubit of head
            FusionDesc fd;
            fd.qubit_a = qa;
            fd.qubit_b = qb;
            fd.op_xx = PauliOp::two_qubit_xx(d.n_qubits, qa, qb);
            fd.op_zz = PauliOp::two_qubit_zz(d.n_qubits, qa, qb);
            int32_t f = static_cast<int32_t>(3 * head + axis);
            d.fusions[f] = std::move(fd);
            d.fusion_base[f] = Coord{detail::mod(base.x, L), detail::mod(base.y, L), detail::mod(base.z, L)};
            d.fusion_axis[f] = axis;
        }
    }

    // Windows: the twelve edge fusions of every unit cube.
    for (int s = 0; s < n_sites; ++s) {
        Coord v = site_coord(s, L);
        std::vector<int32_t> w;
        for (int axis = 0; axis < 3; ++axis) {
            int a = (axis + 1) % 3, b = (axis + 2) % 3;
            for (int da = 0; da <= 1; ++da)
                for (int db = 0; db <= 1; ++db) {
                    Coord base = v;
                    if (da) base = coord_add(base, kDirections[2 * a]);
                    if (db) base = coord_add(base, kDirections[2 * b]);
                    w.push_back(six_ring_fusion_id(base, axis, L));
                }
        }
        d.windows.push_back(std::move(w));
        d.window_anchor.push_back(v);
    }
    return d;
}

// Two six-qubit rings fused qubit-for-qubit: the smallest closed network.
// Useful as a brute-force target for the check-space computation.
inline StabilizerNetworkDescription stacked_ring_pair_description() {
    StabilizerNetworkDescription d;
    d.n_qubits = 12;
    for (int ring = 0; ring < 2; ++ring) {
        for (int p = 0; p < 6; ++p) {
            PauliOp g(d.n_qubits);
            int base = ring * 6;
            g.set_x(static_cast<size_t>(base + p));
            g.set_z(static_cast<size_t>(base + (p + 5) % 6));
            g.set_z(static_cast<size_t>(base + (p + 1) % 6));
            d.generators.push_back(std::move(g));
        }
    }
    std::vector<int32_t> window;
    for (int i = 0; i < 6; ++i) {
        FusionDesc fd;
        fd.qubit_a = i;
        fd.qubit_b = 6 + i;
        fd.op_xx = PauliOp::two_qubit_xx(d.n_qubits, fd.qubit_a, fd.qubit_b);
        fd.op_zz = PauliOp::two_qubit_zz(d.n_qubits, fd.qubit_a, fd.qubit_b);
        d.fusions.push_back(std::move(fd));
        window.push_back(i);
    }
    d.windows.push_back(std::move(window));
    return d;
}

}  // namespace fbsim
