#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbsim/gf2.hpp"
#include "fbsim/stabilizer_network.hpp"
#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Check derivation: the group of checks is the set of resource-state
// stabilizers expressible as products of fusion measurement operators.
// Everything here works on the binary symplectic representation; outcome
// coordinates index the measurement bits (2f = XX of fusion f, 2f+1 = ZZ).

struct CheckSpace {
    size_t n_fusions = 0;
    gf2::BitMatrix outcome_basis;      // rows span the check space in outcome coords
    std::vector<PauliOp> pauli_basis;  // matching Pauli form
};

namespace detail {

// Pre-eliminated expander from Pauli space to measurement coefficients.
class MeasurementExpander {
public:
    explicit MeasurementExpander(const StabilizerNetworkDescription& desc)
        : n_ops_(2 * desc.fusions.size()) {
        size_t bits = 2 * desc.n_qubits;
        for (size_t f = 0; f < desc.fusions.size(); ++f) {
            add(desc.fusions[f].op_xx.bits(), 2 * f, bits);
            add(desc.fusions[f].op_zz.bits(), 2 * f + 1, bits);
        }
    }

    // Expands a Pauli (bit form) into outcome coordinates; nullopt if it is
    // not a product of measurement operators.
    std::optional<gf2::BitVec> expand(const gf2::BitVec& pauli) const {
        gf2::BitVec rem = pauli;
        gf2::BitVec coeff(n_ops_);
        for (const Row& r : rows_) {
            if (rem.get(static_cast<size_t>(r.pivot))) {
                rem ^= r.vec;
                coeff ^= r.tag;
            }
        }
        if (rem.any()) return std::nullopt;
        return coeff;
    }

private:
    struct Row {
        gf2::BitVec vec;
        gf2::BitVec tag;
        int pivot;
    };

    void add(const gf2::BitVec& v, size_t op_index, size_t bits) {
        Row r{v, gf2::BitVec(n_ops_), -1};
        r.tag.set(op_index);
        for (const Row& e : rows_) {
            if (r.vec.get(static_cast<size_t>(e.pivot))) {
                r.vec ^= e.vec;
                r.tag ^= e.tag;
            }
        }
        r.pivot = r.vec.lowest_set();
        if (r.pivot < 0)
            throw std::invalid_argument("fusion measurement operators are linearly dependent");
        (void)bits;
        rows_.push_back(std::move(r));
        std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.pivot < b.pivot; });
    }

    size_t n_ops_;
    std::vector<Row> rows_;
};

}  // namespace detail

inline CheckSpace derive_check_space(const StabilizerNetworkDescription& desc) {
    desc.validate();
    const size_t bits = 2 * desc.n_qubits;

    gf2::BitMatrix stab(0, 0);
    for (const PauliOp& g : desc.generators) stab.add_row(g.bits());
    gf2::BitMatrix meas(0, 0);
    for (const FusionDesc& f : desc.fusions) {
        meas.add_row(f.op_xx.bits());
        meas.add_row(f.op_zz.bits());
    }
    (void)bits;

    std::vector<gf2::BitVec> inter = gf2::intersect_rowspaces(stab, meas);

    detail::MeasurementExpander expander(desc);
    CheckSpace cs;
    cs.n_fusions = desc.fusions.size();
    for (gf2::BitVec& p : inter) {
        auto coeff = expander.expand(p);
        if (!coeff)
            throw std::logic_error("check space element is not a measurement product");
        PauliOp op(desc.n_qubits);
        op.bits() = p;
        cs.pauli_basis.push_back(std::move(op));
        cs.outcome_basis.add_row(std::move(*coeff));
    }
    if (cs.outcome_basis.n_rows() == 0) cs.outcome_basis = gf2::BitMatrix(0, 2 * desc.fusions.size());
    return cs;
}

// A minimal-weight local check found inside a window.
struct LocalCheck {
    gf2::BitVec outcomes;  // support over outcome coordinates
    int window = -1;
};

inline std::vector<LocalCheck> find_local_checks(const StabilizerNetworkDescription& desc,
                                                 const CheckSpace& cs) {
    const size_t n_cols = 2 * desc.fusions.size();
    std::vector<std::vector<int32_t>> windows = desc.windows;
    if (windows.empty()) {
        std::vector<int32_t> all(desc.fusions.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int32_t>(i);
        windows.push_back(std::move(all));
    }

    std::set<std::vector<size_t>> seen;
    std::vector<LocalCheck> found;
    for (size_t w = 0; w < windows.size(); ++w) {
        std::vector<char> inside(n_cols, 0);
        for (int32_t f : windows[w]) {
            inside[2 * static_cast<size_t>(f)] = 1;
            inside[2 * static_cast<size_t>(f) + 1] = 1;
        }
        std::vector<size_t> outside_cols;
        for (size_t c = 0; c < n_cols; ++c)
            if (!inside[c]) outside_cols.push_back(c);

        std::vector<gf2::BitVec> kernel = gf2::kernel_on_columns(cs.outcome_basis, outside_cols);
        if (kernel.empty()) continue;
        if (kernel.size() > 16)
            throw std::runtime_error("window subcode too large to enumerate (" +
                                     std::to_string(kernel.size()) + " dims)");

        // Enumerate the subcode supported in this window and keep all
        // elements of minimal weight.
        size_t min_weight = SIZE_MAX;
        std::vector<gf2::BitVec> best;
        const size_t count = (size_t(1) << kernel.size());
        for (size_t mask = 1; mask < count; ++mask) {
            gf2::BitVec combo(cs.outcome_basis.n_rows());
            for (size_t i = 0; i < kernel.size(); ++i)
                if ((mask >> i) & 1) combo ^= kernel[i];
            gf2::BitVec vec(n_cols);
            for (size_t r = 0; r < cs.outcome_basis.n_rows(); ++r)
                if (combo.get(r)) vec ^= cs.outcome_basis.row(r);
            size_t wgt = vec.popcount();
            if (wgt == 0) continue;
            if (wgt < min_weight) {
                min_weight = wgt;
                best.clear();
            }
            if (wgt == min_weight) best.push_back(std::move(vec));
        }
        for (gf2::BitVec& v : best) {
            std::vector<size_t> key = v.ones();
            if (seen.insert(key).second) found.push_back(LocalCheck{std::move(v), static_cast<int>(w)});
        }
    }
    return found;
}

struct DerivedGraphs {
    SyndromeGraph primal;
    SyndromeGraph dual;
    std::vector<FusionRef> fusions;
    std::vector<LocalCheck> checks;
    std::vector<int> check_component;  // 0 = primal, 1 = dual
    std::vector<int> check_node;       // node id within its graph
};

// Assembles the paired syndrome graphs from a set of local checks.
// Fails with a diagnostic when the checks do not form a surface-code-type
// structure (every outcome in exactly two checks, exactly two components).
inline DerivedGraphs assemble_syndrome_graphs(const StabilizerNetworkDescription& desc,
                                              std::vector<LocalCheck> checks) {
    const size_t n_fusions = desc.fusions.size();
    const size_t n_cols = 2 * n_fusions;

    std::vector<std::array<int, 2>> owners(n_cols, {-1, -1});
    for (size_t c = 0; c < checks.size(); ++c) {
        for (size_t col : checks[c].outcomes.ones()) {
            if (owners[col][0] == -1)
                owners[col][0] = static_cast<int>(c);
            else if (owners[col][1] == -1)
                owners[col][1] = static_cast<int>(c);
            else
                throw std::runtime_error(
                    "network is not of surface-code type: outcome " + std::to_string(col) +
                    " participates in more than two minimal checks");
        }
    }
    for (size_t col = 0; col < n_cols; ++col)
        if (owners[col][1] == -1)
            throw std::runtime_error(
                "network is not of surface-code type: outcome " + std::to_string(col) +
                " participates in " + std::to_string(owners[col][0] == -1 ? 0 : 1) +
                " minimal checks (need exactly 2)");

    // Connected components of the check graph.
    std::vector<int> comp(checks.size(), -1);
    int n_comp = 0;
    for (size_t start = 0; start < checks.size(); ++start) {
        if (comp[start] != -1) continue;
        std::vector<size_t> stack{start};
        comp[start] = n_comp;
        while (!stack.empty()) {
            size_t c = stack.back();
            stack.pop_back();
            for (size_t col : checks[c].outcomes.ones()) {
                for (int o : owners[col]) {
                    if (comp[static_cast<size_t>(o)] == -1) {
                        comp[static_cast<size_t>(o)] = n_comp;
                        stack.push_back(static_cast<size_t>(o));
                    }
                }
            }
        }
        ++n_comp;
    }
    if (n_comp != 2)
        throw std::runtime_error("network is not of surface-code type: check graph has " +
                                 std::to_string(n_comp) + " components (need exactly 2)");

    // Canonical labeling: when geometry is available, the component holding
    // even-parity anchors is the primal one.
    if (!desc.window_anchor.empty()) {
        for (size_t i = 0; i < checks.size(); ++i) {
            if (site_parity(desc.window_anchor[checks[i].window]) == 0) {
                if (comp[i] == 1)
                    for (int& c : comp) c ^= 1;
                break;
            }
        }
    }

    // Deterministic node ordering: by window anchor when available, else by
    // discovery order.
    std::vector<size_t> order(checks.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (!desc.window_anchor.empty()) {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return site_index(desc.window_anchor[checks[a].window], desc.L) <
                   site_index(desc.window_anchor[checks[b].window], desc.L);
        });
    }

    DerivedGraphs out;
    out.check_component = comp;
    out.check_node.assign(checks.size(), -1);
    int counts[2] = {0, 0};
    for (size_t i : order) out.check_node[i] = counts[comp[i]]++;
    out.primal.n_nodes = counts[0];
    out.dual.n_nodes = counts[1];
    out.primal.node_sites.resize(static_cast<size_t>(counts[0]));
    out.dual.node_sites.resize(static_cast<size_t>(counts[1]));
    if (!desc.window_anchor.empty()) {
        for (size_t i = 0; i < checks.size(); ++i) {
            Coord a = desc.window_anchor[checks[i].window];
            (comp[i] == 0 ? out.primal : out.dual).node_sites[out.check_node[i]] = a;
        }
    }

    out.fusions.resize(n_fusions);
    for (size_t f = 0; f < n_fusions; ++f) {
        for (int which = 0; which < 2; ++which) {  // 0: XX outcome, 1: ZZ outcome
            size_t col = 2 * f + static_cast<size_t>(which);
            int c1 = owners[col][0], c2 = owners[col][1];
            if (comp[c1] != comp[c2])
                throw std::runtime_error("outcome joins checks of different components");
            SyndromeGraph& g = comp[c1] == 0 ? out.primal : out.dual;
            GraphEdge e;
            e.u = std::min(out.check_node[c1], out.check_node[c2]);
            e.v = std::max(out.check_node[c1], out.check_node[c2]);
            e.label = which == 0 ? BasisLabel::XX : BasisLabel::ZZ;
            e.fusion = static_cast<int32_t>(f);
            if (!desc.window_anchor.empty() && desc.L > 0) {
                // Wrap bits from the geometric embedding of the two anchors.
                Coord a1 = g.node_sites[e.u], a2 = g.node_sites[e.v];
                int d[3] = {a2.x - a1.x, a2.y - a1.y, a2.z - a1.z};
                int L = desc.L;
                for (int k = 0; k < 3; ++k) {
                    int dk = d[k];
                    int centered = detail::mod(dk + L / 2, L) - L / 2;
                    if (centered != dk) e.wrap |= static_cast<uint8_t>(1u << k);
                }
            }
            int32_t edge_id = static_cast<int32_t>(g.edges.size());
            g.edges.push_back(e);
            if (comp[c1] == 0) {
                out.fusions[f].primal_edge = edge_id;
                if (which == 0) out.fusions[f].xx_in_primal = true;
            } else {
                out.fusions[f].dual_edge = edge_id;
            }
        }
    }
    out.primal.finalize_adjacency();
    out.dual.finalize_adjacency();
    out.checks = std::move(checks);
    return out;
}

inline DerivedGraphs derive_syndrome_graph(const StabilizerNetworkDescription& desc) {
    CheckSpace cs = derive_check_space(desc);
    std::vector<LocalCheck> checks = find_local_checks(desc, cs);
    return assemble_syndrome_graphs(desc, std::move(checks));
}

}  // namespace fbsim
