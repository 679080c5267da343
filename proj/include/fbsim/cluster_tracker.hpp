#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Incremental connected components of erased edges with per-cluster
// exposure. Exposure of a cluster sums over the distinct edges adjacent to
// its nodes, excluding erased edges internal to the cluster: an unmeasured
// edge contributes 1, a measured edge contributes the accretion weight a.
// An edge touching a cluster at both endpoints counts once.
// Wrap parity per cluster is tracked through node offsets so a cluster that
// closes a non-contractible cycle is flagged on the axes it wraps.
class ClusterTracker {
public:
    struct EdgeExposure {
        double chi = 0.0;
        bool intra = false;
    };

    ClusterTracker(const SyndromeGraph& graph, double accretion)
        : g_(&graph), a_(accretion) {
        if (!(accretion >= 0.0 && accretion < 1.0))
            throw std::invalid_argument("accretion must lie in [0, 1)");
        reset();
    }

    void reset() {
        const size_t n = static_cast<size_t>(g_->n_nodes);
        parent_.resize(n);
        size_.assign(n, 1);
        par_.assign(n, 0);
        expo_.resize(n);
        wrap_.assign(n, 0);
        head_.resize(n);
        tail_.resize(n);
        next_.assign(n, -1);
        for (size_t i = 0; i < n; ++i) {
            parent_[i] = static_cast<int32_t>(i);
            expo_[i] = static_cast<double>(g_->degree(static_cast<int32_t>(i)));
            head_[i] = tail_[i] = static_cast<int32_t>(i);
        }
        state_.assign(g_->edges.size(), EdgeState::Unmeasured);
        global_wrap_ = 0;
        n_erased_ = 0;
        n_measured_ = 0;
    }

    double accretion() const { return a_; }
    EdgeState edge_state(int32_t edge) const { return state_[static_cast<size_t>(edge)]; }
    size_t n_erased() const { return n_erased_; }
    size_t n_measured() const { return n_measured_; }

    double cluster_exposure(int32_t node) { return expo_[static_cast<size_t>(find(node).root)]; }

    uint8_t cluster_wrap(int32_t node) { return wrap_[static_cast<size_t>(find(node).root)]; }

    // Union over all clusters of the axes they wrap.
    uint8_t wrapping_axes() const { return global_wrap_; }
    bool has_wrapping_cluster() const { return global_wrap_ != 0; }

    bool is_intra_cluster(int32_t edge) {
        require_unmeasured(edge, "is_intra_cluster");
        const GraphEdge& e = g_->edges[static_cast<size_t>(edge)];
        return find(e.u).root == find(e.v).root;
    }

    // Edge exposure: product of the end-cluster exposures with this edge's
    // own contribution excluded from each factor.
    EdgeExposure edge_exposure(int32_t edge) {
        require_unmeasured(edge, "edge_exposure");
        const GraphEdge& e = g_->edges[static_cast<size_t>(edge)];
        Find fu = find(e.u), fv = find(e.v);
        if (fu.root == fv.root) return EdgeExposure{0.0, true};
        return EdgeExposure{(expo_[static_cast<size_t>(fu.root)] - 1.0) *
                                (expo_[static_cast<size_t>(fv.root)] - 1.0),
                            false};
    }

    void resolve(int32_t edge, EdgeState new_state) {
        require_unmeasured(edge, "resolve");
        const GraphEdge& e = g_->edges[static_cast<size_t>(edge)];
        Find fu = find(e.u), fv = find(e.v);
        if (new_state == EdgeState::Measured) {
            state_[static_cast<size_t>(edge)] = EdgeState::Measured;
            ++n_measured_;
            // The edge was counted as unmeasured (1) once per adjacent
            // cluster; it now contributes a instead.
            expo_[static_cast<size_t>(fu.root)] -= (1.0 - a_);
            if (fv.root != fu.root) expo_[static_cast<size_t>(fv.root)] -= (1.0 - a_);
            return;
        }
        if (new_state != EdgeState::Erased)
            throw std::logic_error("resolve only accepts Measured or Erased");
        state_[static_cast<size_t>(edge)] = EdgeState::Erased;
        ++n_erased_;
        uint8_t edge_par = e.wrap;
        if (fu.root == fv.root) {
            // Closing a cycle: drop the edge's own unmeasured unit and record
            // the cycle's wrap parity.
            expo_[static_cast<size_t>(fu.root)] -= 1.0;
            uint8_t cyc = static_cast<uint8_t>(fu.parity ^ fv.parity ^ edge_par);
            wrap_[static_cast<size_t>(fu.root)] |= cyc;
            global_wrap_ |= cyc;
            return;
        }
        int32_t big = fu.root, small = fv.root;
        uint8_t pbig = fu.parity, psmall = fv.parity;
        if (size_[static_cast<size_t>(big)] < size_[static_cast<size_t>(small)]) {
            std::swap(big, small);
            std::swap(pbig, psmall);
        }
        // Boundary edges shared by both clusters would be double counted by
        // the plain sum; walk the smaller cluster and drop one copy of each.
        double merged = expo_[static_cast<size_t>(big)] + expo_[static_cast<size_t>(small)] - 2.0;
        for (int32_t x = head_[static_cast<size_t>(small)]; x != -1;
             x = next_[static_cast<size_t>(x)]) {
            auto [ib, ie] = g_->incident(x);
            for (const int32_t* it = ib; it != ie; ++it) {
                EdgeState st = state_[static_cast<size_t>(*it)];
                if (st == EdgeState::Erased) continue;  // internal or the new edge
                int32_t y = g_->other_end(*it, x);
                if (find(y).root == big) merged -= (st == EdgeState::Unmeasured ? 1.0 : a_);
            }
        }
        // Attach small below big; parity of small's root relative to big's
        // follows from the two find parities and the edge crossing.
        parent_[static_cast<size_t>(small)] = big;
        par_[static_cast<size_t>(small)] = static_cast<uint8_t>(pbig ^ psmall ^ edge_par);
        size_[static_cast<size_t>(big)] += size_[static_cast<size_t>(small)];
        next_[static_cast<size_t>(tail_[static_cast<size_t>(big)])] =
            head_[static_cast<size_t>(small)];
        tail_[static_cast<size_t>(big)] = tail_[static_cast<size_t>(small)];
        expo_[static_cast<size_t>(big)] = merged;
        wrap_[static_cast<size_t>(big)] |= wrap_[static_cast<size_t>(small)];
    }

    // Root and wrap parity of the path from `node` to its root.
    struct Find {
        int32_t root;
        uint8_t parity;
    };

    Find find(int32_t node) {
        int32_t r = node;
        uint8_t p = 0;
        while (parent_[static_cast<size_t>(r)] != r) {
            p ^= par_[static_cast<size_t>(r)];
            r = parent_[static_cast<size_t>(r)];
        }
        // Path compression, second pass.
        int32_t cur = node;
        uint8_t cur_p = 0;
        while (parent_[static_cast<size_t>(cur)] != cur) {
            int32_t next = parent_[static_cast<size_t>(cur)];
            uint8_t next_p = static_cast<uint8_t>(cur_p ^ par_[static_cast<size_t>(cur)]);
            parent_[static_cast<size_t>(cur)] = r;
            par_[static_cast<size_t>(cur)] = static_cast<uint8_t>(p ^ cur_p);
            cur = next;
            cur_p = next_p;
        }
        return Find{r, p};
    }

private:
    void require_unmeasured(int32_t edge, const char* op) const {
        if (edge < 0 || static_cast<size_t>(edge) >= state_.size())
            throw std::logic_error(std::string(op) + ": edge id out of range");
        if (state_[static_cast<size_t>(edge)] != EdgeState::Unmeasured)
            throw std::logic_error(std::string(op) + ": edge " + std::to_string(edge) +
                                   " already resolved");
    }

    const SyndromeGraph* g_;
    double a_;
    std::vector<int32_t> parent_;
    std::vector<int32_t> size_;
    std::vector<uint8_t> par_;    // wrap parity toward parent
    std::vector<double> expo_;    // valid at roots
    std::vector<uint8_t> wrap_;   // sticky wrap bits, valid at roots
    // Member lists per root for smaller-into-larger boundary dedup.
    std::vector<int32_t> head_;
    std::vector<int32_t> tail_;
    std::vector<int32_t> next_;
    std::vector<EdgeState> state_;
    uint8_t global_wrap_ = 0;
    size_t n_erased_ = 0;
    size_t n_measured_ = 0;
};

}  // namespace fbsim
