#pragma once

#include <array>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "fbsim/cluster_tracker.hpp"
#include "fbsim/matching.hpp"
#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Decoder view of one edge after a trial: its resolution state and, for
// measured edges, whether the reported parity differs is from the truth.
struct EdgeObservation {
    EdgeState state = EdgeState::Unmeasured;
    bool error = false;
};

enum class FailureCause : uint8_t { None = 0, LogicalErasure = 1, MatchingMismatch = 2 };

inline const char* to_string(FailureCause c) {
    switch (c) {
        case FailureCause::None: return "none";
        case FailureCause::LogicalErasure: return "logical-erasure";
        default: return "matching-mismatch";
    }
}

struct DecodeResult {
    std::array<bool, 3> primal_fail{false, false, false};
    std::array<bool, 3> dual_fail{false, false, false};
    FailureCause cause = FailureCause::None;

    bool any() const {
        for (int k = 0; k < 3; ++k)
            if (primal_fail[k] || dual_fail[k]) return true;
        return false;
    }
};

namespace detail {

// Wrap axes of erased components: bit k set when some cluster of erased
// edges closes a cycle with odd winding along axis k.
inline uint8_t erased_wrap_axes(const SyndromeGraph& g, std::span<const EdgeObservation> obs) {
    ClusterTracker t(g, 0.0);
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (obs[e].state == EdgeState::Erased) t.resolve(static_cast<int32_t>(e), EdgeState::Erased);
    return t.wrapping_axes();
}

}  // namespace detail

// Loss-only decoding: logical failure along an axis iff some erased
// connected component has odd wrap parity on that axis. Optimal for the
// erasure channel.
inline std::array<bool, 3> decode_erasure_only_graph(const SyndromeGraph& g,
                                                     std::span<const EdgeObservation> obs) {
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (obs[e].state == EdgeState::Measured && obs[e].error)
            throw std::invalid_argument(
                "decode_erasure_only requires a flip-free channel (p_m = 0)");
    uint8_t w = detail::erased_wrap_axes(g, obs);
    return {bool(w & 1), bool(w & 2), bool(w & 4)};
}

struct MatchingDecodeInfo {
    int defects = 0;
    long long correction_weight = 0;  // measured edges traversed by matched paths
    uint8_t erased_wrap = 0;
    uint8_t residual_wrap = 0;
};

// Erasure-aware minimum-weight perfect matching on one graph. Measured
// edges weigh 1, erased edges 0, so corrections travel free through erased
// clusters. Logical failure along an axis iff a wrapping erased cluster
// exists or the residual (error + correction) has odd wrap parity there.
inline std::array<bool, 3> decode_matching_graph(const SyndromeGraph& g,
                                                 std::span<const EdgeObservation> obs,
                                                 MatchingDecodeInfo* info = nullptr) {
    const size_t n_nodes = static_cast<size_t>(g.n_nodes);

    uint8_t fail_bits = detail::erased_wrap_axes(g, obs);

    // Syndrome from measured-edge errors; erased edges carry no parity.
    std::vector<char> syndrome(n_nodes, 0);
    uint8_t error_wrap = 0;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (obs[e].state == EdgeState::Unmeasured)
            throw std::invalid_argument("decode_matching requires every edge resolved");
        if (obs[e].state == EdgeState::Measured && obs[e].error) {
            syndrome[static_cast<size_t>(g.edges[e].u)] ^= 1;
            syndrome[static_cast<size_t>(g.edges[e].v)] ^= 1;
            error_wrap ^= g.edges[e].wrap;
        }
    }
    std::vector<int32_t> defects;
    for (size_t v = 0; v < n_nodes; ++v)
        if (syndrome[v]) defects.push_back(static_cast<int32_t>(v));
    if (defects.size() % 2 != 0)
        throw std::logic_error("odd defect count on a closed manifold");

    uint8_t corr_wrap = 0;
    long long corr_weight = 0;
    if (!defects.empty()) {
        // 0-1 BFS distances between defects.
        std::vector<int32_t> dist(n_nodes);
        std::vector<int32_t> parent(n_nodes);
        std::vector<char> done(n_nodes);
        std::deque<int32_t> dq;
        auto bfs = [&](int32_t src, int32_t stop_at) {
            std::fill(dist.begin(), dist.end(), INT32_MAX);
            std::fill(parent.begin(), parent.end(), -1);
            std::fill(done.begin(), done.end(), 0);
            dq.clear();
            dist[static_cast<size_t>(src)] = 0;
            dq.push_back(src);
            while (!dq.empty()) {
                int32_t u = dq.front();
                dq.pop_front();
                if (done[static_cast<size_t>(u)]) continue;
                done[static_cast<size_t>(u)] = 1;
                if (u == stop_at) return;
                auto [b, e] = g.incident(u);
                for (const int32_t* it = b; it != e; ++it) {
                    const GraphEdge& ge = g.edges[static_cast<size_t>(*it)];
                    int w = obs[static_cast<size_t>(*it)].state == EdgeState::Erased ? 0 : 1;
                    int32_t v = ge.u == u ? ge.v : ge.u;
                    int32_t nd = dist[static_cast<size_t>(u)] + w;
                    if (nd < dist[static_cast<size_t>(v)]) {
                        dist[static_cast<size_t>(v)] = nd;
                        parent[static_cast<size_t>(v)] = *it;
                        if (w == 0)
                            dq.push_front(v);
                        else
                            dq.push_back(v);
                    }
                }
            }
        };

        const int nd = static_cast<int>(defects.size());
        std::vector<std::vector<long long>> dmat(static_cast<size_t>(nd),
                                                 std::vector<long long>(static_cast<size_t>(nd), 0));
        for (int i = 0; i < nd; ++i) {
            bfs(defects[static_cast<size_t>(i)], -1);
            for (int j = 0; j < nd; ++j)
                dmat[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    dist[static_cast<size_t>(defects[static_cast<size_t>(j)])];
        }
        std::vector<int> mate = min_weight_perfect_matching(dmat);

        // Wrap parity of the realized shortest paths of the matching.
        for (int i = 0; i < nd; ++i) {
            int j = mate[static_cast<size_t>(i)];
            if (j < i) continue;
            int32_t a = defects[static_cast<size_t>(i)];
            int32_t b = defects[static_cast<size_t>(j)];
            bfs(a, b);
            int32_t cur = b;
            while (cur != a) {
                int32_t pe = parent[static_cast<size_t>(cur)];
                corr_wrap ^= g.edges[static_cast<size_t>(pe)].wrap;
                if (obs[static_cast<size_t>(pe)].state == EdgeState::Measured) ++corr_weight;
                cur = g.other_end(pe, cur);
            }
        }
    }

    if (info) {
        info->defects = static_cast<int>(defects.size());
        info->correction_weight = corr_weight;
        info->erased_wrap = fail_bits;
        info->residual_wrap = static_cast<uint8_t>(error_wrap ^ corr_wrap);
    }
    fail_bits |= static_cast<uint8_t>(error_wrap ^ corr_wrap);
    return {bool(fail_bits & 1), bool(fail_bits & 2), bool(fail_bits & 4)};
}

// Full-network decode. The loss-only channel takes the erasure path (both
// decoders agree there); otherwise both graphs are decoded independently by
// matching.
inline DecodeResult decode_network(const SyndromeGraph& primal, const SyndromeGraph& dual,
                                   std::span<const EdgeObservation> primal_obs,
                                   std::span<const EdgeObservation> dual_obs, bool flip_free) {
    DecodeResult r;
    if (flip_free) {
        r.primal_fail = decode_erasure_only_graph(primal, primal_obs);
        r.dual_fail = decode_erasure_only_graph(dual, dual_obs);
        if (r.any()) r.cause = FailureCause::LogicalErasure;
        return r;
    }
    r.primal_fail = decode_matching_graph(primal, primal_obs);
    r.dual_fail = decode_matching_graph(dual, dual_obs);
    if (r.any()) {
        uint8_t er = detail::erased_wrap_axes(primal, primal_obs) |
                     detail::erased_wrap_axes(dual, dual_obs);
        r.cause = er ? FailureCause::LogicalErasure : FailureCause::MatchingMismatch;
    }
    return r;
}

}  // namespace fbsim
