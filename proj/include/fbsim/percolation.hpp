#pragma once

#include <stdexcept>

#include "fbsim/cluster_tracker.hpp"
#include "fbsim/rng.hpp"
#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Erases each edge i.i.d. and reports the fraction of trials in which some
// erased component wraps the torus along any axis (non-contractible
// spanning). Validation tool for graph construction.
inline double erasure_percolation_probe(const SyndromeGraph& graph, double erasure_rate,
                                        int trials, uint64_t seed) {
    if (!(erasure_rate >= 0.0 && erasure_rate <= 1.0))
        throw std::invalid_argument("erasure rate must lie in [0, 1]");
    if (trials <= 0) throw std::invalid_argument("trials must be positive");
    ClusterTracker tracker(graph, 0.0);
    int spanning = 0;
    for (int t = 0; t < trials; ++t) {
        tracker.reset();
        Rng rng = make_rng(derive_seed(seed, 0, 0, static_cast<uint64_t>(t)));
        for (size_t e = 0; e < graph.edges.size(); ++e) {
            if (bernoulli(rng, erasure_rate))
                tracker.resolve(static_cast<int32_t>(e), EdgeState::Erased);
        }
        if (tracker.has_wrapping_cluster()) ++spanning;
    }
    return static_cast<double>(spanning) / static_cast<double>(trials);
}

}  // namespace fbsim
