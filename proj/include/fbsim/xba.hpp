#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "fbsim/cluster_tracker.hpp"
#include "fbsim/fusion_sampler.hpp"
#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Decision parameters: accretion a weighs measured boundary edges in
// exposure, the exposure exponent shapes the intermediate bias, and squeeze
// compresses non-trivial biases toward 1/2.
struct XbaParams {
    double accretion = 0.5;
    double exponent = 0.5;
    double squeeze = 0.2;

    void validate() const {
        if (!(accretion >= 0.0 && accretion < 1.0))
            throw std::invalid_argument("accretion must lie in [0, 1)");
        if (!(exponent > 0.0)) throw std::invalid_argument("exposure exponent must be positive");
        if (!(squeeze >= 0.0 && squeeze <= 1.0))
            throw std::invalid_argument("squeeze must lie in [0, 1]");
    }
};

// Intermediate bias from the two edge exposures. Values near 0 mark the
// first edge as the important one. Both exposures zero means neither side
// has growth potential; 1/2 by convention.
inline double intermediate_bias(double chi1, double chi2, double exponent) {
    if (chi1 < 0.0 || chi2 < 0.0) throw std::invalid_argument("exposures must be non-negative");
    if (chi1 == 0.0 && chi2 == 0.0) return 0.5;
    if (chi1 >= chi2) return 0.5 * std::pow(chi2 / chi1, exponent);
    return 1.0 - 0.5 * std::pow(chi1 / chi2, exponent);
}

// Final bias. Trivial fusions (an intra-cluster edge on either side) pin the
// bias to 0 or 1; both intra pins it to 0. Otherwise the squeeze narrows the
// intermediate bias around 1/2.
inline double final_bias(double ib, bool intra1, bool intra2, double squeeze) {
    if (intra2) return 0.0;
    if (intra1) return 1.0;
    return (1.0 - squeeze) * ib + 0.5 * squeeze;
}

// Cost of one fusion option: (1-bias) * P(E1 erased) + bias * P(E2 erased),
// where E1 is the primal edge. `e1_is_xx` routes the per-basis erasure
// probabilities through the fusion's outcome mapping.
inline double option_cost(double bias, FusionConfig config, ErrorParams params, bool e1_is_xx) {
    double p1 = erasure_probability(config, params, e1_is_xx ? BasisLabel::XX : BasisLabel::ZZ);
    double p2 = erasure_probability(config, params, e1_is_xx ? BasisLabel::ZZ : BasisLabel::XX);
    return (1.0 - bias) * p1 + bias * p2;
}

// Option order doubles as the deterministic tie-break: boosted before
// unboosted, XX-fail before ZZ-fail.
inline constexpr std::array<FusionConfig, 4> kFusionOptions = {
    FusionConfig{true, FailBasis::XX},
    FusionConfig{true, FailBasis::ZZ},
    FusionConfig{false, FailBasis::XX},
    FusionConfig{false, FailBasis::ZZ},
};

struct BiasDecision {
    double chi1 = 0.0, chi2 = 0.0;
    bool intra1 = false, intra2 = false;
    double ib = 0.5;
    double bias = 0.5;
    FusionConfig chosen;
    double cost = 0.0;

    bool trivial() const { return intra1 || intra2; }
};

inline FusionConfig argmin_option(double bias, ErrorParams params, bool e1_is_xx, double* best_cost) {
    FusionConfig best = kFusionOptions[0];
    double bc = option_cost(bias, best, params, e1_is_xx);
    for (size_t i = 1; i < kFusionOptions.size(); ++i) {
        double c = option_cost(bias, kFusionOptions[i], params, e1_is_xx);
        if (c < bc) {
            bc = c;
            best = kFusionOptions[i];
        }
    }
    if (best_cost) *best_cost = bc;
    return best;
}

// Full decision for one fusion from the live trackers: exposures, bias, and
// the cost-minimizing configuration.
inline BiasDecision choose_config(ClusterTracker& primal, ClusterTracker& dual,
                                  const FusionRef& fusion, ErrorParams params,
                                  const XbaParams& xba) {
    BiasDecision d;
    ClusterTracker::EdgeExposure e1 = primal.edge_exposure(fusion.primal_edge);
    ClusterTracker::EdgeExposure e2 = dual.edge_exposure(fusion.dual_edge);
    d.chi1 = e1.chi;
    d.chi2 = e2.chi;
    d.intra1 = e1.intra;
    d.intra2 = e2.intra;
    if (!d.trivial()) d.ib = intermediate_bias(d.chi1, d.chi2, xba.exponent);
    d.bias = final_bias(d.ib, d.intra1, d.intra2, xba.squeeze);
    d.chosen = argmin_option(d.bias, params, fusion.xx_in_primal, &d.cost);
    return d;
}

// Static bias arrangement: a fixed position-independent configuration whose
// failure erasures land only on ZZ-labeled edges (the disconnected
// triangular planes).
inline FusionConfig static_config(bool boosted = true) {
    return FusionConfig{boosted, FailBasis::XX};
}

}  // namespace fbsim
