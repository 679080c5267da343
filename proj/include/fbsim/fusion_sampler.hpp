#pragma once

#include <stdexcept>

#include "fbsim/rng.hpp"
#include "fbsim/syndrome_graph.hpp"

namespace fbsim {

// Per-photon loss l (transmission t = 1 - l) and per-outcome bit-flip
// probability p_m.
struct ErrorParams {
    double loss = 0.0;
    double p_m = 0.0;

    double transmission() const { return 1.0 - loss; }

    void validate() const {
        if (!(loss >= 0.0 && loss <= 1.0))
            throw std::invalid_argument("loss must lie in [0, 1]");
        if (!(p_m >= 0.0 && p_m <= 0.5))
            throw std::invalid_argument("p_m must lie in [0, 1/2]");
    }
    bool operator==(const ErrorParams&) const = default;
};

enum class FailBasis : uint8_t { XX = 0, ZZ = 1 };

inline BasisLabel to_label(FailBasis b) { return b == FailBasis::XX ? BasisLabel::XX : BasisLabel::ZZ; }

// The choice made before a fusion: boosting (p_fail 1/4 instead of 1/2, at
// the cost of two extra photons) and which stabilizer survives a failure.
// An XX-fail fusion measures XX and erases ZZ when it fails.
struct FusionConfig {
    bool boosted = false;
    FailBasis fail_basis = FailBasis::XX;

    double p_fail_intrinsic() const { return boosted ? 0.25 : 0.5; }
    bool operator==(const FusionConfig&) const = default;
};

struct OutcomeProbs {
    double success = 0.0;
    double failure = 0.0;
    double loss = 0.0;
};

// Unboosted: (t^2/2, t^2/2, 1-t^2). Boosted: (3t^4/4, t^4/4, 1-t^4).
inline OutcomeProbs outcome_probabilities(FusionConfig config, ErrorParams params) {
    params.validate();
    double t = params.transmission();
    if (config.boosted) {
        double t4 = t * t * t * t;
        return OutcomeProbs{0.75 * t4, 0.25 * t4, 1.0 - t4};
    }
    double t2 = t * t;
    return OutcomeProbs{0.5 * t2, 0.5 * t2, 1.0 - t2};
}

// Probability that the given outcome is erased: the failure basis survives a
// failure, so it is erased only on loss; the other basis is erased on loss
// or failure.
inline double erasure_probability(FusionConfig config, ErrorParams params, BasisLabel which) {
    OutcomeProbs p = outcome_probabilities(config, params);
    if (which == to_label(config.fail_basis)) return p.loss;
    return p.loss + p.failure;
}

enum class OutcomeClass : uint8_t { Success = 0, Failure = 1, Loss = 2 };

// One measurement bit: present or erased, with the sampled parity and the
// ground-truth parity carried for end-to-end bookkeeping. An error is a
// sampled parity that differs from the truth.
struct MeasuredBit {
    bool measured = false;
    bool sampled = false;
    bool truth = false;

    bool error() const { return measured && sampled != truth; }
};

struct FusionOutcome {
    OutcomeClass cls = OutcomeClass::Loss;
    MeasuredBit xx;
    MeasuredBit zz;
};

namespace detail {

inline MeasuredBit sample_measured_bit(bool truth, double p_m, Rng& rng) {
    MeasuredBit b;
    b.measured = true;
    b.truth = truth;
    b.sampled = bernoulli(rng, p_m) ? !truth : truth;
    return b;
}

}  // namespace detail

// Draws the outcome class, then parities. Ground-truth parities are uniform;
// each obtained outcome is independently flipped with probability p_m.
inline FusionOutcome sample_fusion(FusionConfig config, ErrorParams params, Rng& rng) {
    OutcomeProbs p = outcome_probabilities(config, params);
    double u = uniform01(rng);
    FusionOutcome out;
    bool truth_xx = bernoulli(rng, 0.5);
    bool truth_zz = bernoulli(rng, 0.5);
    out.xx.truth = truth_xx;
    out.zz.truth = truth_zz;
    if (u < p.success) {
        out.cls = OutcomeClass::Success;
        out.xx = detail::sample_measured_bit(truth_xx, params.p_m, rng);
        out.zz = detail::sample_measured_bit(truth_zz, params.p_m, rng);
    } else if (u < p.success + p.failure) {
        out.cls = OutcomeClass::Failure;
        if (config.fail_basis == FailBasis::XX)
            out.xx = detail::sample_measured_bit(truth_xx, params.p_m, rng);
        else
            out.zz = detail::sample_measured_bit(truth_zz, params.p_m, rng);
    } else {
        out.cls = OutcomeClass::Loss;
    }
    return out;
}

}  // namespace fbsim
