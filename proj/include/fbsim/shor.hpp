#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fbsim/fusion_sampler.hpp"
#include "fbsim/pauli.hpp"
#include "fbsim/rng.hpp"

namespace fbsim {

// The (2,2) Shor code, a [[4,1,2]] code. Encoded fusions run four physical
// fusions slot by slot; the encoded XX and ZZ outcomes are recovered from
// redundant products of the slot outcomes.
struct ShorCodeSpec {
    static constexpr int kQubits = 4;

    static std::vector<PauliOp> stabilizers() {
        PauliOp xxxx(4);
        for (int q = 0; q < 4; ++q) xxxx.set_x(static_cast<size_t>(q));
        PauliOp z01(4);
        z01.set_z(0);
        z01.set_z(1);
        PauliOp z23(4);
        z23.set_z(2);
        z23.set_z(3);
        return {xxxx, z01, z23};
    }
    static PauliOp logical_x() {
        PauliOp p(4);
        p.set_x(0);
        p.set_x(1);
        return p;
    }
    static PauliOp logical_z() {
        PauliOp p(4);
        p.set_z(0);
        p.set_z(2);
        return p;
    }
};

// What an individual slot fusion produced.
enum class SlotResult : uint8_t { Both = 0, XXOnly = 1, ZZOnly = 2, None = 3 };

inline bool slot_has_xx(SlotResult r) { return r == SlotResult::Both || r == SlotResult::XXOnly; }
inline bool slot_has_zz(SlotResult r) { return r == SlotResult::Both || r == SlotResult::ZZOnly; }

struct SlotOutcome {
    SlotResult result = SlotResult::None;
    FusionConfig config;
    MeasuredBit xx;
    MeasuredBit zz;
};

// Encoded XX is recovered from slots {0,1} or {2,3}; encoded ZZ from one
// slot of {0,1} and one of {2,3}. Routes are tried lowest index first; the
// route choice only affects which physical flips propagate to the encoded
// parity.
inline std::pair<MeasuredBit, MeasuredBit> recover_encoded_outcomes(
    const std::array<SlotOutcome, 4>& slots) {
    MeasuredBit xbar, zbar;
    auto xor_bits = [](const MeasuredBit& a, const MeasuredBit& b) {
        MeasuredBit m;
        m.measured = true;
        m.sampled = a.sampled ^ b.sampled;
        m.truth = a.truth ^ b.truth;
        return m;
    };
    if (slot_has_xx(slots[0].result) && slot_has_xx(slots[1].result))
        xbar = xor_bits(slots[0].xx, slots[1].xx);
    else if (slot_has_xx(slots[2].result) && slot_has_xx(slots[3].result))
        xbar = xor_bits(slots[2].xx, slots[3].xx);
    for (int i = 0; i < 2 && !zbar.measured; ++i)
        for (int j = 2; j < 4 && !zbar.measured; ++j)
            if (slot_has_zz(slots[i].result) && slot_has_zz(slots[j].result))
                zbar = xor_bits(slots[static_cast<size_t>(i)].zz, slots[static_cast<size_t>(j)].zz);
    return {xbar, zbar};
}

inline bool encoded_xx_available(const std::array<SlotResult, 4>& r) {
    return (slot_has_xx(r[0]) && slot_has_xx(r[1])) || (slot_has_xx(r[2]) && slot_has_xx(r[3]));
}
inline bool encoded_zz_available(const std::array<SlotResult, 4>& r) {
    return (slot_has_zz(r[0]) || slot_has_zz(r[1])) && (slot_has_zz(r[2]) || slot_has_zz(r[3]));
}

// Expectimax policy for the four-slot sequential game, precomputed on a
// quantized grid of cost weights. The key is the weight beta multiplying
// P(encoded XX erased); the encoded ZZ erasure gets weight 1 - beta.
class StrategyTable {
public:
    static constexpr int kSlots = 4;

    struct BetaEntry {
        std::array<uint8_t, 85> policy{};  // state -> option index
        double value = 0.0;                // expected cost at the root
        double p_xbar_erased = 0.0;        // marginals under the policy
        double p_zbar_erased = 0.0;
    };

    StrategyTable(ErrorParams params, std::vector<FusionConfig> options, int grid_points = 64)
        : params_(params), options_(std::move(options)), grid_(grid_points) {
        params_.validate();
        if (options_.empty()) throw std::invalid_argument("strategy table needs at least one option");
        if (grid_ < 2) throw std::invalid_argument("strategy table needs at least two grid points");
        entries_.resize(static_cast<size_t>(grid_));
        for (int g = 0; g < grid_; ++g)
            build_entry(static_cast<double>(g) / static_cast<double>(grid_ - 1),
                        entries_[static_cast<size_t>(g)]);
    }

    static std::vector<FusionConfig> all_options() {
        return {FusionConfig{true, FailBasis::XX}, FusionConfig{true, FailBasis::ZZ},
                FusionConfig{false, FailBasis::XX}, FusionConfig{false, FailBasis::ZZ}};
    }

    ErrorParams params() const { return params_; }
    const std::vector<FusionConfig>& options() const { return options_; }
    int grid_points() const { return grid_; }

    int beta_index(double beta) const {
        if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
        return static_cast<int>(std::lround(beta * (grid_ - 1)));
    }
    const BetaEntry& entry(int beta_idx) const { return entries_[static_cast<size_t>(beta_idx)]; }

    // State index for a partial history of slot results.
    static int state_index(int slot, int history) { return kStateOffset[static_cast<size_t>(slot)] + history; }

    FusionConfig policy(int beta_idx, int slot, int history) const {
        return options_[entries_[static_cast<size_t>(beta_idx)]
                            .policy[static_cast<size_t>(state_index(slot, history))]];
    }

    double expected_cost(int beta_idx) const { return entries_[static_cast<size_t>(beta_idx)].value; }

private:
    static constexpr std::array<int, 5> kStateOffset = {0, 1, 5, 21, 85};

    struct ResultDist {
        double p_both, p_only, p_none;
        SlotResult only;  // which single outcome a failure leaves
    };

    ResultDist option_dist(const FusionConfig& c) const {
        OutcomeProbs p = outcome_probabilities(c, params_);
        return ResultDist{p.success, p.failure, p.loss,
                          c.fail_basis == FailBasis::XX ? SlotResult::XXOnly : SlotResult::ZZOnly};
    }

    void build_entry(double beta, BetaEntry& e) {
        // Terminal costs over all 4^4 result histories.
        std::array<double, 256> leaf;
        for (int h = 0; h < 256; ++h) {
            std::array<SlotResult, 4> r{};
            for (int i = 0; i < 4; ++i)
                r[static_cast<size_t>(i)] = static_cast<SlotResult>((h >> (2 * i)) & 3);
            double c = 0.0;
            if (!encoded_xx_available(r)) c += beta;
            if (!encoded_zz_available(r)) c += 1.0 - beta;
            leaf[static_cast<size_t>(h)] = c;
        }
        // Backward induction over slots.
        std::array<double, 256> next = leaf;
        std::array<double, 256> cur{};
        for (int slot = kSlots - 1; slot >= 0; --slot) {
            int n_hist = 1 << (2 * slot);
            for (int h = 0; h < n_hist; ++h) {
                double best = 0.0;
                int best_opt = -1;
                for (size_t o = 0; o < options_.size(); ++o) {
                    ResultDist d = option_dist(options_[o]);
                    double v = d.p_both * next[static_cast<size_t>(h)] +
                               d.p_only * next[static_cast<size_t>(
                                              h | (static_cast<int>(d.only) << (2 * slot)))] +
                               d.p_none * next[static_cast<size_t>(h | (3 << (2 * slot)))];
                    if (best_opt < 0 || v < best) {
                        best = v;
                        best_opt = static_cast<int>(o);
                    }
                }
                cur[static_cast<size_t>(h)] = best;
                e.policy[static_cast<size_t>(state_index(slot, h))] = static_cast<uint8_t>(best_opt);
            }
            std::copy(cur.begin(), cur.begin() + n_hist, next.begin());
        }
        e.value = next[0];

        // Forward pass for the marginal encoded erasure probabilities.
        e.p_xbar_erased = 0.0;
        e.p_zbar_erased = 0.0;
        struct Node {
            int slot;
            int history;
            double prob;
        };
        std::vector<Node> stack{{0, 0, 1.0}};
        while (!stack.empty()) {
            Node n = stack.back();
            stack.pop_back();
            if (n.slot == kSlots) {
                std::array<SlotResult, 4> r{};
                for (int i = 0; i < 4; ++i)
                    r[static_cast<size_t>(i)] = static_cast<SlotResult>((n.history >> (2 * i)) & 3);
                if (!encoded_xx_available(r)) e.p_xbar_erased += n.prob;
                if (!encoded_zz_available(r)) e.p_zbar_erased += n.prob;
                continue;
            }
            FusionConfig c = options_[e.policy[static_cast<size_t>(state_index(n.slot, n.history))]];
            ResultDist d = option_dist(c);
            if (d.p_both > 0)
                stack.push_back({n.slot + 1, n.history, n.prob * d.p_both});
            if (d.p_only > 0)
                stack.push_back({n.slot + 1,
                                 n.history | (static_cast<int>(d.only) << (2 * n.slot)),
                                 n.prob * d.p_only});
            if (d.p_none > 0)
                stack.push_back({n.slot + 1, n.history | (3 << (2 * n.slot)), n.prob * d.p_none});
        }
    }

    ErrorParams params_;
    std::vector<FusionConfig> options_;
    int grid_;
    std::vector<BetaEntry> entries_;
};

struct EncodedFusionResult {
    FusionOutcome outcome;             // encoded-level result (xx = encoded XX)
    std::array<SlotOutcome, 4> slots;  // transcript
    int boosted_slots = 0;
};

namespace detail {

// Executes four slots with configs supplied per (slot, history). Slot
// ground truths respect the code constraints: XX parities of {0,1} and
// {2,3} both multiply to the encoded XX truth, and ZZ parities are equal
// within each half.
template <typename Chooser>
EncodedFusionResult run_encoded_slots(Chooser&& choose, ErrorParams params, Rng& rng) {
    bool xbar_truth = bernoulli(rng, 0.5);
    bool zbar_truth = bernoulli(rng, 0.5);
    std::array<bool, 4> xx_truth, zz_truth;
    xx_truth[0] = bernoulli(rng, 0.5);
    xx_truth[1] = xx_truth[0] ^ xbar_truth;
    xx_truth[2] = bernoulli(rng, 0.5);
    xx_truth[3] = xx_truth[2] ^ xbar_truth;
    zz_truth[0] = zz_truth[1] = bernoulli(rng, 0.5);
    zz_truth[2] = zz_truth[3] = zz_truth[0] ^ zbar_truth;

    EncodedFusionResult res;
    int history = 0;
    for (int slot = 0; slot < 4; ++slot) {
        FusionConfig config = choose(slot, history);
        SlotOutcome& so = res.slots[static_cast<size_t>(slot)];
        so.config = config;
        if (config.boosted) ++res.boosted_slots;
        OutcomeProbs p = outcome_probabilities(config, params);
        double u = uniform01(rng);
        if (u < p.success) {
            so.result = SlotResult::Both;
            so.xx = sample_measured_bit(xx_truth[static_cast<size_t>(slot)], params.p_m, rng);
            so.zz = sample_measured_bit(zz_truth[static_cast<size_t>(slot)], params.p_m, rng);
        } else if (u < p.success + p.failure) {
            if (config.fail_basis == FailBasis::XX) {
                so.result = SlotResult::XXOnly;
                so.xx = sample_measured_bit(xx_truth[static_cast<size_t>(slot)], params.p_m, rng);
            } else {
                so.result = SlotResult::ZZOnly;
                so.zz = sample_measured_bit(zz_truth[static_cast<size_t>(slot)], params.p_m, rng);
            }
        } else {
            so.result = SlotResult::None;
        }
        history |= static_cast<int>(so.result) << (2 * slot);
    }
    auto [xbar, zbar] = recover_encoded_outcomes(res.slots);
    res.outcome.xx = xbar;
    res.outcome.zz = zbar;
    if (xbar.measured && zbar.measured)
        res.outcome.cls = OutcomeClass::Success;
    else if (xbar.measured || zbar.measured)
        res.outcome.cls = OutcomeClass::Failure;
    else
        res.outcome.cls = OutcomeClass::Loss;
    return res;
}

}  // namespace detail

// One encoded fusion under the expectimax policy at cost weight beta.
inline EncodedFusionResult run_encoded_fusion(const StrategyTable& table, double beta,
                                              ErrorParams params, Rng& rng) {
    int beta_idx = table.beta_index(beta);
    return detail::run_encoded_slots(
        [&](int slot, int history) { return table.policy(beta_idx, slot, history); }, params, rng);
}

// One encoded fusion with a per-slot coin-flip failure basis (baseline);
// boosting fixed by the caller.
inline EncodedFusionResult run_encoded_fusion_random_basis(bool boosted, ErrorParams params,
                                                           Rng& rng) {
    return detail::run_encoded_slots(
        [&](int, int) {
            return FusionConfig{boosted, bernoulli(rng, 0.5) ? FailBasis::ZZ : FailBasis::XX};
        },
        params, rng);
}

}  // namespace fbsim
