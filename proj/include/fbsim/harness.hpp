#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fbsim/cluster_tracker.hpp"
#include "fbsim/decoder.hpp"
#include "fbsim/fusion_sampler.hpp"
#include "fbsim/network_builders.hpp"
#include "fbsim/rng.hpp"
#include "fbsim/shor.hpp"
#include "fbsim/stats.hpp"
#include "fbsim/xba.hpp"

namespace fbsim {

enum class Strategy : uint8_t { Xba = 0, Static = 1, RandomBasis = 2 };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Xba: return "xba";
        case Strategy::Static: return "static";
        default: return "random-basis";
    }
}

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "xba") return Strategy::Xba;
    if (s == "static") return Strategy::Static;
    if (s == "random-basis") return Strategy::RandomBasis;
    throw std::invalid_argument("unknown strategy '" + s + "' (xba | static | random-basis)");
}

struct ErrorPoint {
    double loss = 0.0;
    double p_m = 0.0;

    double sweep_parameter() const { return loss + p_m; }
    bool operator==(const ErrorPoint&) const = default;
};

struct RunSpec {
    NetworkKind network = NetworkKind::SixRing;
    std::vector<int> sizes;
    Strategy strategy = Strategy::Xba;
    bool encoded = false;
    bool boosted_baseline = true;  // boosting used by static / random-basis
    std::vector<ErrorPoint> points;
    XbaParams xba;
    int trials = 1000;
    uint64_t seed = 1;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const {
        if (sizes.empty()) throw std::invalid_argument("run spec needs at least one size");
        if (points.empty()) throw std::invalid_argument("run spec needs at least one error point");
        if (trials < 1) throw std::invalid_argument("run spec needs trials >= 1");
        xba.validate();
        for (const ErrorPoint& p : points) ErrorParams{p.loss, p.p_m}.validate();
        for (int L : sizes) {
            if (network == NetworkKind::SixRing && (L < 4 || L % 2 != 0))
                throw std::invalid_argument("six-ring sizes must be even and >= 4");
            if (network == NetworkKind::SquarePair && L < 2)
                throw std::invalid_argument("square-pair sizes must be >= 2");
        }
    }
};

struct TrialCounts {
    int32_t successes = 0;
    int32_t failures = 0;
    int32_t losses = 0;
    int32_t boosted = 0;  // boosted fusions (physical slots when encoded)
    int32_t trivial = 0;  // trivial bias decisions

    int32_t total() const { return successes + failures + losses; }
};

struct TrialRecord {
    uint64_t seed = 0;
    uint8_t primal_fail = 0;  // bit per axis
    uint8_t dual_fail = 0;
    FailureCause cause = FailureCause::None;
    TrialCounts counts;
    // Erasure split between the prioritized and deprioritized outcome of
    // each biased fusion (bias != 1/2).
    int32_t biased_fusions = 0;
    int32_t prio_erased = 0;
    int32_t nonprio_erased = 0;

    bool failed() const { return primal_fail != 0 || dual_fail != 0; }
};

// Per-trial context reused across trials by one worker.
class TrialWorkspace {
public:
    explicit TrialWorkspace(const FusionNetwork& net, double accretion)
        : net_(&net),
          primal_tracker_(net.primal, accretion),
          dual_tracker_(net.dual, accretion),
          primal_obs_(net.primal.n_edges()),
          dual_obs_(net.dual.n_edges()) {}

    const FusionNetwork& net() const { return *net_; }
    ClusterTracker& primal_tracker() { return primal_tracker_; }
    ClusterTracker& dual_tracker() { return dual_tracker_; }
    std::vector<EdgeObservation>& primal_obs() { return primal_obs_; }
    std::vector<EdgeObservation>& dual_obs() { return dual_obs_; }

    void reset() {
        primal_tracker_.reset();
        dual_tracker_.reset();
        std::fill(primal_obs_.begin(), primal_obs_.end(), EdgeObservation{});
        std::fill(dual_obs_.begin(), dual_obs_.end(), EdgeObservation{});
    }

private:
    const FusionNetwork* net_;
    ClusterTracker primal_tracker_;
    ClusterTracker dual_tracker_;
    std::vector<EdgeObservation> primal_obs_;
    std::vector<EdgeObservation> dual_obs_;
};

// One Monte Carlo trial: fusions resolve sequentially in raster order, the
// strategy picks each configuration from the live trackers, and the decoder
// judges the final state. Deterministic given (network, spec fields, seed).
inline TrialRecord run_trial(TrialWorkspace& ws, Strategy strategy, bool encoded,
                             bool boosted_baseline, ErrorParams params, const XbaParams& xba,
                             const StrategyTable* table, uint64_t trial_seed) {
    params.validate();
    if (encoded && strategy == Strategy::Xba && table == nullptr)
        throw std::invalid_argument("encoded XBA trials need a strategy table");
    ws.reset();
    const FusionNetwork& net = ws.net();
    Rng rng = make_rng(trial_seed);
    TrialRecord rec;
    rec.seed = trial_seed;

    for (size_t f = 0; f < net.fusions.size(); ++f) {
        const FusionRef& fu = net.fusions[f];
        double bias = 0.5;
        FusionConfig config = static_config(boosted_baseline);
        bool have_bias = false;
        if (strategy == Strategy::Xba) {
            BiasDecision d =
                choose_config(ws.primal_tracker(), ws.dual_tracker(), fu, params, xba);
            bias = d.bias;
            config = d.chosen;
            have_bias = true;
            if (d.trivial()) ++rec.counts.trivial;
        } else if (strategy == Strategy::RandomBasis) {
            config = FusionConfig{boosted_baseline,
                                  bernoulli(rng, 0.5) ? FailBasis::ZZ : FailBasis::XX};
        }

        FusionOutcome outcome;
        if (encoded) {
            EncodedFusionResult er = [&] {
                switch (strategy) {
                    case Strategy::Xba: {
                        double beta = fu.xx_in_primal ? 1.0 - bias : bias;
                        return run_encoded_fusion(*table, beta, params, rng);
                    }
                    case Strategy::RandomBasis:
                        return run_encoded_fusion_random_basis(boosted_baseline, params, rng);
                    default:
                        return detail::run_encoded_slots([&](int, int) { return config; }, params,
                                                         rng);
                }
            }();
            outcome = er.outcome;
            rec.counts.boosted += er.boosted_slots;
        } else {
            outcome = sample_fusion(config, params, rng);
            if (config.boosted) ++rec.counts.boosted;
        }

        switch (outcome.cls) {
            case OutcomeClass::Success: ++rec.counts.successes; break;
            case OutcomeClass::Failure: ++rec.counts.failures; break;
            case OutcomeClass::Loss: ++rec.counts.losses; break;
        }

        const MeasuredBit& primal_bit = fu.xx_in_primal ? outcome.xx : outcome.zz;
        const MeasuredBit& dual_bit = fu.xx_in_primal ? outcome.zz : outcome.xx;
        auto apply = [](ClusterTracker& t, std::vector<EdgeObservation>& obs, int32_t edge,
                        const MeasuredBit& bit) {
            if (bit.measured) {
                t.resolve(edge, EdgeState::Measured);
                obs[static_cast<size_t>(edge)] = EdgeObservation{EdgeState::Measured, bit.error()};
            } else {
                t.resolve(edge, EdgeState::Erased);
                obs[static_cast<size_t>(edge)] = EdgeObservation{EdgeState::Erased, false};
            }
        };
        apply(ws.primal_tracker(), ws.primal_obs(), fu.primal_edge, primal_bit);
        apply(ws.dual_tracker(), ws.dual_obs(), fu.dual_edge, dual_bit);

        if (have_bias && bias != 0.5) {
            ++rec.biased_fusions;
            const MeasuredBit& prio = bias < 0.5 ? primal_bit : dual_bit;
            const MeasuredBit& nonprio = bias < 0.5 ? dual_bit : primal_bit;
            if (!prio.measured) ++rec.prio_erased;
            if (!nonprio.measured) ++rec.nonprio_erased;
        }
    }

    bool flip_free = params.p_m == 0.0;
    if (flip_free) {
        // The trackers already hold the erased-component wrap analysis.
        rec.primal_fail = ws.primal_tracker().wrapping_axes();
        rec.dual_fail = ws.dual_tracker().wrapping_axes();
        rec.cause = (rec.primal_fail || rec.dual_fail) ? FailureCause::LogicalErasure
                                                       : FailureCause::None;
    } else {
        DecodeResult dr = decode_network(net.primal, net.dual, ws.primal_obs(), ws.dual_obs(),
                                         false);
        for (int k = 0; k < 3; ++k) {
            if (dr.primal_fail[static_cast<size_t>(k)]) rec.primal_fail |= uint8_t(1u << k);
            if (dr.dual_fail[static_cast<size_t>(k)]) rec.dual_fail |= uint8_t(1u << k);
        }
        rec.cause = dr.cause;
    }
    return rec;
}

struct PointResult {
    ErrorPoint point;
    int L = 0;
    int64_t trials = 0;
    int64_t failures = 0;  // trials with any logical failure
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int64_t fusion_successes = 0;
    int64_t fusion_failures = 0;
    int64_t fusion_losses = 0;
    int64_t boosted = 0;
    int64_t trivial = 0;
    int64_t biased_fusions = 0;
    int64_t prio_erased = 0;
    int64_t nonprio_erased = 0;
    int64_t erasure_cause = 0;
    int64_t matching_cause = 0;
    double seconds = 0.0;

    void absorb(const TrialRecord& r) {
        ++trials;
        if (r.failed()) ++failures;
        fusion_successes += r.counts.successes;
        fusion_failures += r.counts.failures;
        fusion_losses += r.counts.losses;
        boosted += r.counts.boosted;
        trivial += r.counts.trivial;
        biased_fusions += r.biased_fusions;
        prio_erased += r.prio_erased;
        nonprio_erased += r.nonprio_erased;
        if (r.cause == FailureCause::LogicalErasure) ++erasure_cause;
        if (r.cause == FailureCause::MatchingMismatch) ++matching_cause;
    }

    void finalize() {
        rate = trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
        auto [lo, hi] = wilson_interval(failures, trials);
        ci_low = lo;
        ci_high = hi;
    }
};

struct SweepResult {
    RunSpec spec;
    std::vector<PointResult> points;  // ordered by (point index, size index)
};

using ProgressFn = std::function<void(const PointResult&)>;

// Checkpointing hooks. `already_done` marks trials recovered from a previous
// run (their records must be folded in through `preload`); `on_trial` sees
// every freshly computed record and may persist a digest of it.
struct CheckpointHooks {
    std::function<bool(size_t point_idx, size_t size_idx, int trial)> already_done;
    std::function<void(size_t point_idx, size_t size_idx, int trial, const TrialRecord&)> on_trial;
    std::function<void(size_t point_idx, size_t size_idx, PointResult&)> preload;
};

// Runs the full sweep: points x sizes x trials, trial-parallel. Per-trial
// seeds derive from (master seed, point index, size index, trial index), so
// results are identical for any worker count.
inline SweepResult run_sweep(const RunSpec& spec, const ProgressFn& progress = {},
                             const CheckpointHooks* hooks = nullptr) {
    spec.validate();
    SweepResult result;
    result.spec = spec;

    int n_workers = spec.workers > 0
                        ? spec.workers
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    for (size_t pi = 0; pi < spec.points.size(); ++pi) {
        ErrorParams params{spec.points[pi].loss, spec.points[pi].p_m};
        // One table per error point, shared read-only by all workers.
        std::unique_ptr<StrategyTable> table;
        if (spec.encoded && spec.strategy == Strategy::Xba)
            table = std::make_unique<StrategyTable>(params, StrategyTable::all_options());

        for (size_t si = 0; si < spec.sizes.size(); ++si) {
            int L = spec.sizes[si];
            FusionNetwork net = spec.network == NetworkKind::SixRing
                                    ? build_six_ring(L)
                                    : build_square_pair(L, L);
            PointResult pr;
            pr.point = spec.points[pi];
            pr.L = L;
            if (hooks && hooks->preload) hooks->preload(pi, si, pr);
            auto t0 = std::chrono::steady_clock::now();

            std::atomic<int> next_chunk{0};
            const int chunk_size = 64;
            const int n_chunks = (spec.trials + chunk_size - 1) / chunk_size;
            std::mutex agg_mutex;
            auto worker = [&]() {
                TrialWorkspace ws(net, spec.xba.accretion);
                PointResult local;
                while (true) {
                    int chunk = next_chunk.fetch_add(1);
                    if (chunk >= n_chunks) break;
                    int begin = chunk * chunk_size;
                    int end = std::min(spec.trials, begin + chunk_size);
                    for (int t = begin; t < end; ++t) {
                        if (hooks && hooks->already_done && hooks->already_done(pi, si, t))
                            continue;
                        uint64_t ts = derive_seed(spec.seed, pi, si, static_cast<uint64_t>(t));
                        TrialRecord rec = run_trial(ws, spec.strategy, spec.encoded,
                                                    spec.boosted_baseline, params, spec.xba,
                                                    table.get(), ts);
                        local.absorb(rec);
                        if (hooks && hooks->on_trial) {
                            std::lock_guard<std::mutex> lock(agg_mutex);
                            hooks->on_trial(pi, si, t, rec);
                        }
                    }
                }
                std::lock_guard<std::mutex> lock(agg_mutex);
                pr.trials += local.trials;
                pr.failures += local.failures;
                pr.fusion_successes += local.fusion_successes;
                pr.fusion_failures += local.fusion_failures;
                pr.fusion_losses += local.fusion_losses;
                pr.boosted += local.boosted;
                pr.trivial += local.trivial;
                pr.biased_fusions += local.biased_fusions;
                pr.prio_erased += local.prio_erased;
                pr.nonprio_erased += local.nonprio_erased;
                pr.erasure_cause += local.erasure_cause;
                pr.matching_cause += local.matching_cause;
            };
            if (n_workers == 1) {
                worker();
            } else {
                std::vector<std::thread> threads;
                for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
                for (auto& th : threads) th.join();
            }
            pr.finalize();
            pr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (progress) progress(pr);
            result.points.push_back(pr);
        }
    }
    return result;
}

}  // namespace fbsim
