#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "fbsim/harness.hpp"
#include "fbsim/io.hpp"

namespace fbsim {
namespace {

RunSpec small_spec(Strategy strategy, bool encoded = false) {
    RunSpec s;
    s.network = NetworkKind::SixRing;
    s.sizes = {4, 6};
    s.strategy = strategy;
    s.encoded = encoded;
    s.points = {{0.01, 0.0}, {0.02, 0.0}};
    s.trials = 60;
    s.seed = 9;
    s.workers = 2;
    return s;
}

TEST(Harness, CountsSumToFusionCount) {
    FusionNetwork net = build_six_ring(4);
    TrialWorkspace ws(net, 0.5);
    for (Strategy s : {Strategy::Xba, Strategy::Static, Strategy::RandomBasis}) {
        TrialRecord r = run_trial(ws, s, false, true, {0.05, 0.0}, XbaParams{}, nullptr, 1234);
        EXPECT_EQ(r.counts.total(), static_cast<int32_t>(net.n_fusions()));
    }
}

TEST(Harness, StaticNeverBiasesRandomAlwaysResolves) {
    FusionNetwork net = build_six_ring(4);
    TrialWorkspace ws(net, 0.5);
    TrialRecord r = run_trial(ws, Strategy::Static, false, true, {0.0, 0.0}, XbaParams{}, nullptr,
                              7);
    EXPECT_EQ(r.counts.trivial, 0);
    EXPECT_EQ(r.biased_fusions, 0);
    EXPECT_EQ(r.counts.boosted, static_cast<int32_t>(net.n_fusions()));
    // Lossless static: failures erase exactly the ZZ-labeled edges.
    EXPECT_EQ(r.counts.losses, 0);
}

TEST(Harness, IdenticalSeedGivesIdenticalRecord) {
    FusionNetwork net = build_six_ring(4);
    TrialWorkspace ws1(net, 0.5), ws2(net, 0.5);
    for (uint64_t seed : {1ull, 42ull, 777ull}) {
        TrialRecord a = run_trial(ws1, Strategy::Xba, false, true, {0.015, 0.0}, XbaParams{},
                                  nullptr, seed);
        TrialRecord b = run_trial(ws2, Strategy::Xba, false, true, {0.015, 0.0}, XbaParams{},
                                  nullptr, seed);
        EXPECT_EQ(a.primal_fail, b.primal_fail);
        EXPECT_EQ(a.dual_fail, b.dual_fail);
        EXPECT_EQ(a.counts.successes, b.counts.successes);
        EXPECT_EQ(a.counts.boosted, b.counts.boosted);
        EXPECT_EQ(a.biased_fusions, b.biased_fusions);
    }
}

TEST(Harness, SweepDeterministicAcrossWorkerCounts) {
    std::string csv1, csv4, csv16;
    for (auto [workers, out] : {std::pair<int, std::string*>{1, &csv1},
                                std::pair<int, std::string*>{4, &csv4},
                                std::pair<int, std::string*>{16, &csv16}}) {
        RunSpec s = small_spec(Strategy::Xba);
        s.workers = workers;
        SweepResult r = run_sweep(s);
        std::ostringstream os;
        write_results_csv(os, r, true);
        *out = os.str();
    }
    EXPECT_EQ(csv1, csv4);
    EXPECT_EQ(csv1, csv16);
}

TEST(Harness, EncodedSweepDeterministicAcrossWorkerCounts) {
    std::string a, b;
    for (auto [workers, out] :
         {std::pair<int, std::string*>{1, &a}, std::pair<int, std::string*>{3, &b}}) {
        RunSpec s = small_spec(Strategy::Xba, true);
        s.trials = 30;
        s.workers = workers;
        SweepResult r = run_sweep(s);
        std::ostringstream os;
        write_results_csv(os, r, true);
        *out = os.str();
    }
    EXPECT_EQ(a, b);
}

// Frozen seed-derivation values guard the determinism contract across
// refactors; changing them silently would invalidate stored checkpoints.
TEST(Harness, SeedDerivationIsStable) {
    EXPECT_EQ(derive_seed(1, 0, 0, 0), derive_seed(1, 0, 0, 0));
    EXPECT_NE(derive_seed(1, 0, 0, 0), derive_seed(1, 0, 0, 1));
    EXPECT_NE(derive_seed(1, 0, 0, 0), derive_seed(1, 0, 1, 0));
    EXPECT_NE(derive_seed(1, 0, 0, 0), derive_seed(2, 0, 0, 0));
    EXPECT_EQ(derive_seed(12345, 2, 1, 999), 15875533165896683426ull);
}

TEST(Harness, RandomBasisFailsAtZeroLossOnSmallLattice) {
    RunSpec s;
    s.network = NetworkKind::SixRing;
    s.sizes = {12};
    s.strategy = Strategy::RandomBasis;
    s.points = {{0.0001, 0.0}};
    s.trials = 150;
    s.seed = 5;
    s.workers = 2;
    SweepResult r = run_sweep(s);
    EXPECT_GT(r.points[0].rate, 0.6);
}

TEST(Harness, StaticWellBelowSaturationAtZeroLoss) {
    RunSpec s;
    s.network = NetworkKind::SixRing;
    s.sizes = {12};
    s.strategy = Strategy::Static;
    s.points = {{0.0001, 0.0}};
    s.trials = 200;
    s.seed = 5;
    s.workers = 2;
    SweepResult r = run_sweep(s);
    EXPECT_LT(r.points[0].rate, 0.5);
}

TEST(Harness, SpecValidation) {
    RunSpec s = small_spec(Strategy::Xba);
    s.sizes = {5};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = small_spec(Strategy::Xba);
    s.trials = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = small_spec(Strategy::Xba);
    s.points.clear();
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Harness, CheckpointHooksSkipAndPreload) {
    RunSpec s = small_spec(Strategy::Static);
    s.trials = 40;
    SweepResult full = run_sweep(s);

    // Simulate a previous partial run covering the first 17 trials of every
    // block via hooks.
    std::map<std::pair<size_t, size_t>, std::vector<TrialRecord>> stored;
    CheckpointHooks record_hooks;
    record_hooks.on_trial = [&](size_t pi, size_t si, int t, const TrialRecord& r) {
        if (t < 17) stored[{pi, si}].push_back(r);
    };
    run_sweep(s, {}, &record_hooks);

    CheckpointHooks resume_hooks;
    resume_hooks.already_done = [&](size_t, size_t, int t) { return t < 17; };
    resume_hooks.preload = [&](size_t pi, size_t si, PointResult& pr) {
        for (const TrialRecord& r : stored[{pi, si}]) pr.absorb(r);
    };
    SweepResult resumed = run_sweep(s, {}, &resume_hooks);

    ASSERT_EQ(full.points.size(), resumed.points.size());
    for (size_t i = 0; i < full.points.size(); ++i) {
        EXPECT_EQ(full.points[i].trials, resumed.points[i].trials);
        EXPECT_EQ(full.points[i].failures, resumed.points[i].failures);
        EXPECT_EQ(full.points[i].fusion_losses, resumed.points[i].fusion_losses);
    }
}

}  // namespace
}  // namespace fbsim
