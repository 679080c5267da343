// Acceptance suite: each criterion is self-contained and prints a single
// [PASS]/[FAIL] line with the measured values. The exit code is the number
// of failed criteria.
//
// Usage: fbsim_acceptance [--criterion N] [--workers N]

#include <cstdarg>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fbsim/decoder.hpp"
#include "fbsim/derive.hpp"
#include "fbsim/graph_algos.hpp"
#include "fbsim/harness.hpp"
#include "fbsim/io.hpp"
#include "fbsim/network_builders.hpp"
#include "fbsim/percolation.hpp"
#include "fbsim/presets.hpp"
#include "fbsim/threshold.hpp"
#include "fbsim/unit_cell.hpp"
#include "../test_oracles.hpp"

namespace {

using namespace fbsim;

int g_workers = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

void report(int criterion, const char* name, const Outcome& o) {
    std::printf("[%s] criterion %d: %s — %s\n", o.pass ? "PASS" : "FAIL", criterion, name,
                o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

ThresholdCurves sweep_curves(RunSpec spec) {
    spec.workers = g_workers;
    SweepResult res = run_sweep(spec, [](const PointResult& p) {
        std::fprintf(stderr, "    l=%-9.5g p_m=%-9.5g L=%-3d rate=%.4f (%.1fs)\n", p.point.loss,
                     p.point.p_m, p.L, p.rate, p.seconds);
    });
    ThresholdCurves curves;
    for (const PointResult& p : res.points)
        curves[p.L].push_back(CurvePoint{p.point.sweep_parameter(), p.trials, p.failures});
    for (auto& [L, pts] : curves)
        std::sort(pts.begin(), pts.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
    return curves;
}

RunSpec loss_spec(Strategy strategy, bool encoded, std::vector<ErrorPoint> points, int trials,
                  uint64_t seed) {
    RunSpec s;
    s.network = NetworkKind::SixRing;
    s.sizes = {8, 12, 16};
    s.strategy = strategy;
    s.encoded = encoded;
    s.points = std::move(points);
    s.trials = trials;
    s.seed = seed;
    return s;
}

// --- criterion 1: graph validity ---------------------------------------------

Outcome criterion1() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };
    for (int L : {4, 8}) {
        FusionNetwork net = build_six_ring(L);
        expect(net.n_fusions() == static_cast<size_t>(3) * L * L * L, "fusion count 3L^3");
        for (const SyndromeGraph* g : {&net.primal, &net.dual}) {
            size_t degsum = 0;
            bool deg12 = true, balanced = true;
            for (int32_t v = 0; v < g->n_nodes; ++v) {
                degsum += static_cast<size_t>(g->degree(v));
                if (g->degree(v) != 12) deg12 = false;
                int xx = 0, zz = 0;
                auto [b, e] = g->incident(v);
                for (const int32_t* it = b; it != e; ++it)
                    (g->edges[static_cast<size_t>(*it)].label == BasisLabel::XX ? xx : zz)++;
                if (xx != 6 || zz != 6) balanced = false;
            }
            expect(deg12, "12-regular");
            expect(balanced, "6 XX + 6 ZZ per node");
            expect(degsum == 2 * g->n_edges(), "handshake identity");
            auto is_zz = [](const GraphEdge& e) { return e.label == BasisLabel::ZZ; };
            auto [comp, n_comp] = connected_components(*g, is_zz);
            expect(n_comp == L / 2, "ZZ planes count L/2");
            SyndromeGraph plane = extract_component(*g, is_zz, 0);
            bool tri = plane.n_nodes == L * L;
            for (int32_t v = 0; v < plane.n_nodes && tri; ++v)
                if (plane.degree(v) != 6) tri = false;
            if (tri)
                for (int t : triangles_per_edge(plane))
                    if (t != 2) tri = false;
            expect(tri, "ZZ planes triangular");
            auto [fc, fn] = connected_components(*g, [](const GraphEdge&) { return true; });
            expect(fn == 1, "XX edges connect planes");
        }
    }
    // Authoritative check: the builder replays the stabilizer derivation.
    StabilizerNetworkDescription desc = six_ring_description(4);
    DerivedGraphs dg = derive_syndrome_graph(desc);
    FusionNetwork net4 = build_six_ring(4);
    expect(graphs_equal(net4.primal, dg.primal) && graphs_equal(net4.dual, dg.dual),
           "matches GF(2) derivation at L=4");
    bool fus_ok = true;
    for (size_t f = 0; f < net4.fusions.size(); ++f)
        if (net4.fusions[f].xx_in_primal != dg.fusions[f].xx_in_primal) fus_ok = false;
    expect(fus_ok, "fusion-outcome mapping matches derivation");
    UnitCellTable extracted = extract_unit_cell(desc, dg);
    expect(unit_cell_to_json(extracted) == nlohmann::json::parse(kSixRingUnitCellJson),
           "unit-cell table matches derivation");

    if (failures.empty()) return {true, "all structural invariants hold; builder == derivation"};
    std::string d = "failed:";
    for (const auto& f : failures) d += " " + f + ";";
    return {false, d};
}

// --- criterion 2: erasure percolation threshold -------------------------------

Outcome criterion2() {
    const std::vector<double> rates = {0.110, 0.1135, 0.1165, 0.1185, 0.1205, 0.1235, 0.127};
    ThresholdCurves curves;
    for (int L : {12, 16, 20}) {
        FusionNetwork net = build_six_ring(L);
        std::vector<CurvePoint> pts;
        for (size_t i = 0; i < rates.size(); ++i) {
            double f = erasure_percolation_probe(
                net.primal, rates[i], 10000, derive_seed(4202, i, static_cast<uint64_t>(L), 0));
            pts.push_back({rates[i], 10000, static_cast<int64_t>(std::llround(f * 10000))});
            std::fprintf(stderr, "    L=%d rate=%.4f wrap=%.4f\n", L, rates[i], f);
        }
        curves[L] = std::move(pts);
    }
    ThresholdEstimate est = estimate_threshold(curves);
    bool pass = std::abs(est.value - 0.1198) <= 0.003;
    return {pass, fmt("i.i.d. erasure crossing %.4f +- %.4f (target 0.1198 +- 0.0030)", est.value,
                      est.uncertainty)};
}

// --- criterion 3: triangular-plane threshold ----------------------------------

Outcome criterion3() {
    const std::vector<double> rates = {0.330, 0.338, 0.344, 0.350, 0.356, 0.364};
    ThresholdCurves curves;
    for (int L : {16, 24, 32}) {
        FusionNetwork net = build_six_ring(L);
        SyndromeGraph plane = extract_component(
            net.primal, [](const GraphEdge& e) { return e.label == BasisLabel::ZZ; }, 0);
        std::vector<CurvePoint> pts;
        for (size_t i = 0; i < rates.size(); ++i) {
            double f = erasure_percolation_probe(
                plane, rates[i], 10000, derive_seed(4203, i, static_cast<uint64_t>(L), 0));
            pts.push_back({rates[i], 10000, static_cast<int64_t>(std::llround(f * 10000))});
            std::fprintf(stderr, "    plane L=%d rate=%.4f wrap=%.4f\n", L, rates[i], f);
        }
        curves[L] = std::move(pts);
    }
    ThresholdEstimate est = estimate_threshold(curves);
    bool pass = std::abs(est.value - 0.347) <= 0.005;
    return {pass, fmt("ZZ-plane spanning crossing %.4f +- %.4f (target 0.347 +- 0.005)",
                      est.value, est.uncertainty)};
}

// --- criteria 4/5: loss thresholds --------------------------------------------

ThresholdEstimate static_loss_threshold(int trials) {
    return estimate_threshold(
        sweep_curves(loss_spec(Strategy::Static, false, static_loss_grid(), trials, 7001)));
}

ThresholdEstimate xba_loss_threshold(int trials) {
    return estimate_threshold(
        sweep_curves(loss_spec(Strategy::Xba, false, xba_loss_grid(), trials, 7002)));
}

Outcome criterion4() {
    ThresholdEstimate est = static_loss_threshold(10000);
    bool pass = std::abs(est.value - 0.0048) <= 0.0008;
    return {pass, fmt("static loss threshold %.5f +- %.5f (target 0.0048 +- 0.0008)", est.value,
                      est.uncertainty)};
}

Outcome criterion5() {
    ThresholdEstimate xba = xba_loss_threshold(10000);
    ThresholdEstimate st = static_loss_threshold(10000);
    double ratio = xba.value / st.value;
    bool pass = std::abs(xba.value - 0.016) <= 0.0015 && ratio >= 3.0;
    return {pass, fmt("adaptive loss threshold %.5f +- %.5f (target 0.016 +- 0.0015); "
                      "improvement over static %.2fx (needs >= 3.0x)",
                      xba.value, xba.uncertainty, ratio)};
}

// --- criterion 6: mixed-channel improvement -----------------------------------

Outcome criterion6() {
    // The ray sweeps run at the larger sizes; the quasi-2D static channel
    // has strong finite-size drift below L = 12.
    auto ray_spec = [](Strategy strategy, std::vector<ErrorPoint> points, uint64_t seed) {
        RunSpec s;
        s.network = NetworkKind::SixRing;
        s.sizes = {12, 16, 20};
        s.strategy = strategy;
        s.points = std::move(points);
        s.trials = 10000;
        s.seed = seed;
        return s;
    };
    ThresholdEstimate st_pm =
        estimate_threshold(sweep_curves(ray_spec(Strategy::Static, static_pm_grid(), 8001)));
    ThresholdEstimate xba_pm =
        estimate_threshold(sweep_curves(ray_spec(Strategy::Xba, xba_pm_grid(), 8002)));
    ThresholdEstimate st_l =
        estimate_threshold(sweep_curves(ray_spec(Strategy::Static, static_loss_grid(), 8003)));
    ThresholdEstimate xba_l =
        estimate_threshold(sweep_curves(ray_spec(Strategy::Xba, xba_loss_grid(), 8004)));
    double pm_ratio = xba_pm.value / st_pm.value;
    double l_ratio = xba_l.value / st_l.value;
    bool pass = std::abs(pm_ratio - 1.6) <= 0.2 * 1.6 && std::abs(l_ratio - 3.3) <= 0.2 * 3.3;
    return {pass,
            fmt("measurement-error-only ratio %.2fx (target 1.6x +- 20%%: static %.5f, adaptive "
                "%.5f); loss-only ratio %.2fx (target 3.3x +- 20%%)",
                pm_ratio, st_pm.value, xba_pm.value, l_ratio)};
}

// --- criterion 7: encoded fusion ----------------------------------------------

Outcome criterion7() {
    ThresholdEstimate xba = estimate_threshold(
        sweep_curves(loss_spec(Strategy::Xba, true, encoded_xba_loss_grid(), 10000, 9001)));
    ThresholdEstimate rnd = estimate_threshold(sweep_curves(
        loss_spec(Strategy::RandomBasis, true, encoded_random_loss_grid(), 10000, 9002)));
    // Encoded erasure split at the operating point: the strategy table's two
    // marginals at the squeeze-limited bias.
    StrategyTable table({0.075, 0.0}, StrategyTable::all_options());
    const auto& entry = table.entry(table.beta_index(0.9));
    double ratio = entry.p_zbar_erased / entry.p_xbar_erased;
    bool pass = std::abs(xba.value - 0.075) <= 0.004 && std::abs(rnd.value - 0.027) <= 0.003 &&
                std::abs(ratio - 4.4) <= 0.15 * 4.4;
    return {pass,
            fmt("encoded adaptive threshold %.5f +- %.5f (target 0.075 +- 0.004); random-basis "
                "%.5f +- %.5f (target 0.027 +- 0.003); operating erasure split %.2f:1 (target "
                "4.4:1 +- 15%%)",
                xba.value, xba.uncertainty, rnd.value, rnd.uncertainty, ratio)};
}

// --- criterion 8: fast oracle equivalences -------------------------------------

bool tracker_oracle_equivalence(std::string& detail) {
    struct Case {
        FusionNetwork net;
        double accretion;
    };
    std::vector<Case> cases;
    cases.push_back({build_six_ring(4), 0.5});
    cases.push_back({build_square_pair(6, 6), 0.0});
    cases.push_back({build_square_pair(5, 7), 0.3});
    Rng rng = make_rng(20240817);
    int states = 0;
    for (Case& c : cases) {
        const SyndromeGraph& g = c.net.primal;
        ClusterTracker t(g, c.accretion);
        for (int iter = 0; iter < 334; ++iter) {
            ++states;
            t.reset();
            std::vector<EdgeState> sv(g.edges.size(), EdgeState::Unmeasured);
            for (size_t e = 0; e < g.edges.size(); ++e) {
                double u = uniform01(rng);
                if (u < 0.3) {
                    t.resolve(static_cast<int32_t>(e), EdgeState::Erased);
                    sv[e] = EdgeState::Erased;
                } else if (u < 0.65) {
                    t.resolve(static_cast<int32_t>(e), EdgeState::Measured);
                    sv[e] = EdgeState::Measured;
                }
            }
            oracle::ClusterState cs = oracle::recompute_clusters(g, sv, c.accretion);
            for (int32_t v = 0; v < g.n_nodes; ++v) {
                int comp = cs.component[static_cast<size_t>(v)];
                if (std::abs(t.cluster_exposure(v) - cs.exposure[static_cast<size_t>(comp)]) >
                        1e-9 ||
                    t.cluster_wrap(v) != cs.wrap[static_cast<size_t>(comp)]) {
                    detail = "incremental tracker disagrees with BFS recomputation";
                    return false;
                }
            }
        }
    }
    detail = fmt("tracker == BFS oracle on %d random states", states);
    return true;
}

bool matching_oracle_equivalence(std::string& detail) {
    FusionNetwork net = build_square_pair(4, 4);
    const SyndromeGraph& g = net.primal;
    const int max_w = 3;
    struct Entry {
        int min_weight = INT_MAX;
        std::set<uint8_t> classes;
        std::vector<char> rep;
        bool has_rep = false;
    };
    std::map<std::vector<char>, Entry> table;
    auto wrap_of = [&](const std::vector<char>& p) {
        uint8_t w = 0;
        for (size_t e = 0; e < p.size(); ++e)
            if (p[e]) w ^= g.edges[e].wrap;
        return w;
    };
    auto syndrome_of = [&](const std::vector<char>& p) {
        std::vector<char> s(static_cast<size_t>(g.n_nodes), 0);
        for (size_t e = 0; e < p.size(); ++e)
            if (p[e]) {
                s[static_cast<size_t>(g.edges[e].u)] ^= 1;
                s[static_cast<size_t>(g.edges[e].v)] ^= 1;
            }
        return s;
    };
    std::vector<char> pat(g.edges.size(), 0);
    std::function<void(size_t, int)> enumerate = [&](size_t idx, int w) {
        Entry& e = table[syndrome_of(pat)];
        if (!e.has_rep) {
            e.rep = pat;
            e.has_rep = true;
        }
        if (w < e.min_weight) {
            e.min_weight = w;
            e.classes.clear();
        }
        if (w == e.min_weight) {
            std::vector<char> diff(pat.size());
            for (size_t i = 0; i < pat.size(); ++i) diff[i] = pat[i] ^ e.rep[i];
            e.classes.insert(wrap_of(diff));
        }
        if (idx == g.edges.size() || w == max_w) return;
        enumerate(idx + 1, w);
        pat[idx] = 1;
        enumerate(idx + 1, w + 1);
        pat[idx] = 0;
    };
    enumerate(0, 0);

    long long tested = 0;
    bool ok = true;
    std::function<void(size_t, int)> check = [&](size_t idx, int w) {
        if (!ok) return;
        if (w > 0) {
            ++tested;
            std::vector<EdgeObservation> obs(g.edges.size());
            for (size_t e = 0; e < g.edges.size(); ++e)
                obs[e] = EdgeObservation{EdgeState::Measured, pat[e] != 0};
            MatchingDecodeInfo info;
            decode_matching_graph(g, obs, &info);
            const Entry& entry = table.at(syndrome_of(pat));
            std::vector<char> diff(pat.size());
            for (size_t i = 0; i < pat.size(); ++i) diff[i] = pat[i] ^ entry.rep[i];
            uint8_t err_vs_rep = wrap_of(diff);
            uint8_t corr_vs_rep = static_cast<uint8_t>(err_vs_rep ^ info.residual_wrap);
            if (info.correction_weight != entry.min_weight || !entry.classes.count(corr_vs_rep)) {
                ok = false;
                return;
            }
            if (entry.classes.size() == 1 &&
                ((info.residual_wrap != 0) != ((*entry.classes.begin() ^ err_vs_rep) != 0))) {
                ok = false;
                return;
            }
        }
        if (idx == g.edges.size() || w >= max_w) return;
        check(idx + 1, w);
        pat[idx] = 1;
        check(idx + 1, w + 1);
        pat[idx] = 0;
    };
    check(0, 0);
    detail = ok ? fmt("matching == exhaustive min-weight oracle on %lld patterns", tested)
                : "matching decoder disagrees with the exhaustive oracle";
    return ok;
}

Outcome criterion8() {
    std::string d1, d2;
    if (!tracker_oracle_equivalence(d1)) return {false, d1};
    if (!matching_oracle_equivalence(d2)) return {false, d2};

    for (double l : {0.0, 0.075}) {
        StrategyTable table({l, 0.0}, StrategyTable::all_options());
        for (int gidx = 0; gidx < table.grid_points(); ++gidx) {
            double beta = static_cast<double>(gidx) / (table.grid_points() - 1);
            double fixed =
                oracle::best_fixed_policy_cost(StrategyTable::all_options(), {l, 0.0}, beta);
            if (table.expected_cost(gidx) > fixed + 1e-12)
                return {false, fmt("adaptive policy worse than fixed at l=%g beta=%g", l, beta)};
        }
    }

    double ib = intermediate_bias(3, 16, 0.5);
    double bias = final_bias(ib, false, false, 0.2);
    if (std::abs(ib - 0.7835) > 2e-4 || std::abs(bias - 0.7268) > 2e-4)
        return {false, fmt("worked bias values off: IB=%.5f bias=%.5f", ib, bias)};

    FusionNetwork net = build_square_pair(6, 6);
    ClusterTracker primal(net.primal, 0.0), dual(net.dual, 0.0);
    auto h = [&](int i, int j) { return static_cast<int32_t>(2 * (j * 6 + i)); };
    auto v = [&](int i, int j) { return static_cast<int32_t>(2 * (j * 6 + i) + 1); };
    primal.resolve(h(2, 1), EdgeState::Measured);
    primal.resolve(v(2, 1), EdgeState::Measured);
    dual.resolve(v(1, 0), EdgeState::Erased);
    dual.resolve(h(0, 0), EdgeState::Measured);
    dual.resolve(v(2, 1), EdgeState::Erased);
    dual.resolve(h(2, 2), EdgeState::Measured);
    const FusionRef& fu = net.fusions[static_cast<size_t>(h(1, 1))];
    const GraphEdge& ea = net.primal.edges[static_cast<size_t>(fu.primal_edge)];
    const GraphEdge& eb = net.dual.edges[static_cast<size_t>(fu.dual_edge)];
    double c1 = primal.cluster_exposure(ea.u) - 1.0;
    double c2 = primal.cluster_exposure(ea.v) - 1.0;
    double c3 = dual.cluster_exposure(eb.u) - 1.0;
    double c4 = dual.cluster_exposure(eb.v) - 1.0;
    double chi_a = primal.edge_exposure(fu.primal_edge).chi;
    double chi_b = dual.edge_exposure(fu.dual_edge).chi;
    if (c1 != 3.0 || c2 != 1.0 || c3 != 4.0 || c4 != 4.0 || chi_a != 3.0 || chi_b != 16.0)
        return {false, fmt("worked exposures off: clusters %g,%g,%g,%g edges %g,%g", c1, c2, c3,
                           c4, chi_a, chi_b)};

    return {true,
            d1 + "; " + d2 +
                "; adaptive <= best fixed policy on the full bias grid; worked example: "
                "exposures 3,1,4,4, edge exposures 3 and 16, IB 0.7835, bias 0.7268"};
}

// --- criterion 9: determinism ---------------------------------------------------

Outcome criterion9() {
    RunSpec spec;
    spec.network = NetworkKind::SixRing;
    spec.sizes = {4, 6};
    spec.strategy = Strategy::Xba;
    spec.points = {{0.012, 0.0}, {0.016, 0.001}};
    spec.trials = 200;
    spec.seed = 777;
    std::vector<std::string> outputs;
    for (int workers : {1, 4, 16}) {
        spec.workers = workers;
        SweepResult r = run_sweep(spec);
        std::ostringstream os;
        write_results_csv(os, r, true);
        outputs.push_back(os.str());
    }
    bool pass = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    return {pass, pass ? "byte-identical results CSV across 1, 4, and 16 workers"
                       : "CSV outputs differ across worker counts"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            g_workers = std::atoi(argv[++i]);
    }
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "graph validity", criterion1},
        {2, "erasure percolation threshold 11.98%", criterion2},
        {3, "static failure confinement (34.7% plane threshold)", criterion3},
        {4, "static loss threshold 0.48%", criterion4},
        {5, "adaptive loss threshold 1.6%", criterion5},
        {6, "mixed-channel improvement ratios", criterion6},
        {7, "encoded fusion thresholds", criterion7},
        {8, "oracle equivalences", criterion8},
        {9, "determinism", criterion9},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.number != only) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        report(c.number, c.name, o);
        if (!o.pass) ++failures;
    }
    return failures;
}
