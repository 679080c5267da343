// Command-line front end: sweep simulation, threshold estimation, plotting,
// and graph validation / derivation utilities.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fbsim/derive.hpp"
#include "fbsim/graph_algos.hpp"
#include "fbsim/io.hpp"
#include "fbsim/network_builders.hpp"
#include "fbsim/percolation.hpp"
#include "fbsim/presets.hpp"
#include "fbsim/svg_plot.hpp"
#include "fbsim/unit_cell.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoCrossing = 3;

int default_workers() {
    if (const char* env = std::getenv("FBSIM_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 0;  // harness resolves 0 to hardware concurrency
}

void print_progress(const fbsim::PointResult& p) {
    std::fprintf(stderr, "  l=%-8.5g p_m=%-8.5g L=%-3d rate=%.5f (%lld/%lld) %.1fs\n",
                 p.point.loss, p.point.p_m, p.L, p.rate, static_cast<long long>(p.failures),
                 static_cast<long long>(p.trials), p.seconds);
}

int run_specs(const std::vector<fbsim::RunSpec>& specs, const fbsim::OutputPaths& out,
              int workers_override) {
    bool first = true;
    std::ofstream csv;
    if (!out.csv.empty()) {
        csv.open(out.csv);
        if (!csv) {
            std::fprintf(stderr, "error: cannot write CSV '%s'\n", out.csv.c_str());
            return kExitUsage;
        }
    }
    nlohmann::json summaries = nlohmann::json::array();
    for (fbsim::RunSpec spec : specs) {
        if (workers_override > 0) spec.workers = workers_override;
        if (spec.workers == 0) spec.workers = default_workers();
        std::fprintf(stderr, "sweep: strategy=%s%s network=%s points=%zu sizes=%zu trials=%d\n",
                     to_string(spec.strategy), spec.encoded ? "+shor" : "",
                     to_string(spec.network), spec.points.size(), spec.sizes.size(), spec.trials);
        std::unique_ptr<fbsim::CheckpointFile> ckpt;
        fbsim::CheckpointHooks hooks;
        if (!out.checkpoint.empty() && specs.size() == 1) {
            ckpt = std::make_unique<fbsim::CheckpointFile>(out.checkpoint, spec);
            if (ckpt->resumed_trials() > 0)
                std::fprintf(stderr, "  resuming: %zu trials from checkpoint\n",
                             ckpt->resumed_trials());
            hooks = ckpt->hooks();
        }
        fbsim::SweepResult res =
            fbsim::run_sweep(spec, print_progress, ckpt ? &hooks : nullptr);
        if (csv.is_open()) {
            fbsim::write_results_csv(csv, res, first);
            csv.flush();
        } else {
            fbsim::write_results_csv(std::cout, res, first);
        }
        summaries.push_back(fbsim::sweep_summary_json(res));
        first = false;
    }
    if (!out.summary.empty()) {
        std::ofstream s(out.summary);
        if (!s) {
            std::fprintf(stderr, "error: cannot write summary '%s'\n", out.summary.c_str());
            return kExitUsage;
        }
        s << summaries.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& preset_name,
                 const std::string& strategy_filter, const std::string& out_csv,
                 const std::string& out_summary, const std::string& checkpoint, int workers,
                 int trials_override, long long seed_override) {
    std::vector<fbsim::RunSpec> specs;
    fbsim::OutputPaths out;
    if (!config_path.empty()) {
        fbsim::RunConfig cfg = fbsim::load_run_config(config_path);
        specs.push_back(cfg.spec);
        out = cfg.output;
    } else if (!preset_name.empty()) {
        auto preset = fbsim::find_preset(preset_name);
        if (!preset) {
            std::fprintf(stderr, "error: unknown preset '%s' (available:", preset_name.c_str());
            for (const auto& n : fbsim::preset_names()) std::fprintf(stderr, " %s", n.c_str());
            std::fprintf(stderr, ")\n");
            return kExitUsage;
        }
        specs = preset->specs;
        if (!strategy_filter.empty()) {
            fbsim::Strategy want = fbsim::strategy_from_string(strategy_filter);
            std::erase_if(specs, [&](const fbsim::RunSpec& s) { return s.strategy != want; });
            if (specs.empty()) {
                std::fprintf(stderr, "error: preset '%s' has no %s branch\n", preset_name.c_str(),
                             strategy_filter.c_str());
                return kExitUsage;
            }
        }
    } else {
        std::fprintf(stderr, "error: simulate needs --config or --preset\n");
        return kExitUsage;
    }
    if (!out_csv.empty()) out.csv = out_csv;
    if (!out_summary.empty()) out.summary = out_summary;
    if (!checkpoint.empty()) out.checkpoint = checkpoint;
    for (fbsim::RunSpec& s : specs) {
        if (trials_override > 0) s.trials = trials_override;
        if (seed_override >= 0) s.seed = static_cast<uint64_t>(seed_override);
    }
    return run_specs(specs, out, workers);
}

int cmd_threshold(const std::string& results_path, const std::string& out_json) {
    std::vector<fbsim::ResultRow> rows = fbsim::read_results_csv(results_path);
    if (rows.empty()) {
        std::fprintf(stderr, "error: results CSV is empty\n");
        return kExitUsage;
    }
    std::vector<fbsim::CurveGroup> groups = fbsim::group_results(rows);
    nlohmann::json out = nlohmann::json::array();
    int crossings = 0;
    std::string last_error;
    for (const fbsim::CurveGroup& g : groups) {
        nlohmann::json entry{{"strategy", g.strategy}, {"ray", g.ray}};
        try {
            if (g.curves.size() < 2)
                throw fbsim::NoCrossingError("needs at least two sizes, got " +
                                             std::to_string(g.curves.size()));
            fbsim::ThresholdEstimate est = fbsim::estimate_threshold(g.curves);
            entry["threshold"] = est.value;
            entry["uncertainty"] = est.uncertainty;
            entry["ci_low"] = est.ci_low;
            entry["ci_high"] = est.ci_high;
            entry["pair_crossings"] = est.pair_crossings;
            entry["method"] = est.method;
            std::printf("%-16s %-12s threshold = %.5f +- %.5f  [%.5f, %.5f]\n",
                        g.strategy.c_str(), g.ray.c_str(), est.value, est.uncertainty, est.ci_low,
                        est.ci_high);
            ++crossings;
        } catch (const fbsim::NoCrossingError& e) {
            entry["error"] = e.what();
            last_error = e.what();
            std::printf("%-16s %-12s no crossing: %s\n", g.strategy.c_str(), g.ray.c_str(),
                        e.what());
        }
        out.push_back(std::move(entry));
    }
    // Improvement ratios when both strategies cover a ray.
    for (const auto& a : out) {
        if (!a.contains("threshold") || a.at("strategy") != "static") continue;
        for (const auto& b : out) {
            if (!b.contains("threshold")) continue;
            if (b.at("strategy") == "xba" && b.at("ray") == a.at("ray")) {
                double ratio = b.at("threshold").get<double>() / a.at("threshold").get<double>();
                std::printf("%-16s %-12s xba/static ratio = %.3f\n", "ratio",
                            a.at("ray").get<std::string>().c_str(), ratio);
            }
        }
    }
    if (!out_json.empty()) {
        std::ofstream f(out_json);
        f << out.dump(2) << "\n";
    }
    if (crossings == 0) {
        std::fprintf(stderr, "error: no crossing found in any curve group: %s\n",
                     last_error.c_str());
        return kExitNoCrossing;
    }
    return kExitOk;
}

int cmd_plot(const std::string& results_path, const std::string& out_path) {
    std::vector<fbsim::ResultRow> rows = fbsim::read_results_csv(results_path);
    if (rows.empty()) {
        std::fprintf(stderr, "error: results CSV is empty\n");
        return kExitUsage;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
        return kExitUsage;
    }
    f << fbsim::threshold_plot_svg(rows);
    std::fprintf(stderr, "wrote %s\n", out_path.c_str());

    // Phase plot when the data holds thresholds for two or more rays.
    std::vector<fbsim::CurveGroup> groups = fbsim::group_results(rows);
    std::map<std::string, std::set<std::string>> rays_per_strategy;
    for (const auto& g : groups) rays_per_strategy[g.strategy].insert(g.ray);
    bool multi_ray = false;
    for (const auto& [s, rays] : rays_per_strategy)
        if (rays.size() >= 2) multi_ray = true;
    if (multi_ray) {
        std::map<std::string, std::vector<std::pair<double, double>>> frontier;
        for (const auto& g : groups) {
            if (g.curves.size() < 2) continue;
            try {
                fbsim::ThresholdEstimate est = fbsim::estimate_threshold(g.curves);
                double l_frac = 1.0, pm_frac = 0.0;
                if (g.ray == "pm-only") {
                    l_frac = 0.0;
                    pm_frac = 1.0;
                } else if (g.ray != "loss-only") {
                    double r = std::stod(g.ray.substr(g.ray.find('=') + 1));
                    pm_frac = r / (1.0 + r);
                    l_frac = 1.0 - pm_frac;
                }
                frontier[g.strategy].push_back({est.value * l_frac, est.value * pm_frac});
            } catch (const fbsim::NoCrossingError&) {
            }
        }
        if (!frontier.empty()) {
            std::string phase_path = out_path;
            auto dot = phase_path.rfind(".svg");
            phase_path = (dot == std::string::npos ? phase_path : phase_path.substr(0, dot)) +
                         ".phase.svg";
            std::ofstream pf(phase_path);
            pf << fbsim::phase_plot_svg(frontier);
            std::fprintf(stderr, "wrote %s\n", phase_path.c_str());
        }
    }
    return kExitOk;
}

int cmd_validate_graph(const std::string& kind, int L, bool percolation, int trials,
                       uint64_t seed) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "pass" : "FAIL", name);
        if (!ok) ++failures;
    };
    try {
        if (kind == "six-ring") {
            fbsim::FusionNetwork net = fbsim::build_six_ring(L);
            const auto& g = net.primal;
            check("fusion count is 3 L^3",
                  net.n_fusions() == static_cast<size_t>(3) * L * L * L);
            bool deg_ok = true;
            for (int32_t v = 0; v < g.n_nodes; ++v)
                if (g.degree(v) != 12) deg_ok = false;
            check("primal graph is 12-regular", deg_ok);
            bool handshake = 2 * g.n_edges() == static_cast<size_t>(g.n_nodes) * 12;
            check("handshake identity", handshake);
            bool label_balance = true;
            for (int32_t v = 0; v < g.n_nodes; ++v) {
                int xx = 0, zz = 0;
                auto [b, e] = g.incident(v);
                for (const int32_t* it = b; it != e; ++it)
                    (g.edges[static_cast<size_t>(*it)].label == fbsim::BasisLabel::XX ? xx : zz)++;
                if (xx != zz) label_balance = false;
            }
            check("equal XX and ZZ edges per node", label_balance);
            auto [comp, n_comp] = fbsim::connected_components(
                g, [](const fbsim::GraphEdge& e) { return e.label == fbsim::BasisLabel::ZZ; });
            check("ZZ subgraph splits into L/2 planes", n_comp == L / 2);
            auto plane = fbsim::extract_component(
                g, [](const fbsim::GraphEdge& e) { return e.label == fbsim::BasisLabel::ZZ; }, 0);
            bool tri = plane.n_nodes == L * L;
            for (int32_t v = 0; v < plane.n_nodes && tri; ++v)
                if (plane.degree(v) != 6) tri = false;
            auto tpe = fbsim::triangles_per_edge(plane);
            for (int t : tpe)
                if (t != 2) tri = false;
            check("ZZ planes are triangular lattices", tri);
            auto [fcomp, fn] = fbsim::connected_components(
                g, [](const fbsim::GraphEdge&) { return true; });
            check("XX edges connect the planes", fn == 1);
            if (L == 4) {
                auto desc = fbsim::six_ring_description(4);
                auto dg = fbsim::derive_syndrome_graph(desc);
                check("matches stabilizer derivation at L=4",
                      fbsim::graphs_equal(net.primal, dg.primal) &&
                          fbsim::graphs_equal(net.dual, dg.dual));
            }
            if (percolation) {
                double below = fbsim::erasure_percolation_probe(g, 0.105, trials, seed);
                double above = fbsim::erasure_percolation_probe(g, 0.135, trials, seed + 1);
                std::printf("  spanning frequency: %.4f at 10.5%%, %.4f at 13.5%%\n", below,
                            above);
                check("spanning frequency brackets the erasure threshold",
                      below < 0.5 && above > 0.5);
            }
        } else if (kind == "square-pair") {
            fbsim::FusionNetwork net = fbsim::build_square_pair(L, L);
            check("fusion count is 2 W H",
                  net.n_fusions() == static_cast<size_t>(2) * L * L);
            bool deg_ok = true;
            for (int32_t v = 0; v < net.primal.n_nodes; ++v)
                if (net.primal.degree(v) != 4) deg_ok = false;
            check("primal graph is 4-regular", deg_ok);
        } else {
            std::fprintf(stderr, "error: unknown network kind '%s'\n", kind.c_str());
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return failures == 0 ? kExitOk : kExitValidationFailure;
}

int cmd_derive_graph(int L, const std::string& out_path, bool check) {
    auto desc = fbsim::six_ring_description(L);
    auto dg = fbsim::derive_syndrome_graph(desc);
    fbsim::UnitCellTable table = fbsim::extract_unit_cell(desc, dg);
    nlohmann::json j = fbsim::unit_cell_to_json(table);
    if (check) {
        nlohmann::json embedded = nlohmann::json::parse(fbsim::kSixRingUnitCellJson);
        embedded["derived_from_L"] = L;  // the comparison is structural
        if (embedded == j) {
            std::printf("derived table matches the embedded table (%zu checks, L=%d)\n",
                        dg.checks.size(), L);
            return kExitOk;
        }
        std::printf("derived table DIFFERS from the embedded table:\n%s\n", j.dump(2).c_str());
        return kExitValidationFailure;
    }
    if (out_path.empty()) {
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
            return kExitUsage;
        }
        f << j.dump(2) << "\n";
        std::fprintf(stderr, "wrote %s\n", out_path.c_str());
    }
    return kExitOk;
}

int cmd_dump_strategy(double loss, double pm, int grid, const std::string& out_path) {
    fbsim::ErrorParams params{loss, pm};
    fbsim::StrategyTable table(params, fbsim::StrategyTable::all_options(), grid);
    nlohmann::json betas = nlohmann::json::array();
    for (int g = 0; g < grid; ++g) {
        const auto& e = table.entry(g);
        nlohmann::json policy = nlohmann::json::array();
        for (int slot = 0; slot < 4; ++slot) {
            nlohmann::json per_hist = nlohmann::json::array();
            for (int h = 0; h < (1 << (2 * slot)); ++h) {
                fbsim::FusionConfig c = table.policy(g, slot, h);
                per_hist.push_back(std::string(c.boosted ? "boosted-" : "unboosted-") +
                                   (c.fail_basis == fbsim::FailBasis::XX ? "XX-fail" : "ZZ-fail"));
            }
            policy.push_back(std::move(per_hist));
        }
        betas.push_back({{"beta", static_cast<double>(g) / (grid - 1)},
                         {"expected_cost", e.value},
                         {"p_encoded_xx_erased", e.p_xbar_erased},
                         {"p_encoded_zz_erased", e.p_zbar_erased},
                         {"policy", policy}});
    }
    nlohmann::json j{{"loss", loss},
                     {"p_m", pm},
                     {"grid_points", grid},
                     {"history_encoding", "base-4 digits per slot: 0 both, 1 XX only, 2 ZZ only, 3 none"},
                     {"betas", betas}};
    if (out_path.empty()) {
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::ofstream f(out_path);
        f << j.dump(2) << "\n";
        std::fprintf(stderr, "wrote %s\n", out_path.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for fusion networks with reconfigurable biased erasures"};
    app.require_subcommand(1);

    // simulate
    std::string config_path, preset_name, strategy_filter, out_csv, out_summary, checkpoint;
    int workers = 0, trials_override = 0;
    long long seed_override = -1;
    CLI::App* sim = app.add_subcommand("simulate", "run a Monte Carlo sweep");
    sim->add_option("--config", config_path, "JSON run configuration");
    sim->add_option("--preset", preset_name, "canned recipe (fig7-desk, fig7-paper, fig8-rays, fig9-desk)");
    sim->add_option("--strategy", strategy_filter, "restrict a preset to one strategy");
    sim->add_option("--out", out_csv, "results CSV path (default: stdout)");
    sim->add_option("--summary", out_summary, "summary JSON path");
    sim->add_option("--checkpoint", checkpoint, "trial digest JSONL for resumable runs");
    sim->add_option("--workers", workers, "worker threads (default: FBSIM_WORKERS or all cores)");
    sim->add_option("--trials", trials_override, "override trials per point");
    sim->add_option("--seed", seed_override, "override master seed");

    // threshold
    std::string thr_results, thr_out;
    CLI::App* thr = app.add_subcommand("threshold", "estimate threshold crossings from a results CSV");
    thr->add_option("results", thr_results, "results CSV from simulate")->required();
    thr->add_option("--out", thr_out, "write estimates as JSON");

    // plot
    std::string plot_results, plot_out;
    CLI::App* plt = app.add_subcommand("plot", "emit SVG plots from a results CSV");
    plt->add_option("results", plot_results, "results CSV from simulate")->required();
    plt->add_option("--out", plot_out, "output SVG path")->required();

    // validate-graph
    std::string vg_kind = "six-ring";
    int vg_L = 8, vg_trials = 2000;
    uint64_t vg_seed = 99;
    bool vg_perc = false;
    CLI::App* vg = app.add_subcommand("validate-graph", "structural invariants of a network");
    vg->add_option("--kind", vg_kind, "six-ring | square-pair");
    vg->add_option("--L", vg_L, "lattice size");
    vg->add_flag("--percolation", vg_perc, "also probe the erasure threshold bracket");
    vg->add_option("--trials", vg_trials, "percolation trials per point");
    vg->add_option("--seed", vg_seed, "percolation seed");

    // derive-graph
    int dg_L = 4;
    std::string dg_out;
    bool dg_check = false;
    CLI::App* dg = app.add_subcommand("derive-graph",
                                      "derive the six-ring unit-cell table from stabilizer algebra");
    dg->add_option("--L", dg_L, "derivation instance size (even, >= 4)");
    dg->add_option("--out", dg_out, "write the table JSON here");
    dg->add_flag("--check", dg_check, "diff against the embedded table");

    // dump-strategy
    double ds_loss = 0.075, ds_pm = 0.0;
    int ds_grid = 64;
    std::string ds_out;
    CLI::App* ds = app.add_subcommand("dump-strategy", "export an encoded-fusion strategy table");
    ds->add_option("--loss", ds_loss, "photon loss probability");
    ds->add_option("--pm", ds_pm, "measurement error probability");
    ds->add_option("--grid", ds_grid, "bias grid points");
    ds->add_option("--out", ds_out, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, preset_name, strategy_filter, out_csv, out_summary,
                                checkpoint, workers, trials_override, seed_override);
        if (thr->parsed()) return cmd_threshold(thr_results, thr_out);
        if (plt->parsed()) return cmd_plot(plot_results, plot_out);
        if (vg->parsed()) return cmd_validate_graph(vg_kind, vg_L, vg_perc, vg_trials, vg_seed);
        if (dg->parsed()) return cmd_derive_graph(dg_L, dg_out, dg_check);
        if (ds->parsed()) return cmd_dump_strategy(ds_loss, ds_pm, ds_grid, ds_out);
    } catch (const fbsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const fbsim::NoCrossingError& e) {
        std::fprintf(stderr, "no crossing: %s\n", e.what());
        return kExitNoCrossing;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
