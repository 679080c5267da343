#pragma once

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "fbsim/harness.hpp"
#include "fbsim/threshold.hpp"

namespace fbsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeaderComment = "# fbsim-results v1";
inline constexpr const char* kCsvColumns =
    "strategy,network,L,l,p_m,trials,failures,rate,ci_low,ci_high,seed";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Run configuration (JSON, schema-checked: unknown keys are rejected).

struct OutputPaths {
    std::string csv;
    std::string summary;
    std::string checkpoint;
};

struct RunConfig {
    RunSpec spec;
    OutputPaths output;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

}  // namespace detail

inline std::vector<ErrorPoint> grid_points(const nlohmann::json& grid) {
    detail::reject_unknown_keys(grid, {"kind", "values", "pm_ratio", "loss_ratio"}, "grid");
    std::string kind = grid.at("kind").get<std::string>();
    std::vector<double> values = grid.at("values").get<std::vector<double>>();
    if (values.empty()) throw ConfigError("grid.values must be non-empty");
    std::vector<ErrorPoint> pts;
    if (kind == "loss-only") {
        for (double v : values) pts.push_back({v, 0.0});
    } else if (kind == "pm-only") {
        for (double v : values) pts.push_back({0.0, v});
    } else if (kind == "ray") {
        double rp = detail::get_or<double>(grid, "pm_ratio", 1.0);
        double rl = detail::get_or<double>(grid, "loss_ratio", 1.0);
        double norm = rp + rl;
        if (norm <= 0.0) throw ConfigError("ray needs positive pm_ratio + loss_ratio");
        for (double v : values) pts.push_back({v * rl / norm, v * rp / norm});
    } else {
        throw ConfigError("grid.kind must be loss-only | pm-only | ray, got '" + kind + "'");
    }
    return pts;
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
    detail::reject_unknown_keys(j,
                                {"network", "sizes", "strategy", "encoded", "boosted_baseline",
                                 "grid", "xba", "trials", "seed", "workers", "output"},
                                "config");
    RunConfig cfg;
    std::string network = j.at("network").get<std::string>();
    if (network == "six-ring")
        cfg.spec.network = NetworkKind::SixRing;
    else if (network == "square-pair")
        cfg.spec.network = NetworkKind::SquarePair;
    else
        throw ConfigError("network must be six-ring | square-pair, got '" + network + "'");
    cfg.spec.sizes = j.at("sizes").get<std::vector<int>>();
    cfg.spec.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    cfg.spec.encoded = detail::get_or<bool>(j, "encoded", false);
    cfg.spec.boosted_baseline = detail::get_or<bool>(j, "boosted_baseline", true);
    cfg.spec.points = grid_points(j.at("grid"));
    if (j.contains("xba")) {
        const auto& x = j.at("xba");
        detail::reject_unknown_keys(x, {"accretion", "exponent", "squeeze"}, "xba");
        cfg.spec.xba.accretion = detail::get_or<double>(x, "accretion", 0.5);
        cfg.spec.xba.exponent = detail::get_or<double>(x, "exponent", 0.5);
        cfg.spec.xba.squeeze = detail::get_or<double>(x, "squeeze", 0.2);
    }
    cfg.spec.trials = j.at("trials").get<int>();
    cfg.spec.seed = detail::get_or<uint64_t>(j, "seed", 1);
    cfg.spec.workers = detail::get_or<int>(j, "workers", 0);
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown_keys(o, {"csv", "summary", "checkpoint"}, "output");
        cfg.output.csv = detail::get_or<std::string>(o, "csv", "");
        cfg.output.summary = detail::get_or<std::string>(o, "summary", "");
        cfg.output.checkpoint = detail::get_or<std::string>(o, "checkpoint", "");
    }
    try {
        cfg.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    try {
        return parse_run_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config schema error: " + std::string(e.what()));
    }
}

// Stable hash of the parts of a spec that determine its results.
inline uint64_t config_hash(const RunSpec& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    mix(static_cast<uint64_t>(s.network));
    mix(static_cast<uint64_t>(s.strategy));
    mix(s.encoded ? 2 : 1);
    mix(s.boosted_baseline ? 2 : 1);
    for (int L : s.sizes) mix(static_cast<uint64_t>(L) + 0x9e37);
    auto mixd = [&](double d) {
        uint64_t b;
        static_assert(sizeof(b) == sizeof(d));
        std::memcpy(&b, &d, sizeof(b));
        mix(b);
    };
    for (const ErrorPoint& p : s.points) {
        mixd(p.loss);
        mixd(p.p_m);
    }
    mixd(s.xba.accretion);
    mixd(s.xba.exponent);
    mixd(s.xba.squeeze);
    mix(static_cast<uint64_t>(s.trials));
    mix(s.seed);
    return h;
}

// ---------------------------------------------------------------------------
// Results CSV.

struct ResultRow {
    std::string strategy;
    std::string network;
    int L = 0;
    double l = 0.0;
    double p_m = 0.0;
    int64_t trials = 0;
    int64_t failures = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    uint64_t seed = 0;
};

inline std::string strategy_column(const RunSpec& spec) {
    std::string s = to_string(spec.strategy);
    if (spec.encoded) s += "+shor";
    return s;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline void write_results_csv(std::ostream& os, const SweepResult& result, bool with_header) {
    if (with_header) os << kCsvHeaderComment << "\n" << kCsvColumns << "\n";
    for (const PointResult& p : result.points) {
        os << strategy_column(result.spec) << ',' << to_string(result.spec.network) << ',' << p.L
           << ',' << format_double(p.point.loss) << ',' << format_double(p.point.p_m) << ','
           << p.trials << ',' << p.failures << ',' << format_double(p.rate) << ','
           << format_double(p.ci_low) << ',' << format_double(p.ci_high) << ','
           << result.spec.seed << "\n";
    }
}

inline std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read results CSV '" + path + "'");
    std::vector<ResultRow> rows;
    std::string line;
    bool saw_header = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kCsvColumns)
                throw std::runtime_error("unexpected CSV columns in '" + path + "': " + line);
            saw_header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 11)
            throw std::runtime_error("malformed CSV row in '" + path + "': " + line);
        ResultRow r;
        r.strategy = fields[0];
        r.network = fields[1];
        r.L = std::stoi(fields[2]);
        r.l = std::stod(fields[3]);
        r.p_m = std::stod(fields[4]);
        r.trials = std::stoll(fields[5]);
        r.failures = std::stoll(fields[6]);
        r.rate = std::stod(fields[7]);
        r.ci_low = std::stod(fields[8]);
        r.ci_high = std::stod(fields[9]);
        r.seed = std::stoull(fields[10]);
        rows.push_back(std::move(r));
    }
    if (!saw_header) throw std::runtime_error("results CSV '" + path + "' has no header");
    return rows;
}

// ---------------------------------------------------------------------------
// Summary JSON.

inline nlohmann::json sweep_summary_json(const SweepResult& result) {
    nlohmann::json pts = nlohmann::json::array();
    for (const PointResult& p : result.points) {
        nlohmann::json e{{"l", p.point.loss},
                         {"p_m", p.point.p_m},
                         {"L", p.L},
                         {"trials", p.trials},
                         {"failures", p.failures},
                         {"rate", p.rate},
                         {"ci_low", p.ci_low},
                         {"ci_high", p.ci_high},
                         {"fusion_successes", p.fusion_successes},
                         {"fusion_failures", p.fusion_failures},
                         {"fusion_losses", p.fusion_losses},
                         {"boosted", p.boosted},
                         {"trivial_decisions", p.trivial},
                         {"erasure_cause", p.erasure_cause},
                         {"matching_cause", p.matching_cause},
                         {"seconds", p.seconds}};
        if (p.biased_fusions > 0) {
            e["biased_fusions"] = p.biased_fusions;
            e["prio_erased"] = p.prio_erased;
            e["nonprio_erased"] = p.nonprio_erased;
        }
        pts.push_back(std::move(e));
    }
    return nlohmann::json{{"version", kVersion},
                          {"strategy", strategy_column(result.spec)},
                          {"network", to_string(result.spec.network)},
                          {"config_hash", config_hash(result.spec)},
                          {"seed", result.spec.seed},
                          {"trials_per_point", result.spec.trials},
                          {"xba",
                           {{"accretion", result.spec.xba.accretion},
                            {"exponent", result.spec.xba.exponent},
                            {"squeeze", result.spec.xba.squeeze}}},
                          {"points", pts}};
}

// ---------------------------------------------------------------------------
// Checkpoint files: one JSON line per finished trial, preceded by a header
// line binding the file to the config. Resuming replays stored digests and
// skips their trials.

class CheckpointFile {
public:
    CheckpointFile(std::string path, const RunSpec& spec)
        : path_(std::move(path)), hash_(config_hash(spec)) {
        load();
        out_.open(path_, std::ios::app);
        if (!out_) throw std::runtime_error("cannot open checkpoint file '" + path_ + "'");
        if (fresh_) {
            out_ << nlohmann::json{{"checkpoint", "fbsim-v1"}, {"config_hash", hash_}}.dump()
                 << "\n";
            out_.flush();
        }
    }

    CheckpointHooks hooks() {
        CheckpointHooks h;
        h.already_done = [this](size_t pi, size_t si, int t) {
            return done_.count(key(pi, si, t)) > 0;
        };
        h.preload = [this](size_t pi, size_t si, PointResult& pr) {
            auto it = stored_.find(block_key(pi, si));
            if (it == stored_.end()) return;
            for (const TrialRecord& r : it->second) pr.absorb(r);
        };
        h.on_trial = [this](size_t pi, size_t si, int t, const TrialRecord& r) {
            out_ << "{\"p\":" << pi << ",\"s\":" << si << ",\"t\":" << t << ",\"seed\":" << r.seed
                 << ",\"pf\":" << int(r.primal_fail) << ",\"df\":" << int(r.dual_fail)
                 << ",\"cause\":" << int(static_cast<uint8_t>(r.cause)) << ",\"cnt\":["
                 << r.counts.successes << ',' << r.counts.failures << ',' << r.counts.losses << ','
                 << r.counts.boosted << ',' << r.counts.trivial << "],\"bx\":[" << r.biased_fusions
                 << ',' << r.prio_erased << ',' << r.nonprio_erased << "]}\n";
        };
        return h;
    }

    size_t resumed_trials() const { return done_.size(); }

private:
    static uint64_t key(size_t pi, size_t si, int t) {
        return (static_cast<uint64_t>(pi) << 44) | (static_cast<uint64_t>(si) << 36) |
               static_cast<uint64_t>(t);
    }
    static uint64_t block_key(size_t pi, size_t si) {
        return (static_cast<uint64_t>(pi) << 44) | (static_cast<uint64_t>(si) << 36);
    }

    void load() {
        std::ifstream in(path_);
        if (!in) {
            fresh_ = true;
            return;
        }
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;  // torn tail line from an interruption
            if (first) {
                first = false;
                if (!j.contains("checkpoint") ||
                    j.at("config_hash").get<uint64_t>() != hash_)
                    throw std::runtime_error("checkpoint file '" + path_ +
                                             "' belongs to a different config");
                continue;
            }
            TrialRecord r;
            size_t pi = j.at("p").get<size_t>();
            size_t si = j.at("s").get<size_t>();
            int t = j.at("t").get<int>();
            r.seed = j.at("seed").get<uint64_t>();
            r.primal_fail = static_cast<uint8_t>(j.at("pf").get<int>());
            r.dual_fail = static_cast<uint8_t>(j.at("df").get<int>());
            r.cause = static_cast<FailureCause>(j.at("cause").get<int>());
            auto cnt = j.at("cnt");
            r.counts.successes = cnt[0];
            r.counts.failures = cnt[1];
            r.counts.losses = cnt[2];
            r.counts.boosted = cnt[3];
            r.counts.trivial = cnt[4];
            auto bx = j.at("bx");
            r.biased_fusions = bx[0];
            r.prio_erased = bx[1];
            r.nonprio_erased = bx[2];
            if (done_.insert(key(pi, si, t)).second) stored_[block_key(pi, si)].push_back(r);
        }
        if (first) fresh_ = true;
    }

    std::string path_;
    uint64_t hash_;
    bool fresh_ = false;
    std::ofstream out_;
    std::unordered_set<uint64_t> done_;
    std::unordered_map<uint64_t, std::vector<TrialRecord>> stored_;
};

// ---------------------------------------------------------------------------
// Grouping results for threshold estimation. Rows are grouped by strategy
// and ray direction; the swept parameter is l + p_m.

struct CurveGroup {
    std::string strategy;
    std::string ray;  // "loss-only" | "pm-only" | "l:p_m=a:b"
    ThresholdCurves curves;
};

inline std::vector<CurveGroup> group_results(const std::vector<ResultRow>& rows) {
    auto classify = [](const ResultRow& r) -> std::string {
        if (r.p_m == 0.0) return "loss-only";
        if (r.l == 0.0) return "pm-only";
        char buf[48];
        std::snprintf(buf, sizeof(buf), "l:p_m=%.6g", r.p_m / r.l);
        return buf;
    };
    std::map<std::pair<std::string, std::string>, CurveGroup> groups;
    for (const ResultRow& r : rows) {
        auto k = std::make_pair(r.strategy, classify(r));
        CurveGroup& g = groups[k];
        g.strategy = r.strategy;
        g.ray = k.second;
        g.curves[r.L].push_back(CurvePoint{r.l + r.p_m, r.trials, r.failures});
    }
    std::vector<CurveGroup> out;
    for (auto& [k, g] : groups) {
        for (auto& [L, pts] : g.curves)
            std::sort(pts.begin(), pts.end(),
                      [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace fbsim
