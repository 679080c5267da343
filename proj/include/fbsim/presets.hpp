#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbsim/harness.hpp"

namespace fbsim {

// Canned sweep recipes. Desk-scale presets use L in {8,12,16} with 1e4
// trials per point; the paper-scale variant uses L in {12,16,20} with 1e5
// trials (slow, multi-hour).
struct Preset {
    std::string name;
    std::string description;
    std::vector<RunSpec> specs;
};

namespace detail {

inline std::vector<ErrorPoint> loss_grid(std::initializer_list<double> ls) {
    std::vector<ErrorPoint> p;
    for (double l : ls) p.push_back({l, 0.0});
    return p;
}
inline std::vector<ErrorPoint> pm_grid(std::initializer_list<double> ps) {
    std::vector<ErrorPoint> p;
    for (double pm : ps) p.push_back({0.0, pm});
    return p;
}

inline RunSpec base_spec(Strategy strategy, std::vector<int> sizes, int trials, uint64_t seed) {
    RunSpec s;
    s.network = NetworkKind::SixRing;
    s.sizes = std::move(sizes);
    s.strategy = strategy;
    s.trials = trials;
    s.seed = seed;
    return s;
}

}  // namespace detail

inline std::vector<ErrorPoint> static_loss_grid() {
    return detail::loss_grid({0.0030, 0.0036, 0.0042, 0.0048, 0.0054, 0.0060, 0.0066});
}
inline std::vector<ErrorPoint> xba_loss_grid() {
    return detail::loss_grid({0.0120, 0.0130, 0.0140, 0.0150, 0.0160, 0.0170, 0.0185});
}
inline std::vector<ErrorPoint> static_pm_grid() {
    return detail::pm_grid({0.0006, 0.0009, 0.0012, 0.0015, 0.0019, 0.0024});
}
inline std::vector<ErrorPoint> xba_pm_grid() {
    return detail::pm_grid({0.0010, 0.0013, 0.0016, 0.0019, 0.0023, 0.0028});
}
inline std::vector<ErrorPoint> encoded_xba_loss_grid() {
    return detail::loss_grid({0.0650, 0.0690, 0.0720, 0.0750, 0.0780, 0.0810});
}
inline std::vector<ErrorPoint> encoded_random_loss_grid() {
    return detail::loss_grid({0.0220, 0.0240, 0.0255, 0.0270, 0.0285, 0.0300});
}

inline std::optional<Preset> find_preset(const std::string& name) {
    using detail::base_spec;
    if (name == "fig7-desk" || name == "fig7-paper") {
        bool paper = name == "fig7-paper";
        std::vector<int> sizes = paper ? std::vector<int>{12, 16, 20} : std::vector<int>{8, 12, 16};
        int trials = paper ? 100000 : 10000;
        Preset p{name,
                 paper ? "loss-only thresholds, paper scale (slow)"
                       : "loss-only thresholds, static and adaptive branches, desk scale",
                 {}};
        RunSpec st = base_spec(Strategy::Static, sizes, trials, 7001);
        st.points = static_loss_grid();
        RunSpec xb = base_spec(Strategy::Xba, sizes, trials, 7002);
        xb.points = xba_loss_grid();
        p.specs = {st, xb};
        return p;
    }
    if (name == "fig9-desk") {
        Preset p{name, "Shor-encoded loss thresholds, adaptive and random-basis, desk scale", {}};
        RunSpec xb = base_spec(Strategy::Xba, {8, 12, 16}, 10000, 9001);
        xb.encoded = true;
        xb.points = encoded_xba_loss_grid();
        RunSpec rb = base_spec(Strategy::RandomBasis, {8, 12, 16}, 10000, 9002);
        rb.encoded = true;
        rb.points = encoded_random_loss_grid();
        p.specs = {xb, rb};
        return p;
    }
    if (name == "fig8-rays") {
        Preset p{name, "measurement-error-only and loss-only rays, both strategies", {}};
        RunSpec st_pm = base_spec(Strategy::Static, {12, 16, 20}, 5000, 8001);
        st_pm.points = static_pm_grid();
        RunSpec xb_pm = base_spec(Strategy::Xba, {12, 16, 20}, 5000, 8002);
        xb_pm.points = xba_pm_grid();
        RunSpec st_l = base_spec(Strategy::Static, {12, 16, 20}, 5000, 8003);
        st_l.points = static_loss_grid();
        RunSpec xb_l = base_spec(Strategy::Xba, {12, 16, 20}, 5000, 8004);
        xb_l.points = xba_loss_grid();
        p.specs = {st_pm, xb_pm, st_l, xb_l};
        return p;
    }
    return std::nullopt;
}

inline std::vector<std::string> preset_names() {
    return {"fig7-desk", "fig7-paper", "fig8-rays", "fig9-desk"};
}

}  // namespace fbsim
