#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbsim/rng.hpp"
#include "fbsim/stats.hpp"

namespace fbsim {

struct CurvePoint {
    double x = 0.0;  // swept error parameter
    int64_t trials = 0;
    int64_t failures = 0;
};

// Failure-rate curves per lattice size, sharing a parameter grid.
using ThresholdCurves = std::map<int, std::vector<CurvePoint>>;

struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThresholdEstimate {
    double value = 0.0;
    double uncertainty = 0.0;     // spread of pairwise crossings
    double ci_low = 0.0;          // bootstrap percentile interval
    double ci_high = 0.0;
    std::vector<double> pair_crossings;
    std::string method;
};

namespace detail {

// Crossing of two curves from a weighted linear fit of the logit-rate
// difference against log(x). Throws NoCrossingError when the fitted curves
// do not intersect inside the swept range.
inline double pair_crossing(const std::vector<CurvePoint>& small_L,
                            const std::vector<CurvePoint>& large_L) {
    if (small_L.size() != large_L.size() || small_L.size() < 2)
        throw std::invalid_argument("threshold curves must share a grid of >= 2 points");
    std::vector<double> lx, dy, w;
    for (size_t i = 0; i < small_L.size(); ++i) {
        const CurvePoint& a = small_L[i];
        const CurvePoint& b = large_L[i];
        if (a.x != b.x) throw std::invalid_argument("threshold curves must share a grid");
        if (a.x <= 0.0) throw std::invalid_argument("sweep parameter must be positive");
        double ra = adjusted_rate(a.failures, a.trials);
        double rb = adjusted_rate(b.failures, b.trials);
        double var = 1.0 / (static_cast<double>(a.trials) * ra * (1.0 - ra)) +
                     1.0 / (static_cast<double>(b.trials) * rb * (1.0 - rb));
        lx.push_back(std::log(a.x));
        dy.push_back(logit(rb) - logit(ra));
        w.push_back(1.0 / var);
    }
    // Weighted least squares: dy ~ alpha + beta * lx.
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sw += w[i];
        swx += w[i] * lx[i];
        swy += w[i] * dy[i];
        swxx += w[i] * lx[i] * lx[i];
        swxy += w[i] * lx[i] * dy[i];
    }
    double det = sw * swxx - swx * swx;
    if (det == 0.0) throw NoCrossingError("degenerate grid: cannot fit crossing");
    double beta = (sw * swxy - swx * swy) / det;
    double alpha = (swxx * swy - swx * swxy) / det;
    if (beta <= 0.0)
        throw NoCrossingError("curves do not steepen with size; no crossing in range");
    double cross = std::exp(-alpha / beta);
    double xmin = std::exp(*std::min_element(lx.begin(), lx.end()));
    double xmax = std::exp(*std::max_element(lx.begin(), lx.end()));
    // Allow a small extrapolation margin beyond the swept window.
    if (cross < 0.5 * xmin || cross > 2.0 * xmax)
        throw NoCrossingError("fitted crossing at " + std::to_string(cross) +
                              " lies outside the swept range [" + std::to_string(xmin) + ", " +
                              std::to_string(xmax) + "]");
    return cross;
}

inline double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double stdev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

// Crossing-point threshold estimate: one crossing per adjacent size pair
// from local logit fits, averaged; uncertainty from the pair spread and a
// binomial bootstrap percentile interval.
inline ThresholdEstimate estimate_threshold(const ThresholdCurves& curves, int bootstrap = 100,
                                            uint64_t bootstrap_seed = 12345) {
    if (curves.size() < 2)
        throw NoCrossingError("threshold estimation needs at least two sizes");
    std::vector<int> sizes;
    for (const auto& [L, pts] : curves) {
        if (pts.size() < 2) throw std::invalid_argument("curves need at least two points");
        sizes.push_back(L);
    }
    ThresholdEstimate est;
    est.method = "pairwise logit-crossing, binomial bootstrap";
    for (size_t i = 0; i + 1 < sizes.size(); ++i)
        est.pair_crossings.push_back(
            detail::pair_crossing(curves.at(sizes[i]), curves.at(sizes[i + 1])));
    est.value = detail::mean(est.pair_crossings);
    est.uncertainty = est.pair_crossings.size() >= 2 ? detail::stdev(est.pair_crossings) : 0.0;

    // Bootstrap over binomial resamples of every point.
    std::vector<double> boots;
    Rng rng = make_rng(bootstrap_seed);
    for (int b = 0; b < bootstrap; ++b) {
        ThresholdCurves resampled;
        for (const auto& [L, pts] : curves) {
            std::vector<CurvePoint> rp = pts;
            for (CurvePoint& p : rp) {
                double rate = static_cast<double>(p.failures) / static_cast<double>(p.trials);
                std::binomial_distribution<int64_t> dist(p.trials, rate);
                p.failures = dist(rng);
            }
            resampled[L] = std::move(rp);
        }
        try {
            std::vector<double> cr;
            for (size_t i = 0; i + 1 < sizes.size(); ++i)
                cr.push_back(detail::pair_crossing(resampled.at(sizes[i]),
                                                   resampled.at(sizes[i + 1])));
            boots.push_back(detail::mean(cr));
        } catch (const NoCrossingError&) {
            // Resample lost the crossing; skip it.
        }
    }
    if (boots.size() >= 10) {
        std::sort(boots.begin(), boots.end());
        est.ci_low = boots[static_cast<size_t>(0.025 * static_cast<double>(boots.size()))];
        est.ci_high = boots[std::min(boots.size() - 1,
                                     static_cast<size_t>(0.975 * static_cast<double>(boots.size())))];
        est.uncertainty = std::max(est.uncertainty, detail::stdev(boots));
    } else {
        est.ci_low = est.value - est.uncertainty;
        est.ci_high = est.value + est.uncertainty;
    }
    return est;
}

}  // namespace fbsim
