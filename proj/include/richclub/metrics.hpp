#pragma once

// Rich-club numerators and null-model normalization.
//
// Window convention: a duration `delta` starting at t covers snapshots
// t .. t+delta-1, so valid starts are 1 .. T-delta+1. Undefined values (fewer
// than two rich nodes) are std::nullopt, never zero.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "richclub/temporal_graph.hpp"

namespace richclub {

struct WindowStat {
    std::size_t t_start = 1;  // 1-based
    std::size_t delta = 1;
    double value = 0.0;

    friend bool operator==(const WindowStat&, const WindowStat&) = default;
};

struct NormalizedCoefficient {
    std::optional<double> observed;
    std::vector<double> null_values;
    double null_mean = 0.0;
    std::optional<double> coefficient;  // observed / null_mean, present iff defined
    std::optional<double> p_two_tailed;
    bool defined = false;

    friend bool operator==(const NormalizedCoefficient&, const NormalizedCoefficient&) = default;
};

// 2E / (N(N-1)) over rich-rich edges.
std::optional<double> topo_rc(const Snapshot& graph, const RichSet& rich);

// Sum of rich-rich edge weights; 0 when |rich| < 2.
double weighted_connectedness(const Snapshot& graph, const RichSet& rich);

// Fraction of rich pairs whose edge is present in every snapshot of the window.
std::optional<double> delta_cohesion(const TemporalNetwork& net, const RichSet& rich, std::size_t t,
                                     std::size_t delta);

// max_t delta_cohesion, earliest maximizing start.
std::optional<WindowStat> trc_numerator(const TemporalNetwork& net, const RichSet& rich, std::size_t delta);

// Mean weighted connectedness over the window's snapshots.
std::optional<double> avg_weighted_connectedness(const TemporalNetwork& net, const RichSet& rich, std::size_t t,
                                                 std::size_t delta);

// max_t avg_weighted_connectedness, earliest maximizing start.
std::optional<WindowStat> wtrc_numerator(const TemporalNetwork& net, const RichSet& rich, std::size_t delta);

// wtrc_numerator(unweight(net), rich, delta).
std::optional<WindowStat> ttrc_numerator(const TemporalNetwork& net, const RichSet& rich, std::size_t delta);

// Per-snapshot weighted connectedness C(t), t = 1..T (index 0 is t = 1).
std::vector<double> connectedness_series(const TemporalNetwork& net, const RichSet& rich);

// Window means of a per-snapshot series; element i is the window starting at t = i+1.
std::vector<double> window_means(std::span<const double> series, std::size_t delta);

// Maximum of window means with earliest tie-break.
WindowStat max_window_mean(std::span<const double> series, std::size_t delta);

// Stability table for delta-cohesion: for every rich-rich pair ever present, the
// length of the run of consecutive presence starting at each t.
class StabilityRuns {
public:
    StabilityRuns(const TemporalNetwork& net, const RichSet& rich);

    std::size_t rich_size() const { return rich_size_; }
    // Pairs stable over [t, t+delta-1], t 1-based.
    std::size_t stable_pairs(std::size_t t, std::size_t delta) const;
    std::optional<WindowStat> max_cohesion(std::size_t delta) const;

private:
    std::size_t rich_size_ = 0;
    std::size_t T_ = 0;
    std::vector<std::vector<std::uint32_t>> runs_;  // per pair, per t (0-based)
};

// coefficient = observed / mean(nulls); p uses the add-one two-tailed convention
//   p = min(1, 2 min((#{null >= obs} + 1)/(n+1), (#{null <= obs} + 1)/(n+1))).
// Throws ConfigError on an empty null sample.
NormalizedCoefficient normalize(double observed, std::span<const double> null_values);

// Same, for an undefined observation: keeps the nulls, marks the cell undefined.
NormalizedCoefficient normalize_undefined(std::span<const double> null_values);

}  // namespace richclub
