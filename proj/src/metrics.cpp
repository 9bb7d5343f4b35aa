#include "richclub/metrics.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "richclub/error.hpp"

namespace richclub {

namespace {

void check_window(const TemporalNetwork& net, std::size_t t, std::size_t delta) {
    if (delta < 1 || t < 1 || t + delta - 1 > net.snapshot_count())
        throw ConfigError("window [" + std::to_string(t) + ", " + std::to_string(t + delta - 1) +
                          "] outside [1, " + std::to_string(net.snapshot_count()) + "]");
}

double pair_capacity(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; }

}  // namespace

std::optional<double> topo_rc(const Snapshot& graph, const RichSet& rich) {
    if (rich.size() < 2) return std::nullopt;
    std::size_t e = 0;
    for (const auto& edge : graph.edges())
        if (rich.contains(edge.u) && rich.contains(edge.v)) ++e;
    return 2.0 * static_cast<double>(e) /
           (static_cast<double>(rich.size()) * static_cast<double>(rich.size() - 1));
}

double weighted_connectedness(const Snapshot& graph, const RichSet& rich) {
    if (rich.size() < 2) return 0.0;
    double c = 0.0;
    for (const auto& edge : graph.edges())
        if (rich.contains(edge.u) && rich.contains(edge.v)) c += edge.weight;
    return c;
}

std::vector<double> connectedness_series(const TemporalNetwork& net, const RichSet& rich) {
    std::vector<double> out;
    out.reserve(net.snapshot_count());
    for (const auto& s : net.snapshots()) out.push_back(weighted_connectedness(s, rich));
    return out;
}

std::vector<double> window_means(std::span<const double> series, std::size_t delta) {
    if (delta < 1 || delta > series.size()) throw ConfigError("window length outside series");
    std::vector<double> out(series.size() - delta + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = i; j < i + delta; ++j) sum += series[j];
        out[i] = sum / static_cast<double>(delta);
    }
    return out;
}

WindowStat max_window_mean(std::span<const double> series, std::size_t delta) {
    const auto means = window_means(series, delta);
    std::size_t best = 0;
    for (std::size_t i = 1; i < means.size(); ++i)
        if (means[i] > means[best]) best = i;
    return {best + 1, delta, means[best]};
}

std::optional<double> avg_weighted_connectedness(const TemporalNetwork& net, const RichSet& rich, std::size_t t,
                                                 std::size_t delta) {
    check_window(net, t, delta);
    if (rich.size() < 2) return std::nullopt;
    const auto series = connectedness_series(net, rich);
    return window_means(std::span<const double>(series).subspan(t - 1, delta), delta).front();
}

std::optional<WindowStat> wtrc_numerator(const TemporalNetwork& net, const RichSet& rich, std::size_t delta) {
    check_window(net, 1, delta);
    if (rich.size() < 2) return std::nullopt;
    const auto series = connectedness_series(net, rich);
    return max_window_mean(series, delta);
}

std::optional<WindowStat> ttrc_numerator(const TemporalNetwork& net, const RichSet& rich, std::size_t delta) {
    return wtrc_numerator(unweight(net), rich, delta);
}

StabilityRuns::StabilityRuns(const TemporalNetwork& net, const RichSet& rich)
    : rich_size_(rich.size()), T_(net.snapshot_count()) {
    std::unordered_map<std::uint64_t, std::size_t> slot;
    std::vector<std::vector<char>> presence;
    for (std::size_t t = 0; t < T_; ++t) {
        for (const auto& e : net.snapshots()[t].edges()) {
            if (!rich.contains(e.u) || !rich.contains(e.v)) continue;
            auto [it, inserted] = slot.emplace(pair_key(e.u, e.v), presence.size());
            if (inserted) presence.emplace_back(T_, 0);
            presence[it->second][t] = 1;
        }
    }
    runs_.reserve(presence.size());
    for (const auto& p : presence) {
        std::vector<std::uint32_t> run(T_ + 1, 0);
        for (std::size_t t = T_; t-- > 0;) run[t] = p[t] ? run[t + 1] + 1 : 0;
        run.pop_back();
        runs_.push_back(std::move(run));
    }
}

std::size_t StabilityRuns::stable_pairs(std::size_t t, std::size_t delta) const {
    std::size_t n = 0;
    for (const auto& run : runs_)
        if (run[t - 1] >= delta) ++n;
    return n;
}

std::optional<WindowStat> StabilityRuns::max_cohesion(std::size_t delta) const {
    if (delta < 1 || delta > T_) throw ConfigError("delta outside [1, T]");
    if (rich_size_ < 2) return std::nullopt;
    const double capacity = pair_capacity(rich_size_);
    WindowStat best{1, delta, -1.0};
    for (std::size_t t = 1; t + delta - 1 <= T_; ++t) {
        const double v = static_cast<double>(stable_pairs(t, delta)) / capacity;
        if (v > best.value) best = {t, delta, v};
    }
    return best;
}

std::optional<double> delta_cohesion(const TemporalNetwork& net, const RichSet& rich, std::size_t t,
                                     std::size_t delta) {
    check_window(net, t, delta);
    if (rich.size() < 2) return std::nullopt;
    StabilityRuns runs(net, rich);
    return static_cast<double>(runs.stable_pairs(t, delta)) / pair_capacity(rich.size());
}

std::optional<WindowStat> trc_numerator(const TemporalNetwork& net, const RichSet& rich, std::size_t delta) {
    check_window(net, 1, delta);
    return StabilityRuns(net, rich).max_cohesion(delta);
}

NormalizedCoefficient normalize(double observed, std::span<const double> null_values) {
    if (null_values.empty()) throw ConfigError("normalization needs at least one null value");
    NormalizedCoefficient out;
    out.observed = observed;
    out.null_values.assign(null_values.begin(), null_values.end());
    double sum = 0.0;
    std::size_t ge = 0, le = 0;
    for (double v : null_values) {
        sum += v;
        if (v >= observed) ++ge;
        if (v <= observed) ++le;
    }
    const double n1 = static_cast<double>(null_values.size() + 1);
    out.null_mean = sum / static_cast<double>(null_values.size());
    out.p_two_tailed = std::min(1.0, 2.0 * std::min((ge + 1) / n1, (le + 1) / n1));
    out.defined = out.null_mean > 0.0;
    if (out.defined) out.coefficient = observed / out.null_mean;
    return out;
}

NormalizedCoefficient normalize_undefined(std::span<const double> null_values) {
    NormalizedCoefficient out;
    out.null_values.assign(null_values.begin(), null_values.end());
    if (!null_values.empty()) {
        double sum = 0.0;
        for (double v : null_values) sum += v;
        out.null_mean = sum / static_cast<double>(null_values.size());
    }
    return out;
}

}  // namespace richclub
