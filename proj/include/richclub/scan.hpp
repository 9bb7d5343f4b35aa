#pragma once

// Grid scans over richness thresholds and window durations, normalized against
// Monte-Carlo null models, plus per-timestamp coefficient series.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "richclub/metrics.hpp"
#include "richclub/null_models.hpp"
#include "richclub/temporal_graph.hpp"

namespace richclub {

enum class Metric { wtrc, ttrc, trc, static_wrc, static_toporc, mixed };

std::string to_string(Metric m);
Metric parse_metric(const std::string& s);
bool is_static(Metric m);

struct ScanConfig {
    Metric metric = Metric::wtrc;
    RichnessProperty richness = RichnessProperty::temporal_edge_count;
    std::size_t k_count = 12;
    std::size_t delta_count = 8;
    std::vector<double> k_values;           // overrides k_count when non-empty
    std::vector<std::size_t> delta_values;  // overrides delta_count when non-empty
    std::size_t delta_min = 1;
    std::optional<std::size_t> delta_endpoint;  // defaults to T
    std::optional<NullRecipe> recipe;           // defaults by metric
    std::optional<std::size_t> null_count;      // defaults: 10 temporal, 100 static
    std::uint64_t seed = 0;
    ThresholdMode mode = ThresholdMode::inclusive;
    unsigned threads = 1;  // 0 = hardware concurrency; never affects results

    // Compares every result-determining field, i.e. all but `threads`.
    friend bool operator==(const ScanConfig& a, const ScanConfig& b) {
        return a.metric == b.metric && a.richness == b.richness && a.k_count == b.k_count &&
               a.delta_count == b.delta_count && a.k_values == b.k_values && a.delta_values == b.delta_values &&
               a.delta_min == b.delta_min && a.delta_endpoint == b.delta_endpoint && a.recipe == b.recipe &&
               a.null_count == b.null_count && a.seed == b.seed && a.mode == b.mode;
    }
};

NullRecipe default_recipe(Metric m);
NullRecipe resolved_recipe(const ScanConfig& c);
std::size_t resolved_null_count(const ScanConfig& c);

// Applies one `key = value` setting; keys match the CLI long flags
// (metric, richness, k-count, delta-count, k-values, delta-values, delta-min,
// delta-endpoint, recipe, nulls, seed, threshold-mode, threads).
// Returns false for an unknown key, throws ConfigError for a bad value.
bool apply_scan_setting(ScanConfig& config, const std::string& key, const std::string& value);

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

// `key = value` lines; '#' starts a comment; blank lines ignored.
std::vector<ConfigEntry> read_key_values(std::istream& in);

ScanConfig parse_scan_config(std::istream& in);

struct ThresholdGrid {
    std::vector<double> values;
    bool degenerate = false;  // all richness values equal
};

// `count` evenly spaced thresholds from min to max richness, inclusive.
ThresholdGrid richness_grid(const RichnessVector& richness, std::size_t count);

// `count` evenly spaced integers from delta_min to endpoint, rounded, deduplicated.
std::vector<std::size_t> delta_grid(std::size_t T, std::size_t count, std::size_t endpoint,
                                    std::size_t delta_min = 1);

struct ScanCell {
    NormalizedCoefficient coefficient;
    std::optional<std::size_t> t_start;  // earliest argmax window start of the observed network

    friend bool operator==(const ScanCell&, const ScanCell&) = default;
};

struct CellIndex {
    std::size_t k = 0;
    std::size_t delta = 0;
};

struct ScanResult {
    ScanConfig config;  // recipe and null count resolved
    std::vector<std::string> node_labels;
    std::size_t snapshot_count = 0;
    RichnessVector richness;
    std::vector<double> thresholds;
    std::vector<std::size_t> deltas;
    std::vector<std::vector<NodeIndex>> membership;  // observed rich set per threshold
    std::vector<std::vector<ScanCell>> cells;        // [k][delta]
    std::vector<std::string> warnings;
    double elapsed_seconds = 0.0;  // not serialized

    // Defined cell with the largest coefficient; ties go to the lowest (k, delta) index.
    std::optional<CellIndex> argmax() const;

    friend bool operator==(const ScanResult& a, const ScanResult& b) {
        return a.config == b.config && a.node_labels == b.node_labels && a.snapshot_count == b.snapshot_count &&
               a.richness.property == b.richness.property && a.richness.values == b.richness.values &&
               a.thresholds == b.thresholds && a.deltas == b.deltas && a.membership == b.membership &&
               a.cells == b.cells && a.warnings == b.warnings;
    }
};

ScanResult scan(const TemporalNetwork& net, const ScanConfig& config);

// One normalized cell for an explicitly given rich set. `delta` is ignored for
// static metrics. Null streams follow the same (seed, null index) scheme as scan.
ScanCell evaluate_cell(const TemporalNetwork& net, const RichSet& rich, std::size_t delta, const ScanConfig& config);

struct TimePoint {
    std::size_t t = 1;
    std::optional<double> observed;
    double null_mean = 0.0;
    std::optional<double> coefficient;
};

// Observed window value at every start t divided by the null mean at the same t.
std::vector<TimePoint> coefficient_timeseries(const TemporalNetwork& net, double threshold, std::size_t delta,
                                              const ScanConfig& config);

// Total edge weight per snapshot.
std::vector<double> flow_sum_timeseries(const TemporalNetwork& net);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Min-max scales x and y to [0, 1], then ordinary least squares of y on x.
// nullopt when fewer than two points or either series is constant.
std::optional<LinearFit> minmax_regression(std::span<const double> x, std::span<const double> y);

}  // namespace richclub
