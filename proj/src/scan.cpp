#include "richclub/scan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <sstream>

#include "parallel.hpp"
#include "richclub/error.hpp"

namespace richclub {

namespace {

using Numerators = std::vector<std::vector<std::optional<WindowStat>>>;  // [k][delta]

std::string normalize_key(std::string key) {
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return c == '_' ? '-' : static_cast<char>(std::tolower(c)); });
    return key;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("invalid value '" + raw + "' for " + key);
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& raw, const std::string& key) {
    std::vector<T> out;
    std::stringstream ss(raw);
    for (std::string item; std::getline(ss, item, ',');)
        if (!trim(item).empty()) out.push_back(parse_number<T>(item, key));
    return out;
}

TemporalNetwork working_network(const TemporalNetwork& net, Metric m) {
    switch (m) {
        case Metric::ttrc:
        case Metric::trc:
            return unweight(net);
        case Metric::static_wrc:
        case Metric::static_toporc: {
            std::vector<std::string> labels(net.node_labels().begin(), net.node_labels().end());
            return TemporalNetwork(std::move(labels), {"aggregate"}, {aggregate(net).graph});
        }
        default:
            return net;
    }
}

Numerators numerators(const TemporalNetwork& work, Metric m, const std::vector<RichSet>& sets,
                      const std::vector<std::size_t>& deltas) {
    Numerators out(sets.size(), std::vector<std::optional<WindowStat>>(deltas.size()));
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const RichSet& rich = sets[k];
        if (rich.size() < 2) continue;
        if (m == Metric::static_wrc || m == Metric::static_toporc) {
            const Snapshot& g = work.snapshots().front();
            const double v = m == Metric::static_wrc ? weighted_connectedness(g, rich) : *topo_rc(g, rich);
            for (std::size_t d = 0; d < deltas.size(); ++d) out[k][d] = WindowStat{1, deltas[d], v};
        } else if (m == Metric::trc) {
            StabilityRuns runs(work, rich);
            for (std::size_t d = 0; d < deltas.size(); ++d) out[k][d] = runs.max_cohesion(deltas[d]);
        } else {
            const auto series = connectedness_series(work, rich);
            for (std::size_t d = 0; d < deltas.size(); ++d) out[k][d] = max_window_mean(series, deltas[d]);
        }
    }
    return out;
}

struct GridSpec {
    std::vector<RichSet> observed_sets;
    std::vector<double> thresholds;  // used only when recomputing per null
    bool recompute = false;
    std::vector<std::size_t> deltas;  // reported durations
};

std::vector<RichSet> sets_for(const TemporalNetwork& net, const ScanConfig& c, const std::vector<double>& thresholds) {
    const auto richness = richness_vector(net, c.richness);
    std::vector<RichSet> sets;
    sets.reserve(thresholds.size());
    for (double k : thresholds) sets.push_back(rich_set(richness, k, c.mode));
    return sets;
}

std::vector<std::vector<ScanCell>> run_grid(const TemporalNetwork& net, const ScanConfig& c, const GridSpec& spec) {
    const Metric m = c.metric;
    const TemporalNetwork work = working_network(net, m);
    const NullRecipe recipe = resolved_recipe(c);
    const std::size_t null_count = resolved_null_count(c);
    const std::vector<std::size_t> eval_deltas = is_static(m) ? std::vector<std::size_t>(spec.deltas.size(), 1)
                                                              : spec.deltas;

    // Item 0 is the observed network, item i > 0 is null model i - 1.
    std::vector<Numerators> results(null_count + 1);
    detail::parallel_for(null_count + 1, c.threads, [&](std::size_t item) {
        if (item == 0) {
            results[0] = numerators(work, m, spec.observed_sets, eval_deltas);
            return;
        }
        const TemporalNetwork null_net = make_null(work, recipe, RngStream(c.seed, item - 1));
        const auto sets = spec.recompute ? sets_for(null_net, c, spec.thresholds) : spec.observed_sets;
        results[item] = numerators(null_net, m, sets, eval_deltas);
    });

    std::vector<std::vector<ScanCell>> cells(spec.observed_sets.size(), std::vector<ScanCell>(spec.deltas.size()));
    std::vector<double> nulls;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        for (std::size_t d = 0; d < spec.deltas.size(); ++d) {
            nulls.clear();
            for (std::size_t i = 1; i <= null_count; ++i)
                if (const auto& v = results[i][k][d]) nulls.push_back(v->value);
            const auto& obs = results[0][k][d];
            ScanCell& cell = cells[k][d];
            if (obs && !nulls.empty()) {
                cell.coefficient = normalize(obs->value, nulls);
            } else {
                cell.coefficient = normalize_undefined(nulls);
                if (obs) cell.coefficient.observed = obs->value;
            }
            if (obs && !is_static(m)) cell.t_start = obs->t_start;
        }
    }
    return cells;
}

const char* kAggregateDegreeWarning =
    "aggregate-degree richness is not preserved by edge switching; rich sets are recomputed for every null "
    "model, which changes the number of rich nodes at each threshold";

}  // namespace

std::string to_string(Metric m) {
    switch (m) {
        case Metric::wtrc: return "wtrc";
        case Metric::ttrc: return "ttrc";
        case Metric::trc: return "trc";
        case Metric::static_wrc: return "static-wrc";
        case Metric::static_toporc: return "static-toporc";
        case Metric::mixed: return "mixed";
    }
    return "wtrc";
}

Metric parse_metric(const std::string& raw) {
    const std::string s = normalize_key(trim(raw));
    for (Metric m : {Metric::wtrc, Metric::ttrc, Metric::trc, Metric::static_wrc, Metric::static_toporc, Metric::mixed})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown metric '" + raw + "'");
}

bool is_static(Metric m) { return m == Metric::static_wrc || m == Metric::static_toporc; }

NullRecipe default_recipe(Metric m) {
    switch (m) {
        case Metric::wtrc: return NullRecipe::wtrc();
        case Metric::ttrc:
        case Metric::trc: return NullRecipe::ttrc();
        case Metric::mixed: return NullRecipe::mixed();
        case Metric::static_wrc: return {{WeightDecorrelateStep{}}};
        case Metric::static_toporc: return {{EdgeSwitchStep{}}};
    }
    return NullRecipe::wtrc();
}

NullRecipe resolved_recipe(const ScanConfig& c) { return c.recipe ? *c.recipe : default_recipe(c.metric); }

std::size_t resolved_null_count(const ScanConfig& c) {
    if (c.null_count) return *c.null_count;
    return is_static(c.metric) ? 100 : 10;
}

bool apply_scan_setting(ScanConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = normalize_key(trim(raw_key));
    const std::string value = trim(raw_value);
    if (key == "metric") c.metric = parse_metric(value);
    else if (key == "richness") c.richness = parse_richness_property(value);
    else if (key == "k-count") c.k_count = parse_number<std::size_t>(value, key);
    else if (key == "delta-count") c.delta_count = parse_number<std::size_t>(value, key);
    else if (key == "k-values") c.k_values = parse_list<double>(value, key);
    else if (key == "delta-values") c.delta_values = parse_list<std::size_t>(value, key);
    else if (key == "delta-min") c.delta_min = parse_number<std::size_t>(value, key);
    else if (key == "delta-endpoint") c.delta_endpoint = parse_number<std::size_t>(value, key);
    else if (key == "recipe") c.recipe = parse_recipe(value);
    else if (key == "nulls") c.null_count = parse_number<std::size_t>(value, key);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(value, key);
    else if (key == "threshold-mode") c.mode = parse_threshold_mode(value);
    else if (key == "threads") c.threads = parse_number<unsigned>(value, key);
    else return false;
    return true;
}

std::vector<ConfigEntry> read_key_values(std::istream& in) {
    std::vector<ConfigEntry> out;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        out.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
    }
    return out;
}

ScanConfig parse_scan_config(std::istream& in) {
    ScanConfig c;
    for (const auto& e : read_key_values(in))
        if (!apply_scan_setting(c, e.key, e.value))
            throw ConfigError("config line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    return c;
}

ThresholdGrid richness_grid(const RichnessVector& richness, std::size_t count) {
    if (count < 2) throw ConfigError("richness grid needs at least 2 thresholds");
    if (richness.values.empty()) throw ConfigError("richness vector is empty");
    const auto [lo_it, hi_it] = std::minmax_element(richness.values.begin(), richness.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) return {{lo}, true};
    ThresholdGrid grid;
    grid.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        grid.values.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    grid.values.back() = hi;
    return grid;
}

std::vector<std::size_t> delta_grid(std::size_t T, std::size_t count, std::size_t endpoint, std::size_t delta_min) {
    if (count < 1) throw ConfigError("delta grid needs at least one duration");
    if (endpoint < 1 || endpoint > T)
        throw ConfigError("delta endpoint " + std::to_string(endpoint) + " outside [1, " + std::to_string(T) + "]");
    if (delta_min < 1 || delta_min > endpoint) throw ConfigError("delta minimum outside [1, endpoint]");
    if (count == 1 || delta_min == endpoint) return {endpoint};
    std::vector<std::size_t> out;
    const double span = static_cast<double>(endpoint - delta_min);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = static_cast<double>(delta_min) + span * static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(static_cast<std::size_t>(std::lround(v)));
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<CellIndex> ScanResult::argmax() const {
    std::optional<CellIndex> best;
    double best_value = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k)
        for (std::size_t d = 0; d < cells[k].size(); ++d) {
            const auto& c = cells[k][d].coefficient;
            if (!c.defined) continue;
            if (!best || *c.coefficient > best_value) {
                best = CellIndex{k, d};
                best_value = *c.coefficient;
            }
        }
    return best;
}

ScanResult scan(const TemporalNetwork& net, const ScanConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    if (config.k_values.empty() && config.k_count < 2) throw ConfigError("k-count must be at least 2");
    if (config.delta_values.empty() && config.delta_count < 1) throw ConfigError("delta-count must be at least 1");
    if (resolved_null_count(config) < 1) throw ConfigError("null count must be at least 1");
    const NullRecipe recipe = resolved_recipe(config);
    recipe.validate();

    const std::size_t T = net.snapshot_count();
    ScanResult result;
    result.config = config;
    result.config.recipe = recipe;
    result.config.null_count = resolved_null_count(config);
    result.node_labels.assign(net.node_labels().begin(), net.node_labels().end());
    result.snapshot_count = T;
    result.richness = richness_vector(net, config.richness);

    if (!config.k_values.empty()) {
        result.thresholds = config.k_values;
    } else {
        auto grid = richness_grid(result.richness, config.k_count);
        if (grid.degenerate)
            result.warnings.push_back("all richness values are equal; threshold grid collapsed to a single value");
        result.thresholds = std::move(grid.values);
    }

    if (is_static(config.metric)) {
        result.deltas = {T};
    } else if (!config.delta_values.empty()) {
        for (std::size_t d : config.delta_values)
            if (d < 1 || d > T)
                throw ConfigError("delta " + std::to_string(d) + " outside [1, " + std::to_string(T) + "]");
        result.deltas = config.delta_values;
    } else {
        result.deltas = delta_grid(T, config.delta_count, config.delta_endpoint.value_or(T), config.delta_min);
    }

    GridSpec spec;
    spec.thresholds = result.thresholds;
    spec.deltas = result.deltas;
    spec.observed_sets = sets_for(net, config, result.thresholds);
    spec.recompute = config.richness == RichnessProperty::aggregate_degree;
    if (spec.recompute) result.warnings.push_back(kAggregateDegreeWarning);
    for (const auto& s : spec.observed_sets)
        result.membership.emplace_back(s.members().begin(), s.members().end());

    result.cells = run_grid(net, config, spec);
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

ScanCell evaluate_cell(const TemporalNetwork& net, const RichSet& rich, std::size_t delta, const ScanConfig& config) {
    resolved_recipe(config).validate();
    if (!is_static(config.metric) && (delta < 1 || delta > net.snapshot_count()))
        throw ConfigError("delta outside [1, T]");
    GridSpec spec;
    spec.observed_sets = {rich};
    spec.deltas = {is_static(config.metric) ? net.snapshot_count() : delta};
    return run_grid(net, config, spec).front().front();
}

std::vector<TimePoint> coefficient_timeseries(const TemporalNetwork& net, double threshold, std::size_t delta,
                                              const ScanConfig& config) {
    const Metric m = config.metric;
    if (is_static(m)) throw ConfigError("time series needs a temporal metric");
    const std::size_t T = net.snapshot_count();
    if (delta < 1 || delta > T) throw ConfigError("delta outside [1, T]");
    const NullRecipe recipe = resolved_recipe(config);
    recipe.validate();
    const std::size_t null_count = resolved_null_count(config);
    if (null_count < 1) throw ConfigError("null count must be at least 1");
    const TemporalNetwork work = working_network(net, m);
    const bool recompute = config.richness == RichnessProperty::aggregate_degree;
    const RichSet observed_set = sets_for(net, config, {threshold}).front();

    auto per_t = [&](const TemporalNetwork& g, const RichSet& rich) -> std::optional<std::vector<double>> {
        if (rich.size() < 2) return std::nullopt;
        if (m == Metric::trc) {
            StabilityRuns runs(g, rich);
            const double capacity = static_cast<double>(rich.size()) * static_cast<double>(rich.size() - 1) / 2.0;
            std::vector<double> out;
            for (std::size_t t = 1; t + delta - 1 <= T; ++t)
                out.push_back(static_cast<double>(runs.stable_pairs(t, delta)) / capacity);
            return out;
        }
        return window_means(connectedness_series(g, rich), delta);
    };

    std::vector<std::optional<std::vector<double>>> results(null_count + 1);
    detail::parallel_for(null_count + 1, config.threads, [&](std::size_t item) {
        if (item == 0) {
            results[0] = per_t(work, observed_set);
            return;
        }
        const TemporalNetwork null_net = make_null(work, recipe, RngStream(config.seed, item - 1));
        const RichSet set = recompute ? sets_for(null_net, config, {threshold}).front() : observed_set;
        results[item] = per_t(null_net, set);
    });

    std::vector<TimePoint> out(T - delta + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        TimePoint& p = out[i];
        p.t = i + 1;
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t j = 1; j <= null_count; ++j)
            if (results[j]) {
                sum += (*results[j])[i];
                ++n;
            }
        p.null_mean = n ? sum / static_cast<double>(n) : 0.0;
        if (results[0]) {
            p.observed = (*results[0])[i];
            if (p.null_mean > 0.0) p.coefficient = *p.observed / p.null_mean;
        }
    }
    return out;
}

std::vector<double> flow_sum_timeseries(const TemporalNetwork& net) {
    std::vector<double> out;
    out.reserve(net.snapshot_count());
    for (const auto& s : net.snapshots()) out.push_back(s.total_weight());
    return out;
}

std::optional<LinearFit> minmax_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("regression series differ in length");
    if (x.size() < 2) return std::nullopt;
    const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    if (*xlo == *xhi || *ylo == *yhi) return std::nullopt;

    const std::size_t n = x.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = (x[i] - *xlo) / (*xhi - *xlo);
        ys[i] = (y[i] - *ylo) / (*yhi - *ylo);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    return LinearFit{slope, my - slope * mx};
}

}  // namespace richclub
