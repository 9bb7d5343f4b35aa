#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "richclub/error.hpp"
#include "richclub/io.hpp"
#include "richclub/scan.hpp"
#include "richclub/synthetic.hpp"
#include "richclub/temporal_graph.hpp"

namespace richclub::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
    std::string input;
    std::string output_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string config;
};

// Flag values kept as text, applied after the config file so flags win.
using Settings = std::map<std::string, std::string>;

void add_settings(CLI::App* cmd, Settings& settings, const std::vector<std::pair<std::string, std::string>>& keys) {
    for (const auto& [key, help] : keys) cmd->add_option("--" + key, settings[key], help);
}

std::vector<std::pair<std::string, std::string>> given(const CLI::App* cmd, const Settings& settings) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, value] : settings)
        if (cmd->get_option("--" + key)->count() > 0) out.emplace_back(key, value);
    return out;
}

std::vector<ConfigEntry> config_entries(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return read_key_values(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string unknown_key(const std::string& path, const ConfigEntry& e) {
    return path + ": config line " + std::to_string(e.line) + ": unknown key '" + e.key + "'";
}

TemporalNetwork load_network(const std::string& path) {
    if (path.empty()) throw InputError("--input is required");
    try {
        const auto records = read_flow_csv_file(path);
        return build_temporal_network(records);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    fn(out);
    if (!out) throw Error("error while writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) {
    write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

std::string text(const std::optional<double>& v) { return v ? format_number_12(*v) : "NA"; }

json fit_json(const std::optional<LinearFit>& fit, std::size_t n) {
    if (!fit) return {{"defined", false}, {"points", n}, {"slope", nullptr}, {"intercept", nullptr}};
    return {{"defined", true}, {"points", n}, {"slope", fit->slope}, {"intercept", fit->intercept}};
}

// Scan settings shared by `scan` and `timeseries`.
const std::vector<std::pair<std::string, std::string>> kScanKeys = {
    {"metric", "wtrc | ttrc | trc | static-wrc | static-toporc | mixed"},
    {"richness", "temporal-edge-count | aggregate-degree"},
    {"k-count", "number of richness thresholds"},
    {"delta-count", "number of window durations"},
    {"k-values", "explicit comma-separated thresholds"},
    {"delta-values", "explicit comma-separated durations"},
    {"delta-min", "smallest duration of the grid"},
    {"delta-endpoint", "largest duration of the grid (default T)"},
    {"recipe", "null recipe, e.g. \"edge-switch(10), sequence-shuffle\""},
    {"nulls", "number of null networks"},
    {"threshold-mode", "inclusive | strict"},
};

ScanConfig build_scan_config(const Globals& g, const CLI::App* cmd, const Settings& settings,
                             std::map<std::string, std::string>* extra, const std::vector<std::string>& extra_keys) {
    ScanConfig config;
    for (const auto& e : config_entries(g.config)) {
        if (apply_scan_setting(config, e.key, e.value)) continue;
        if (extra && std::find(extra_keys.begin(), extra_keys.end(), e.key) != extra_keys.end()) {
            (*extra)[e.key] = e.value;
            continue;
        }
        throw ConfigError(unknown_key(g.config, e));
    }
    for (const auto& [key, value] : given(cmd, settings)) {
        if (extra && std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end()) (*extra)[key] = value;
        else apply_scan_setting(config, key, value);
    }
    if (g.seed) config.seed = *g.seed;
    if (g.threads) config.threads = *g.threads;
    return config;
}

int cmd_scan(const Globals& g, const CLI::App* cmd, const Settings& settings, bool svg, std::ostream& out,
             std::ostream& err) {
    const ScanConfig config = build_scan_config(g, cmd, settings, nullptr, {});
    const TemporalNetwork net = load_network(g.input);
    const ScanResult result = scan(net, config);

    const fs::path dir = g.output_dir;
    ensure_dir(dir);
    write_json(dir / "result.json", to_json(result));
    const std::string stem = to_string(result.config.metric);
    const std::pair<const char*, MatrixField> matrices[] = {
        {"_coefficient.csv", MatrixField::coefficient}, {"_observed.csv", MatrixField::observed},
        {"_null_mean.csv", MatrixField::null_mean},     {"_pvalue.csv", MatrixField::p_value},
        {"_tstart.csv", MatrixField::t_start},
    };
    for (const auto& [suffix, field] : matrices)
        write_file(dir / (stem + suffix), [&](std::ostream& o) { write_matrix_csv(o, result, field); });
    write_file(dir / "membership.csv", [&](std::ostream& o) { write_membership_csv(o, result); });
    if (svg) write_file(dir / "heatmap.svg", [&](std::ostream& o) { o << render_heatmap_svg(result); });
    write_json(dir / "timing.json", {{"elapsed_seconds", result.elapsed_seconds}, {"threads", config.threads}});

    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    if (auto best = result.argmax()) {
        const ScanCell& cell = result.cells[best->k][best->delta];
        out << "argmax k=" << format_number_12(result.thresholds[best->k]) << " delta=" << result.deltas[best->delta]
            << " coefficient=" << text(cell.coefficient.coefficient) << " p=" << text(cell.coefficient.p_two_tailed)
            << " t_start=" << (cell.t_start ? std::to_string(*cell.t_start) : "NA") << '\n';
    } else {
        out << "argmax none (no defined cell)\n";
    }
    return kOk;
}

int cmd_timeseries(const Globals& g, const CLI::App* cmd, const Settings& settings, std::ostream& out) {
    std::map<std::string, std::string> extra;
    const ScanConfig config = build_scan_config(g, cmd, settings, &extra, {"k", "delta", "split"});
    auto number = [&](const std::string& key, bool required) -> std::optional<double> {
        auto it = extra.find(key);
        if (it == extra.end()) {
            if (required) throw ConfigError("--" + key + " is required");
            return std::nullopt;
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(key);
            return v;
        } catch (const std::logic_error&) {
            throw ConfigError("invalid value '" + it->second + "' for " + key);
        }
    };
    const double k = *number("k", true);
    const double delta_value = *number("delta", true);
    const auto split = number("split", false);
    if (delta_value < 1 || delta_value != std::floor(delta_value)) throw ConfigError("delta must be a positive integer");
    if (split && (*split < 1 || *split != std::floor(*split))) throw ConfigError("split must be a positive integer");
    const auto delta = static_cast<std::size_t>(delta_value);

    const TemporalNetwork net = load_network(g.input);
    const auto series = coefficient_timeseries(net, k, delta, config);
    const auto flows = flow_sum_timeseries(net);

    const fs::path dir = g.output_dir;
    ensure_dir(dir);
    write_file(dir / "timeseries.csv", [&](std::ostream& o) {
        o << "t,observed,null_mean,coefficient,flow_sum\n";
        for (const auto& p : series)
            o << p.t << ',' << text(p.observed) << ',' << format_number_12(p.null_mean) << ',' << text(p.coefficient)
              << ',' << format_number_12(flows[p.t - 1]) << '\n';
    });

    auto regress = [&](auto keep) {
        std::vector<double> x, y;
        for (const auto& p : series)
            if (p.coefficient && keep(p.t)) {
                x.push_back(flows[p.t - 1]);
                y.push_back(*p.coefficient);
            }
        return fit_json(minmax_regression(x, y), x.size());
    };
    json summary = {
        {"metric", to_string(config.metric)},
        {"k", k},
        {"delta", delta},
        {"seed", config.seed},
        {"full", regress([](std::size_t) { return true; })},
    };
    if (split) {
        const auto t0 = static_cast<std::size_t>(*split);
        summary["split"] = t0;
        summary["pre"] = regress([&](std::size_t t) { return t < t0; });
        summary["post"] = regress([&](std::size_t t) { return t >= t0; });
    }
    write_json(dir / "regression.json", summary);

    auto line = [&](const char* name, const json& fit) {
        out << name << ": ";
        if (fit["defined"].get<bool>())
            out << "slope=" << format_number_12(fit["slope"].get<double>())
                << " intercept=" << format_number_12(fit["intercept"].get<double>());
        else
            out << "undefined";
        out << " (n=" << fit["points"].get<std::size_t>() << ")\n";
    };
    line("full", summary["full"]);
    if (split) {
        line("pre", summary["pre"]);
        line("post", summary["post"]);
    }
    return kOk;
}

const std::vector<std::pair<std::string, std::string>> kSynthKeys = {
    {"nodes", "node count"},
    {"snapshots", "snapshot count"},
    {"club-size", "planted club size"},
    {"scale", "club weight multiplier (>= 1)"},
    {"window-start", "first boosted snapshot"},
    {"window-end", "last boosted snapshot"},
    {"density", "background pair probability per snapshot"},
    {"weight-law", "lognormal | uniform"},
    {"law-a", "lognormal mu or uniform low"},
    {"law-b", "lognormal sigma or uniform high"},
    {"step-after", "club weights change after this snapshot"},
    {"step-factor", "multiplier applied after step-after"},
};

int cmd_synth(const Globals& g, const CLI::App* cmd, const Settings& settings, std::ostream& out) {
    PlantedSpec spec;
    for (const auto& e : config_entries(g.config)) {
        if (e.key == "threads") continue;
        if (!apply_planted_setting(spec, e.key, e.value)) throw ConfigError(unknown_key(g.config, e));
    }
    for (const auto& [key, value] : given(cmd, settings)) apply_planted_setting(spec, key, value);
    if (g.seed) spec.seed = *g.seed;
    const PlantedInstance inst = generate_planted(spec);

    const fs::path dir = g.output_dir;
    ensure_dir(dir);
    write_file(dir / "flows.csv", [&](std::ostream& o) { write_flow_csv(o, inst.network); });
    write_json(dir / "truth.json", to_json(inst.truth, spec));
    out << "wrote " << inst.network.node_count() << " nodes, " << inst.network.snapshot_count() << " snapshots, "
        << inst.network.temporal_edge_count() << " temporal edges\n";
    return kOk;
}

std::size_t pick_index(const std::vector<double>& values, double wanted, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::abs(values[i] - wanted) <= 1e-9 * std::max(1.0, std::abs(values[i]))) return i;
    std::string list;
    for (double v : values) list += (list.empty() ? "" : ", ") + format_number_12(v);
    throw ConfigError(std::string("no ") + what + " equal to " + format_number_12(wanted) + " in the result (have " +
                      list + ")");
}

int cmd_export_geo(const Globals& g, const std::string& result_path, const std::string& geometry_path,
                   std::optional<double> k, std::optional<double> delta, std::ostream& out, std::ostream& err) {
    std::ifstream rin(result_path);
    if (!rin) throw InputError("cannot open result file '" + result_path + "'");
    ScanResult result;
    try {
        result = scan_result_from_json(json::parse(rin));
    } catch (const json::exception& e) {
        throw InputError(result_path + ": " + e.what());
    } catch (const ConfigError& e) {
        throw InputError(result_path + ": " + e.what());
    }

    CellIndex cell;
    if (k || delta) {
        if (!k || !delta) throw ConfigError("--k and --delta must be given together");
        std::vector<double> deltas(result.deltas.begin(), result.deltas.end());
        cell = {pick_index(result.thresholds, *k, "threshold"), pick_index(deltas, *delta, "delta")};
    } else if (auto best = result.argmax()) {
        cell = *best;
    } else {
        throw ConfigError("result has no defined cell; select one with --k and --delta");
    }

    std::ifstream gin(geometry_path);
    if (!gin) throw InputError("cannot open geometry file '" + geometry_path + "'");
    std::vector<NodeGeometry> geometry;
    try {
        geometry = read_geometry_csv(gin);
    } catch (const InputError& e) {
        throw InputError(geometry_path + ": " + e.what());
    }
    const TemporalNetwork net = load_network(g.input);

    std::vector<std::string> warnings;
    const json layer = make_geojson(result, cell, net, geometry, &warnings);
    const fs::path dir = g.output_dir;
    ensure_dir(dir);
    write_json(dir / "rich_club.geojson", layer);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    out << "exported " << layer["features"].size() << " features for k=" << format_number_12(result.thresholds[cell.k])
        << " delta=" << result.deltas[cell.delta] << '\n';
    return kOk;
}

int cmd_aggregate(const Globals& g, std::ostream& out) {
    const TemporalNetwork net = load_network(g.input);
    const AggregateGraph agg = aggregate(net);
    const fs::path dir = g.output_dir;
    ensure_dir(dir);
    write_file(dir / "aggregate_edges.csv", [&](std::ostream& o) { write_aggregate_edges_csv(o, net, agg); });
    write_file(dir / "aggregate_nodes.csv", [&](std::ostream& o) { write_aggregate_nodes_csv(o, net, agg); });
    out << "aggregate graph: " << net.node_count() << " nodes, " << agg.graph.edge_count() << " edges\n";
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rich-club analysis of weighted temporal networks", "richclub"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Globals g;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    app.add_option("--input", g.input, "flow CSV (timestamp,origin,destination,weight)");
    app.add_option("--output-dir", g.output_dir, "directory for output files")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads (0 = all cores)");
    app.add_option("--config", g.config, "key = value settings file; flags override it");

    Settings scan_settings, ts_settings, synth_settings;
    bool svg = false;
    auto* scan_cmd = app.add_subcommand("scan", "scan the richness x duration grid")->fallthrough();
    add_settings(scan_cmd, scan_settings, kScanKeys);
    scan_cmd->add_flag("--svg", svg, "also write heatmap.svg");

    auto* ts_cmd = app.add_subcommand("timeseries", "normalized coefficient at every window start")->fallthrough();
    auto ts_keys = kScanKeys;
    ts_keys.emplace_back("k", "richness threshold");
    ts_keys.emplace_back("delta", "window duration");
    ts_keys.emplace_back("split", "also fit t < split and t >= split separately");
    add_settings(ts_cmd, ts_settings, ts_keys);

    auto* synth_cmd = app.add_subcommand("synth", "generate a planted rich-club network")->fallthrough();
    add_settings(synth_cmd, synth_settings, kSynthKeys);

    std::string result_path, geometry_path;
    std::optional<double> geo_k, geo_delta;
    auto* geo_cmd = app.add_subcommand("export-geo", "GeoJSON layer of one scan cell")->fallthrough();
    geo_cmd->add_option("--result", result_path, "result.json from scan")->required();
    geo_cmd->add_option("--geometry", geometry_path, "node,lon,lat CSV")->required();
    geo_cmd->add_option("--k", geo_k, "threshold of the cell (default: argmax)");
    geo_cmd->add_option("--delta", geo_delta, "duration of the cell (default: argmax)");

    auto* agg_cmd = app.add_subcommand("aggregate", "dump the time-aggregated graph")->fallthrough();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }
    if (seed_opt->count()) g.seed = seed;
    if (threads_opt->count()) g.threads = threads;

    try {
        if (scan_cmd->parsed()) return cmd_scan(g, scan_cmd, scan_settings, svg, out, err);
        if (ts_cmd->parsed()) return cmd_timeseries(g, ts_cmd, ts_settings, out);
        if (synth_cmd->parsed()) return cmd_synth(g, synth_cmd, synth_settings, out);
        if (geo_cmd->parsed()) return cmd_export_geo(g, result_path, geometry_path, geo_k, geo_delta, out, err);
        if (agg_cmd->parsed()) return cmd_aggregate(g, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const GeometryError& e) {
        err << "geometry error: " << e.what() << '\n';
        return kGeometryError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace richclub::cli
