#include "richclub/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "richclub/error.hpp"
#include "richclub/metrics.hpp"

namespace richclub {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw InputError("unterminated quoted field", line_no);
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

double parse_double(const std::string& raw, std::size_t line, const char* what) {
    const std::string s = trim(raw);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InputError(std::string("invalid ") + what + " '" + raw + "'", line);
    return v;
}

// Header name -> column index; every required name must be present.
template <std::size_t N>
std::array<std::size_t, N> header_columns(const std::string& header, const std::array<const char*, N>& names) {
    auto cols = split_csv_line(header, 1);
    for (auto& c : cols) c = trim(c);
    if (!cols.empty() && cols[0].rfind("\xEF\xBB\xBF", 0) == 0) cols[0].erase(0, 3);
    std::array<std::size_t, N> idx{};
    for (std::size_t i = 0; i < N; ++i) {
        auto it = std::find(cols.begin(), cols.end(), names[i]);
        if (it == cols.end()) throw InputError(std::string("missing column '") + names[i] + "' in header", 1);
        idx[i] = static_cast<std::size_t>(it - cols.begin());
    }
    return idx;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_double(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

std::string format_number_12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_roundtrip(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<FlowRecord> read_flow_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty flow file", 1);
    const auto col = header_columns<4>(line, {"timestamp", "origin", "destination", "weight"});
    const std::size_t width = *std::max_element(col.begin(), col.end()) + 1;

    std::vector<FlowRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line, line_no);
        if (f.size() < width)
            throw InputError("expected at least " + std::to_string(width) + " fields, got " + std::to_string(f.size()),
                             line_no);
        FlowRecord r;
        r.timestamp = trim(f[col[0]]);
        r.origin = trim(f[col[1]]);
        r.destination = trim(f[col[2]]);
        r.weight = parse_double(f[col[3]], line_no, "weight");
        r.line = line_no;
        if (r.weight < 0.0) throw InputError("negative weight " + trim(f[col[3]]), line_no);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<FlowRecord> read_flow_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open flow file '" + path + "'");
    return read_flow_csv(in);
}

void write_flow_csv(std::ostream& out, const TemporalNetwork& net) {
    out << "timestamp,origin,destination,weight\n";
    for (std::size_t t = 0; t < net.snapshot_count(); ++t) {
        const std::string& stamp = net.timestamps()[t];
        for (const auto& e : net.snapshots()[t].edges())
            out << csv_field(stamp) << ',' << csv_field(net.label(e.u)) << ',' << csv_field(net.label(e.v)) << ','
                << format_roundtrip(e.weight) << '\n';
    }
}

std::vector<NodeGeometry> read_geometry_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty geometry file", 1);
    const auto col = header_columns<3>(line, {"node", "lon", "lat"});
    const std::size_t width = *std::max_element(col.begin(), col.end()) + 1;
    std::vector<NodeGeometry> rows;
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line, line_no);
        if (f.size() < width) throw InputError("too few fields", line_no);
        NodeGeometry g{trim(f[col[0]]), parse_double(f[col[1]], line_no, "longitude"),
                       parse_double(f[col[2]], line_no, "latitude")};
        if (g.lon < -180.0 || g.lon > 180.0 || g.lat < -90.0 || g.lat > 90.0)
            throw InputError("coordinates out of range for node '" + g.node + "'", line_no);
        if (!seen.emplace(g.node, line_no).second) throw InputError("duplicate node '" + g.node + "'", line_no);
        rows.push_back(std::move(g));
    }
    return rows;
}

json config_to_json(const ScanConfig& c) {
    return {
        {"metric", to_string(c.metric)},
        {"richness", to_string(c.richness)},
        {"k_count", c.k_count},
        {"delta_count", c.delta_count},
        {"k_values", c.k_values},
        {"delta_values", c.delta_values},
        {"delta_min", c.delta_min},
        {"delta_endpoint", c.delta_endpoint ? json(*c.delta_endpoint) : json(nullptr)},
        {"recipe", c.recipe ? json(to_string(*c.recipe)) : json(nullptr)},
        {"nulls", c.null_count ? json(*c.null_count) : json(nullptr)},
        {"seed", c.seed},
        {"threshold_mode", to_string(c.mode)},
    };
}

ScanConfig config_from_json(const json& j) {
    ScanConfig c;
    c.metric = parse_metric(j.at("metric").get<std::string>());
    c.richness = parse_richness_property(j.at("richness").get<std::string>());
    c.k_count = j.at("k_count").get<std::size_t>();
    c.delta_count = j.at("delta_count").get<std::size_t>();
    c.k_values = j.at("k_values").get<std::vector<double>>();
    c.delta_values = j.at("delta_values").get<std::vector<std::size_t>>();
    c.delta_min = j.at("delta_min").get<std::size_t>();
    if (!j.at("delta_endpoint").is_null()) c.delta_endpoint = j.at("delta_endpoint").get<std::size_t>();
    if (!j.at("recipe").is_null()) c.recipe = parse_recipe(j.at("recipe").get<std::string>());
    if (!j.at("nulls").is_null()) c.null_count = j.at("nulls").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.mode = parse_threshold_mode(j.at("threshold_mode").get<std::string>());
    return c;
}

json to_json(const ScanResult& r) {
    json cells = json::array();
    json mask = json::array();
    for (const auto& row : r.cells) {
        json jrow = json::array();
        json mrow = json::array();
        for (const auto& cell : row) {
            const auto& c = cell.coefficient;
            jrow.push_back({
                {"observed", opt(c.observed)},
                {"null_mean", c.null_mean},
                {"null_values", c.null_values},
                {"coefficient", opt(c.coefficient)},
                {"p_two_tailed", opt(c.p_two_tailed)},
                {"defined", c.defined},
                {"t_start", cell.t_start ? json(*cell.t_start) : json(nullptr)},
            });
            mrow.push_back(c.defined);
        }
        cells.push_back(std::move(jrow));
        mask.push_back(std::move(mrow));
    }

    json membership = json::array();
    for (const auto& members : r.membership) {
        json labels = json::array();
        for (NodeIndex i : members) labels.push_back(r.node_labels.at(i));
        membership.push_back(std::move(labels));
    }

    json argmax = nullptr;
    if (auto best = r.argmax()) {
        const auto& cell = r.cells[best->k][best->delta];
        argmax = {
            {"k_index", best->k},
            {"delta_index", best->delta},
            {"k", r.thresholds[best->k]},
            {"delta", r.deltas[best->delta]},
            {"coefficient", *cell.coefficient.coefficient},
            {"p_two_tailed", opt(cell.coefficient.p_two_tailed)},
            {"t_start", cell.t_start ? json(*cell.t_start) : json(nullptr)},
        };
    }

    return {
        {"schema", "richclub/scan-result"},
        {"schema_version", kResultSchemaVersion},
        {"config", config_to_json(r.config)},
        {"network", {{"nodes", r.node_labels}, {"snapshot_count", r.snapshot_count}}},
        {"richness", {{"property", to_string(r.richness.property)}, {"values", r.richness.values}}},
        {"thresholds", r.thresholds},
        {"deltas", r.deltas},
        {"membership", std::move(membership)},
        {"cells", std::move(cells)},
        {"defined_mask", std::move(mask)},
        {"argmax", std::move(argmax)},
        {"warnings", r.warnings},
    };
}

ScanResult scan_result_from_json(const json& j) {
    if (j.value("schema", "") != "richclub/scan-result") throw InputError("not a scan result document");
    if (j.at("schema_version").get<int>() != kResultSchemaVersion)
        throw InputError("unsupported scan result schema version");
    ScanResult r;
    r.config = config_from_json(j.at("config"));
    r.node_labels = j.at("network").at("nodes").get<std::vector<std::string>>();
    r.snapshot_count = j.at("network").at("snapshot_count").get<std::size_t>();
    r.richness.property = parse_richness_property(j.at("richness").at("property").get<std::string>());
    r.richness.values = j.at("richness").at("values").get<std::vector<double>>();
    r.thresholds = j.at("thresholds").get<std::vector<double>>();
    r.deltas = j.at("deltas").get<std::vector<std::size_t>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();

    std::map<std::string, NodeIndex> index;
    for (std::size_t i = 0; i < r.node_labels.size(); ++i) index[r.node_labels[i]] = static_cast<NodeIndex>(i);
    for (const auto& labels : j.at("membership")) {
        std::vector<NodeIndex> members;
        for (const auto& l : labels) {
            auto it = index.find(l.get<std::string>());
            if (it == index.end()) throw InputError("membership names unknown node '" + l.get<std::string>() + "'");
            members.push_back(it->second);
        }
        r.membership.push_back(std::move(members));
    }
    for (const auto& jrow : j.at("cells")) {
        std::vector<ScanCell> row;
        for (const auto& jc : jrow) {
            ScanCell cell;
            cell.coefficient.observed = opt_double(jc.at("observed"));
            cell.coefficient.null_mean = jc.at("null_mean").get<double>();
            cell.coefficient.null_values = jc.at("null_values").get<std::vector<double>>();
            cell.coefficient.coefficient = opt_double(jc.at("coefficient"));
            cell.coefficient.p_two_tailed = opt_double(jc.at("p_two_tailed"));
            cell.coefficient.defined = jc.at("defined").get<bool>();
            if (!jc.at("t_start").is_null()) cell.t_start = jc.at("t_start").get<std::size_t>();
            row.push_back(std::move(cell));
        }
        r.cells.push_back(std::move(row));
    }
    if (r.cells.size() != r.thresholds.size() || r.membership.size() != r.thresholds.size())
        throw InputError("scan result grid does not match its thresholds");
    for (const auto& row : r.cells)
        if (row.size() != r.deltas.size()) throw InputError("scan result grid does not match its durations");
    return r;
}

std::string format_cell(const ScanResult& r, std::size_t k, std::size_t d, MatrixField field) {
    const ScanCell& cell = r.cells.at(k).at(d);
    const auto& c = cell.coefficient;
    std::optional<double> v;
    switch (field) {
        case MatrixField::coefficient: v = c.coefficient; break;
        case MatrixField::observed: v = c.observed; break;
        case MatrixField::null_mean:
            if (!c.null_values.empty()) v = c.null_mean;
            break;
        case MatrixField::p_value: v = c.p_two_tailed; break;
        case MatrixField::t_start:
            if (cell.t_start) return std::to_string(*cell.t_start);
            break;
    }
    return v ? format_number_12(*v) : "NA";
}

void write_matrix_csv(std::ostream& out, const ScanResult& r, MatrixField field) {
    out << "k\\delta";
    for (std::size_t d : r.deltas) out << ',' << d;
    out << '\n';
    for (std::size_t k = 0; k < r.thresholds.size(); ++k) {
        out << format_number_12(r.thresholds[k]);
        for (std::size_t d = 0; d < r.deltas.size(); ++d) out << ',' << format_cell(r, k, d, field);
        out << '\n';
    }
}

void write_membership_csv(std::ostream& out, const ScanResult& r) {
    out << "k,node_id,richness\n";
    for (std::size_t k = 0; k < r.thresholds.size(); ++k)
        for (NodeIndex i : r.membership[k])
            out << format_number_12(r.thresholds[k]) << ',' << csv_field(r.node_labels[i]) << ','
                << format_number_12(r.richness.values[i]) << '\n';
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Diverging blue-white-red on log2(coefficient), saturating at 4x either way.
std::string cell_colour(const NormalizedCoefficient& c) {
    if (!c.defined) return "#d9d9d9";
    const double x = std::clamp(std::log2(std::max(*c.coefficient, 1e-12)) / 2.0, -1.0, 1.0);
    int r = 255, g = 255, b = 255;
    if (x > 0) {
        g = b = static_cast<int>(std::lround(255.0 * (1.0 - x)));
        r = 255 - static_cast<int>(std::lround(75.0 * x));
    } else {
        r = g = static_cast<int>(std::lround(255.0 * (1.0 + x)));
        b = 255 + static_cast<int>(std::lround(75.0 * x));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string render_heatmap_svg(const ScanResult& r) {
    constexpr int cw = 64, ch = 28, left = 90, top = 50;
    const int width = left + cw * static_cast<int>(r.deltas.size()) + 20;
    const int height = top + ch * static_cast<int>(r.thresholds.size()) + 40;
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">" << xml_escape(to_string(r.config.metric))
        << " coefficient (rows: richness threshold, columns: duration)</text>\n";
    for (std::size_t d = 0; d < r.deltas.size(); ++d)
        svg << "<text class=\"delta\" x=\"" << left + cw * static_cast<int>(d) + cw / 2 << "\" y=\"" << top - 8
            << "\" text-anchor=\"middle\">" << r.deltas[d] << "</text>\n";
    // Highest threshold on top.
    for (std::size_t row = 0; row < r.thresholds.size(); ++row) {
        const std::size_t k = r.thresholds.size() - 1 - row;
        const int y = top + ch * static_cast<int>(row);
        svg << "<text class=\"k\" x=\"" << left - 6 << "\" y=\"" << y + ch / 2 + 4 << "\" text-anchor=\"end\">"
            << format_number_12(r.thresholds[k]) << "</text>\n";
        for (std::size_t d = 0; d < r.deltas.size(); ++d) {
            const auto& c = r.cells[k][d].coefficient;
            const int x = left + cw * static_cast<int>(d);
            const std::string value = format_cell(r, k, d, MatrixField::coefficient);
            char label[32] = "NA";
            if (c.defined) std::snprintf(label, sizeof label, "%.3g", *c.coefficient);
            svg << "<g class=\"cell\"><rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch
                << "\" fill=\"" << cell_colour(c) << "\" stroke=\"#ffffff\"/>"
                << "<title>" << value << "</title>"
                << "<text x=\"" << x + cw / 2 << "\" y=\"" << y + ch / 2 + 4 << "\" text-anchor=\"middle\">" << label
                << "</text></g>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

json make_geojson(const ScanResult& r, CellIndex cell, const TemporalNetwork& net,
                  const std::vector<NodeGeometry>& geometry, std::vector<std::string>* warnings) {
    if (cell.k >= r.thresholds.size() || cell.delta >= r.deltas.size()) throw ConfigError("cell index outside grid");
    if (net.node_count() != r.node_labels.size() ||
        !std::equal(r.node_labels.begin(), r.node_labels.end(), net.node_labels().begin()))
        throw ConfigError("network does not match the scan result's node table");

    json features = json::array();
    const auto& members = r.membership[cell.k];
    if (members.empty()) {
        if (warnings) warnings->push_back("rich set is empty at the selected cell");
        return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    }

    std::map<std::string, const NodeGeometry*> where;
    for (const auto& g : geometry) where[g.node] = &g;
    std::string missing;
    for (NodeIndex i : members)
        if (!where.count(r.node_labels[i])) missing += (missing.empty() ? "" : ", ") + r.node_labels[i];
    if (!missing.empty()) throw GeometryError("missing geometry for rich nodes: " + missing);

    auto coords = [&](NodeIndex i) {
        const NodeGeometry* g = where.at(r.node_labels[i]);
        return json::array({g->lon, g->lat});
    };
    for (NodeIndex i : members)
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", coords(i)}}},
                            {"properties", {{"node", r.node_labels[i]}, {"richness", r.richness.values[i]}}}});

    const ScanCell& sc = r.cells[cell.k][cell.delta];
    std::size_t start = 1, length = net.snapshot_count();
    if (sc.t_start) {
        start = *sc.t_start;
        length = r.deltas[cell.delta];
    }
    const RichSet rich(net.node_count(), members);
    std::map<std::uint64_t, double> window_weight;
    for (std::size_t t = start; t < start + length; ++t)
        for (const auto& e : net.at(t).edges())
            if (rich.contains(e.u) && rich.contains(e.v)) window_weight[pair_key(e.u, e.v)] += e.weight;
    for (const auto& [key, total] : window_weight) {
        const double mean = total / static_cast<double>(length);
        if (!(mean > 0.0)) continue;
        const auto u = static_cast<NodeIndex>(key >> 32), v = static_cast<NodeIndex>(key & 0xffffffffu);
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", json::array({coords(u), coords(v)})}}},
                            {"properties",
                             {{"source", r.node_labels[u]},
                              {"target", r.node_labels[v]},
                              {"mean_weight", mean},
                              {"window_start", start},
                              {"window_length", length}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

void write_aggregate_edges_csv(std::ostream& out, const TemporalNetwork& net, const AggregateGraph& agg) {
    out << "source,target,weight,snapshots\n";
    const auto edges = agg.graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        out << csv_field(net.label(edges[i].u)) << ',' << csv_field(net.label(edges[i].v)) << ','
            << format_roundtrip(edges[i].weight) << ',' << agg.presence[i] << '\n';
}

void write_aggregate_nodes_csv(std::ostream& out, const TemporalNetwork& net, const AggregateGraph& agg) {
    out << "node,degree,temporal_edge_count\n";
    for (std::size_t i = 0; i < net.node_count(); ++i)
        out << csv_field(net.label(static_cast<NodeIndex>(i))) << ',' << agg.degree[i] << ',' << agg.strength[i]
            << '\n';
}

json to_json(const GroundTruth& truth, const PlantedSpec& spec) {
    json law = std::visit(
        [](const auto& l) -> json {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, LogNormalLaw>) return {{"law", "lognormal"}, {"mu", l.mu}, {"sigma", l.sigma}};
            else return {{"law", "uniform"}, {"low", l.low}, {"high", l.high}};
        },
        spec.weight_law);
    json j_spec = {
        {"nodes", spec.nodes},
        {"snapshots", spec.snapshots},
        {"club_size", spec.club_size},
        {"club_weight_scale", spec.club_weight_scale},
        {"window", {spec.window_start, spec.window_end}},
        {"background_density", spec.background_density},
        {"weight_law", std::move(law)},
        {"step", spec.step ? json{{"after", spec.step->after}, {"factor", spec.step->factor}} : json(nullptr)},
        {"seed", spec.seed},
    };
    return {
        {"members", truth.members},
        {"window", {truth.window_start, truth.window_end}},
        {"expected_delta", truth.expected_delta},
        {"expect_significant", truth.expect_significant},
        {"spec", std::move(j_spec)},
    };
}

}  // namespace richclub
