#include "richclub/temporal_graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "richclub/error.hpp"

namespace richclub {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool parse_two(const std::string& s, std::size_t pos, int& out) {
    if (pos + 2 > s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])) ||
        !std::isdigit(static_cast<unsigned char>(s[pos + 1])))
        return false;
    out = (s[pos] - '0') * 10 + (s[pos + 1] - '0');
    return true;
}

// YYYY-MM-DD, optionally followed by 'T' or ' ' and a time part.
bool is_iso_date(const std::string& s) {
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return false;
    for (int i = 0; i < 4; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    int month = 0, day = 0;
    if (!parse_two(s, 5, month) || !parse_two(s, 8, day)) return false;
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

enum class StampKind { integer, iso };

struct ParsedStamp {
    StampKind kind;
    std::uint64_t number = 0;
    std::string label;
};

ParsedStamp parse_timestamp(const std::string& raw, std::size_t line) {
    if (all_digits(raw)) {
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc{} || ptr != raw.data() + raw.size())
            throw InputError("timestamp out of range: '" + raw + "'", line);
        return {StampKind::integer, value, std::to_string(value)};
    }
    if (is_iso_date(raw)) return {StampKind::iso, 0, raw};
    throw InputError("unparseable timestamp '" + raw +
                         "' (expected ISO-8601 date or non-negative integer)",
                     line);
}

}  // namespace

Snapshot::Snapshot(std::vector<Edge> edges) : edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.u == e.v) throw InputError("self-loop on node index " + std::to_string(e.u));
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
            throw InputError("edge weight must be finite and non-negative");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), edge_less);
    auto dup = std::adjacent_find(edges_.begin(), edges_.end(),
                                  [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; });
    if (dup != edges_.end())
        throw InputError("duplicate edge {" + std::to_string(dup->u) + "," + std::to_string(dup->v) + "}");
}

const Edge* Snapshot::find(NodeIndex a, NodeIndex b) const {
    if (a > b) std::swap(a, b);
    Edge probe{a, b, 0.0};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), probe, edge_less);
    if (it == edges_.end() || it->u != a || it->v != b) return nullptr;
    return &*it;
}

std::optional<double> Snapshot::weight(NodeIndex a, NodeIndex b) const {
    if (const Edge* e = find(a, b)) return e->weight;
    return std::nullopt;
}

double Snapshot::total_weight() const {
    double sum = 0.0;
    for (const auto& e : edges_) sum += e.weight;
    return sum;
}

std::vector<std::uint32_t> Snapshot::degrees(std::size_t node_count) const {
    std::vector<std::uint32_t> deg(node_count, 0);
    for (const auto& e : edges_) {
        ++deg.at(e.u);
        ++deg.at(e.v);
    }
    return deg;
}

TemporalNetwork::TemporalNetwork(std::vector<std::string> node_labels,
                                 std::vector<std::string> timestamps,
                                 std::vector<Snapshot> snapshots)
    : labels_(std::move(node_labels)),
      timestamps_(std::move(timestamps)),
      snapshots_(std::move(snapshots)) {
    if (snapshots_.empty()) throw InputError("temporal network needs at least one snapshot");
    if (timestamps_.size() != snapshots_.size())
        throw InputError("timestamp count does not match snapshot count");
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (!index_.emplace(labels_[i], static_cast<NodeIndex>(i)).second)
            throw InputError("duplicate node label '" + labels_[i] + "'");
    for (const auto& snap : snapshots_)
        for (const auto& e : snap.edges())
            if (e.v >= labels_.size()) throw InputError("edge endpoint outside node table");
}

std::optional<NodeIndex> TemporalNetwork::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t TemporalNetwork::temporal_edge_count() const {
    std::size_t n = 0;
    for (const auto& s : snapshots_) n += s.edge_count();
    return n;
}

TemporalNetwork TemporalNetwork::with_snapshots(std::vector<Snapshot> snapshots) const {
    return TemporalNetwork(labels_, timestamps_, std::move(snapshots));
}

TemporalNetwork build_temporal_network(std::span<const FlowRecord> records, const BuildOptions& options) {
    struct Kept {
        std::size_t stamp;
        const std::string* a;
        const std::string* b;
        double weight;
    };

    std::vector<ParsedStamp> stamps;
    std::map<std::string, std::size_t> stamp_slot;  // label -> index into stamps
    std::vector<Kept> kept;
    kept.reserve(records.size());
    std::optional<StampKind> kind;

    for (const auto& rec : records) {
        if (!(rec.weight >= 0.0) || !std::isfinite(rec.weight))
            throw InputError("weight must be finite and non-negative, got " + std::to_string(rec.weight), rec.line);
        ParsedStamp ps = parse_timestamp(rec.timestamp, rec.line);
        if (kind && *kind != ps.kind)
            throw InputError("mixed integer and ISO-8601 timestamps", rec.line);
        kind = ps.kind;
        if (rec.origin.empty() || rec.destination.empty())
            throw InputError("empty node id", rec.line);
        if (rec.origin == rec.destination) {
            if (options.self_loops == SelfLoopPolicy::reject)
                throw InputError("self-loop record for node '" + rec.origin + "'", rec.line);
            continue;
        }
        auto [it, inserted] = stamp_slot.emplace(ps.label, stamps.size());
        if (inserted) stamps.push_back(std::move(ps));
        kept.push_back({it->second, &rec.origin, &rec.destination, rec.weight});
    }
    if (kept.empty()) throw EmptyNetworkError();

    std::vector<std::size_t> order(stamps.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (stamps[x].kind == StampKind::integer) return stamps[x].number < stamps[y].number;
        return stamps[x].label < stamps[y].label;
    });
    std::vector<std::size_t> position(stamps.size());
    std::vector<std::string> timestamps;
    timestamps.reserve(stamps.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        position[order[p]] = p;
        timestamps.push_back(stamps[order[p]].label);
    }

    std::vector<std::string> labels;
    for (const auto& k : kept) {
        labels.push_back(*k.a);
        labels.push_back(*k.b);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    auto index_of = [&](const std::string& s) {
        return static_cast<NodeIndex>(std::lower_bound(labels.begin(), labels.end(), s) - labels.begin());
    };

    std::vector<std::map<std::uint64_t, double>> merged(timestamps.size());
    for (const auto& k : kept) {
        auto& slot = merged[position[k.stamp]];
        auto [it, inserted] = slot.emplace(pair_key(index_of(*k.a), index_of(*k.b)), k.weight);
        if (!inserted) {
            if (options.symmetrization == Symmetrization::sum)
                it->second += k.weight;
            else
                it->second = std::max(it->second, k.weight);
        }
    }

    std::vector<Snapshot> snapshots;
    snapshots.reserve(merged.size());
    for (const auto& slot : merged) {
        std::vector<Edge> edges;
        edges.reserve(slot.size());
        for (const auto& [key, w] : slot)
            edges.push_back({static_cast<NodeIndex>(key >> 32), static_cast<NodeIndex>(key & 0xffffffffu), w});
        snapshots.emplace_back(std::move(edges));
    }
    return TemporalNetwork(std::move(labels), std::move(timestamps), std::move(snapshots));
}

AggregateGraph aggregate(const TemporalNetwork& net) {
    const std::size_t n = net.node_count();
    std::map<std::uint64_t, std::pair<double, std::uint32_t>> acc;
    AggregateGraph out;
    out.strength.assign(n, 0);
    for (const auto& snap : net.snapshots()) {
        for (const auto& e : snap.edges()) {
            auto& slot = acc[pair_key(e.u, e.v)];
            slot.first += e.weight;
            ++slot.second;
            ++out.strength[e.u];
            ++out.strength[e.v];
        }
    }
    std::vector<Edge> edges;
    edges.reserve(acc.size());
    out.presence.reserve(acc.size());
    out.degree.assign(n, 0);
    for (const auto& [key, slot] : acc) {
        Edge e{static_cast<NodeIndex>(key >> 32), static_cast<NodeIndex>(key & 0xffffffffu), slot.first};
        edges.push_back(e);
        out.presence.push_back(slot.second);
        ++out.degree[e.u];
        ++out.degree[e.v];
    }
    // std::map iteration order equals (u, v) order, so presence stays parallel to the sorted edges.
    out.graph = Snapshot(std::move(edges));
    return out;
}

RichnessVector richness_vector(const TemporalNetwork& net, RichnessProperty property) {
    RichnessVector r{property, std::vector<double>(net.node_count(), 0.0)};
    if (property == RichnessProperty::temporal_edge_count) {
        for (const auto& snap : net.snapshots())
            for (const auto& e : snap.edges()) {
                r.values[e.u] += 1.0;
                r.values[e.v] += 1.0;
            }
    } else {
        const auto agg = aggregate(net);
        for (std::size_t i = 0; i < agg.degree.size(); ++i) r.values[i] = agg.degree[i];
    }
    return r;
}

RichSet::RichSet(std::size_t node_count, std::vector<NodeIndex> members)
    : members_(std::move(members)), mask_(node_count, 0) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (NodeIndex i : members_) mask_.at(i) = 1;
}

RichSet rich_set(const RichnessVector& richness, double threshold, ThresholdMode mode) {
    std::vector<NodeIndex> members;
    for (std::size_t i = 0; i < richness.values.size(); ++i) {
        const double r = richness.values[i];
        if (mode == ThresholdMode::inclusive ? r >= threshold : r > threshold)
            members.push_back(static_cast<NodeIndex>(i));
    }
    return RichSet(richness.values.size(), std::move(members));
}

TemporalNetwork unweight(const TemporalNetwork& net) {
    std::vector<Snapshot> snaps;
    snaps.reserve(net.snapshot_count());
    for (const auto& s : net.snapshots()) {
        std::vector<Edge> edges(s.edges().begin(), s.edges().end());
        for (auto& e : edges) e.weight = 1.0;
        snaps.emplace_back(std::move(edges));
    }
    return net.with_snapshots(std::move(snaps));
}

bool is_unit_weight(const TemporalNetwork& net) {
    for (const auto& s : net.snapshots())
        for (const auto& e : s.edges())
            if (e.weight != 1.0) return false;
    return true;
}

std::string to_string(RichnessProperty p) {
    return p == RichnessProperty::aggregate_degree ? "aggregate-degree" : "temporal-edge-count";
}

RichnessProperty parse_richness_property(const std::string& s) {
    if (s == "aggregate-degree") return RichnessProperty::aggregate_degree;
    if (s == "temporal-edge-count") return RichnessProperty::temporal_edge_count;
    throw ConfigError("unknown richness property '" + s + "'");
}

std::string to_string(ThresholdMode m) { return m == ThresholdMode::inclusive ? "inclusive" : "strict"; }

ThresholdMode parse_threshold_mode(const std::string& s) {
    if (s == "inclusive") return ThresholdMode::inclusive;
    if (s == "strict") return ThresholdMode::strict;
    throw ConfigError("unknown threshold mode '" + s + "'");
}

}  // namespace richclub
