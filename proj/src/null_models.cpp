#include "richclub/null_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "richclub/error.hpp"

namespace richclub {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_multiplier(const std::string& s, const std::string& step) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(v > 0.0) || !std::isfinite(v))
        throw ConfigError("invalid multiplier '" + s + "' for " + step);
    return v;
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id), engine_(mix(seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t id) const {
    return RngStream(mix(seed_, stream_), id);
}

std::size_t RngStream::index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::size_t default_switch_attempts(std::size_t edge_count, double multiplier) {
    return static_cast<std::size_t>(std::ceil(multiplier * static_cast<double>(edge_count)));
}

Snapshot edge_switch_snapshot(const Snapshot& snap, std::size_t attempts, RngStream& rng) {
    std::vector<Edge> edges(snap.edges().begin(), snap.edges().end());
    if (edges.size() < 2) return snap;

    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const auto& e : edges) present.insert(pair_key(e.u, e.v));

    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        const std::size_t i = rng.index(edges.size());
        std::size_t j = rng.index(edges.size() - 1);
        if (j >= i) ++j;
        const bool cross = rng.index(2) == 1;

        Edge& e1 = edges[i];
        Edge& e2 = edges[j];
        // (a,b),(c,d) -> (a,c),(b,d) or (a,d),(b,c)
        const NodeIndex a = e1.u, b = e1.v;
        const NodeIndex c = cross ? e2.v : e2.u;
        const NodeIndex d = cross ? e2.u : e2.v;
        if (a == c || b == d) continue;
        const std::uint64_t k1 = pair_key(a, c), k2 = pair_key(b, d);
        if (present.count(k1) || present.count(k2)) continue;

        present.erase(pair_key(a, b));
        present.erase(pair_key(e2.u, e2.v));
        present.insert(k1);
        present.insert(k2);
        e1.u = std::min(a, c);
        e1.v = std::max(a, c);
        e2.u = std::min(b, d);
        e2.v = std::max(b, d);
    }
    return Snapshot(std::move(edges));
}

Snapshot weight_decorrelate_snapshot(const Snapshot& snap, RngStream& rng) {
    std::vector<Edge> edges(snap.edges().begin(), snap.edges().end());
    std::vector<double> weights;
    weights.reserve(edges.size());
    for (const auto& e : edges) weights.push_back(e.weight);
    std::shuffle(weights.begin(), weights.end(), rng.engine());
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = weights[i];
    return Snapshot(std::move(edges));
}

TemporalNetwork weight_decorrelate_global(const TemporalNetwork& net, RngStream& rng) {
    std::vector<double> pool;
    pool.reserve(net.temporal_edge_count());
    for (const auto& s : net.snapshots())
        for (const auto& e : s.edges()) pool.push_back(e.weight);
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    std::vector<Snapshot> snaps;
    snaps.reserve(net.snapshot_count());
    std::size_t next = 0;
    for (const auto& s : net.snapshots()) {
        std::vector<Edge> edges(s.edges().begin(), s.edges().end());
        for (auto& e : edges) e.weight = pool[next++];
        snaps.emplace_back(std::move(edges));
    }
    return net.with_snapshots(std::move(snaps));
}

TemporalNetwork sequence_shuffle(const TemporalNetwork& net, RngStream& rng) {
    std::vector<Snapshot> snaps(net.snapshots().begin(), net.snapshots().end());
    std::shuffle(snaps.begin(), snaps.end(), rng.engine());
    return net.with_snapshots(std::move(snaps));
}

TemporalNetwork timestamp_shuffle(const TemporalNetwork& net, std::size_t swaps, RngStream& rng,
                                  bool drop_weights) {
    if (!drop_weights && !is_unit_weight(net))
        throw ConfigError("timestamp shuffling is topological-temporal only; pass drop-weights for weighted input");

    struct Event {
        std::uint64_t pair;
        std::uint32_t t;
    };
    struct Hash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint32_t>& p) const {
            return static_cast<std::size_t>(mix(p.first, p.second));
        }
    };

    std::vector<Event> events;
    events.reserve(net.temporal_edge_count());
    std::unordered_set<std::pair<std::uint64_t, std::uint32_t>, Hash> present;
    present.reserve(net.temporal_edge_count() * 2);
    for (std::size_t t = 0; t < net.snapshot_count(); ++t)
        for (const auto& e : net.snapshots()[t].edges()) {
            events.push_back({pair_key(e.u, e.v), static_cast<std::uint32_t>(t)});
            present.insert({events.back().pair, events.back().t});
        }

    if (events.size() >= 2) {
        for (std::size_t s = 0; s < swaps; ++s) {
            const std::size_t i = rng.index(events.size());
            std::size_t j = rng.index(events.size() - 1);
            if (j >= i) ++j;
            Event& a = events[i];
            Event& b = events[j];
            if (a.t == b.t || a.pair == b.pair) continue;
            if (present.count({a.pair, b.t}) || present.count({b.pair, a.t})) continue;
            present.erase({a.pair, a.t});
            present.erase({b.pair, b.t});
            std::swap(a.t, b.t);
            present.insert({a.pair, a.t});
            present.insert({b.pair, b.t});
        }
    }

    std::vector<std::vector<Edge>> per_t(net.snapshot_count());
    for (const auto& ev : events)
        per_t[ev.t].push_back({static_cast<NodeIndex>(ev.pair >> 32),
                               static_cast<NodeIndex>(ev.pair & 0xffffffffu), 1.0});
    std::vector<Snapshot> snaps;
    snaps.reserve(per_t.size());
    for (auto& edges : per_t) snaps.emplace_back(std::move(edges));
    return net.with_snapshots(std::move(snaps));
}

void NullRecipe::validate() const {
    if (steps.empty()) throw ConfigError("null recipe has no steps");
    std::vector<std::size_t> seen;
    for (const auto& step : steps) {
        if (std::find(seen.begin(), seen.end(), step.index()) != seen.end())
            throw ConfigError("null recipe repeats a step kind");
        seen.push_back(step.index());
        if (auto* es = std::get_if<EdgeSwitchStep>(&step); es && !(es->attempts_multiplier > 0.0))
            throw ConfigError("edge-switch multiplier must be positive");
        if (auto* ts = std::get_if<TimestampShuffleStep>(&step); ts && !(ts->swaps_multiplier > 0.0))
            throw ConfigError("timestamp-shuffle multiplier must be positive");
    }
}

bool NullRecipe::has_edge_switch() const {
    return std::any_of(steps.begin(), steps.end(),
                       [](const NullStep& s) { return std::holds_alternative<EdgeSwitchStep>(s); });
}

NullRecipe NullRecipe::wtrc() { return {{WeightDecorrelateStep{}, SequenceShuffleStep{}}}; }
NullRecipe NullRecipe::ttrc() { return {{EdgeSwitchStep{}, SequenceShuffleStep{}}}; }
NullRecipe NullRecipe::mixed() {
    return {{EdgeSwitchStep{}, WeightDecorrelateStep{}, SequenceShuffleStep{}}};
}

NullRecipe parse_recipe(const std::string& text) {
    // Split on commas that are not inside parentheses.
    std::vector<std::string> items;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw ConfigError("unbalanced parentheses in recipe '" + text + "'");
    if (!trim(cur).empty() || !items.empty()) items.push_back(trim(cur));

    NullRecipe recipe;
    for (const auto& item : items) {
        if (item.empty()) throw ConfigError("empty step in recipe '" + text + "'");
        std::string name = item;
        std::vector<std::string> args;
        if (auto open = item.find('('); open != std::string::npos) {
            if (item.back() != ')') throw ConfigError("malformed step '" + item + "'");
            name = trim(item.substr(0, open));
            std::stringstream ss(item.substr(open + 1, item.size() - open - 2));
            for (std::string a; std::getline(ss, a, ',');)
                if (!trim(a).empty()) args.push_back(trim(a));
        }
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return c == '_' ? '-' : std::tolower(c); });

        if (name == "edge-switch") {
            EdgeSwitchStep s;
            if (args.size() > 1) throw ConfigError("edge-switch takes at most one argument");
            if (!args.empty()) s.attempts_multiplier = parse_multiplier(args[0], name);
            recipe.steps.emplace_back(s);
        } else if (name == "weight-decorrelate") {
            WeightDecorrelateStep s;
            for (const auto& a : args) {
                if (a == "global") s.global = true;
                else if (a == "per-snapshot") s.global = false;
                else throw ConfigError("unknown weight-decorrelate option '" + a + "'");
            }
            recipe.steps.emplace_back(s);
        } else if (name == "sequence-shuffle") {
            if (!args.empty()) throw ConfigError("sequence-shuffle takes no arguments");
            recipe.steps.emplace_back(SequenceShuffleStep{});
        } else if (name == "timestamp-shuffle") {
            TimestampShuffleStep s;
            for (const auto& a : args) {
                if (a == "drop-weights") s.drop_weights = true;
                else s.swaps_multiplier = parse_multiplier(a, name);
            }
            recipe.steps.emplace_back(s);
        } else {
            throw ConfigError("unknown null-model step '" + name + "'");
        }
    }
    recipe.validate();
    return recipe;
}

std::string to_string(const NullRecipe& recipe) {
    std::string out;
    for (const auto& step : recipe.steps) {
        if (!out.empty()) out += ", ";
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, EdgeSwitchStep>) {
                    out += "edge-switch(" + format_number(s.attempts_multiplier) + ")";
                } else if constexpr (std::is_same_v<S, WeightDecorrelateStep>) {
                    out += s.global ? "weight-decorrelate(global)" : "weight-decorrelate";
                } else if constexpr (std::is_same_v<S, SequenceShuffleStep>) {
                    out += "sequence-shuffle";
                } else {
                    out += "timestamp-shuffle(" + format_number(s.swaps_multiplier) +
                           (s.drop_weights ? ", drop-weights)" : ")");
                }
            },
            step);
    }
    return out;
}

TemporalNetwork make_null(const TemporalNetwork& net, const NullRecipe& recipe, const RngStream& rng) {
    recipe.validate();
    TemporalNetwork cur = net;
    for (std::size_t i = 0; i < recipe.steps.size(); ++i) {
        RngStream step_rng = rng.substream(i);
        const auto& step = recipe.steps[i];
        if (auto* es = std::get_if<EdgeSwitchStep>(&step)) {
            std::vector<Snapshot> snaps;
            snaps.reserve(cur.snapshot_count());
            for (std::size_t t = 0; t < cur.snapshot_count(); ++t) {
                RngStream r = step_rng.substream(t);
                const auto& s = cur.snapshots()[t];
                snaps.push_back(edge_switch_snapshot(s, default_switch_attempts(s.edge_count(), es->attempts_multiplier), r));
            }
            cur = cur.with_snapshots(std::move(snaps));
        } else if (auto* wd = std::get_if<WeightDecorrelateStep>(&step)) {
            if (wd->global) {
                cur = weight_decorrelate_global(cur, step_rng);
            } else {
                std::vector<Snapshot> snaps;
                snaps.reserve(cur.snapshot_count());
                for (std::size_t t = 0; t < cur.snapshot_count(); ++t) {
                    RngStream r = step_rng.substream(t);
                    snaps.push_back(weight_decorrelate_snapshot(cur.snapshots()[t], r));
                }
                cur = cur.with_snapshots(std::move(snaps));
            }
        } else if (std::holds_alternative<SequenceShuffleStep>(step)) {
            cur = sequence_shuffle(cur, step_rng);
        } else {
            const auto& ts = std::get<TimestampShuffleStep>(step);
            cur = timestamp_shuffle(cur, default_switch_attempts(cur.temporal_edge_count(), ts.swaps_multiplier),
                                    step_rng, ts.drop_weights);
        }
    }
    return cur;
}

}  // namespace richclub
