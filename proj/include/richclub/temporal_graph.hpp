#pragma once

// Weighted, undirected, discrete-time networks.
//
// A TemporalNetwork is an ordered sequence of snapshots over one node table.
// Snapshot positions are exposed 1-based (t = 1..T) wherever a function takes a
// time argument; the snapshot container itself is an ordinary 0-based vector.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace richclub {

using NodeIndex = std::uint32_t;

struct Edge {
    NodeIndex u = 0;  // u < v after canonicalization
    NodeIndex v = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

inline std::uint64_t pair_key(NodeIndex u, NodeIndex v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Simple undirected weighted graph over an implicit node range.
// Edges are stored canonical (u < v) and sorted by (u, v).
class Snapshot {
public:
    Snapshot() = default;

    // Throws InputError on self-loops, duplicate pairs, or negative/non-finite weights.
    explicit Snapshot(std::vector<Edge> edges);

    std::span<const Edge> edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    bool has_edge(NodeIndex a, NodeIndex b) const { return find(a, b) != nullptr; }
    std::optional<double> weight(NodeIndex a, NodeIndex b) const;
    double total_weight() const;

    // Degree of every node in [0, node_count).
    std::vector<std::uint32_t> degrees(std::size_t node_count) const;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;

private:
    const Edge* find(NodeIndex a, NodeIndex b) const;

    std::vector<Edge> edges_;
};

class TemporalNetwork {
public:
    // Throws InputError when T = 0, labels collide, the timestamp count does not
    // match the snapshot count, or an edge references an unknown node.
    TemporalNetwork(std::vector<std::string> node_labels,
                    std::vector<std::string> timestamps,
                    std::vector<Snapshot> snapshots);

    std::size_t node_count() const { return labels_.size(); }
    std::size_t snapshot_count() const { return snapshots_.size(); }

    std::span<const std::string> node_labels() const { return labels_; }
    const std::string& label(NodeIndex i) const { return labels_.at(i); }
    std::optional<NodeIndex> index_of(const std::string& label) const;

    std::span<const std::string> timestamps() const { return timestamps_; }
    std::span<const Snapshot> snapshots() const { return snapshots_; }

    // 1-based access, t in [1, T].
    const Snapshot& at(std::size_t t) const { return snapshots_.at(t - 1); }

    std::size_t temporal_edge_count() const;

    // Same nodes and timestamps, new snapshot contents.
    TemporalNetwork with_snapshots(std::vector<Snapshot> snapshots) const;

    friend bool operator==(const TemporalNetwork& a, const TemporalNetwork& b) {
        return a.labels_ == b.labels_ && a.timestamps_ == b.timestamps_ &&
               a.snapshots_ == b.snapshots_;
    }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::string> timestamps_;
    std::vector<Snapshot> snapshots_;
};

// One origin-destination observation. `line` is the source line (0 if not from a file).
struct FlowRecord {
    std::string timestamp;
    std::string origin;
    std::string destination;
    double weight = 0.0;
    std::size_t line = 0;
};

enum class Symmetrization { sum, max };
enum class SelfLoopPolicy { drop, reject };

struct BuildOptions {
    Symmetrization symmetrization = Symmetrization::sum;
    SelfLoopPolicy self_loops = SelfLoopPolicy::drop;
};

// Timestamps are either all non-negative integers (ordered numerically) or all
// ISO-8601 dates/datetimes (ordered lexicographically). Only timestamps and
// nodes that occur in retained (non-self-loop) records enter the network; node
// indices follow sorted label order.
TemporalNetwork build_temporal_network(std::span<const FlowRecord> records,
                                       const BuildOptions& options = {});

// Time-aggregated static graph.
struct AggregateGraph {
    Snapshot graph;                        // w_ij = sum over t of w_ij(t)
    std::vector<std::uint32_t> presence;   // snapshots containing each edge, parallel to graph.edges()
    std::vector<std::uint32_t> degree;     // distinct neighbours over [1, T]
    std::vector<std::uint64_t> strength;   // temporal edge count

    friend bool operator==(const AggregateGraph&, const AggregateGraph&) = default;
};

AggregateGraph aggregate(const TemporalNetwork& net);

enum class RichnessProperty { aggregate_degree, temporal_edge_count };

struct RichnessVector {
    RichnessProperty property = RichnessProperty::temporal_edge_count;
    std::vector<double> values;
};

RichnessVector richness_vector(const TemporalNetwork& net, RichnessProperty property);

enum class ThresholdMode { inclusive, strict };

// Sorted member list plus an O(1) membership mask.
class RichSet {
public:
    RichSet() = default;
    RichSet(std::size_t node_count, std::vector<NodeIndex> members);

    std::span<const NodeIndex> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(NodeIndex i) const { return i < mask_.size() && mask_[i]; }

    friend bool operator==(const RichSet& a, const RichSet& b) { return a.members_ == b.members_; }

private:
    std::vector<NodeIndex> members_;
    std::vector<char> mask_;
};

RichSet rich_set(const RichnessVector& richness, double threshold,
                 ThresholdMode mode = ThresholdMode::inclusive);

// Every weight set to 1, topology untouched.
TemporalNetwork unweight(const TemporalNetwork& net);

bool is_unit_weight(const TemporalNetwork& net);

std::string to_string(RichnessProperty p);
RichnessProperty parse_richness_property(const std::string& s);
std::string to_string(ThresholdMode m);
ThresholdMode parse_threshold_mode(const std::string& s);

}  // namespace richclub
