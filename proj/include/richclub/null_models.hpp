#pragma once

// Randomizers that destroy selected structure of a temporal network.
//
//   edge switching        degree-preserving two-edge swaps inside each snapshot
//   weight decorrelation  permutes weights over a fixed topology
//   sequence shuffling    permutes snapshot order
//   timestamp shuffling   swaps event timestamps between pair timelines
//
// Every generator is a pure function of its input and RNG stream.

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "richclub/temporal_graph.hpp"

namespace richclub {

// Deterministic random stream identified by (seed, stream id).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    // Independent child stream; a pure function of (this stream's identity, id).
    RngStream substream(std::uint64_t id) const;

    std::mt19937_64& engine() { return engine_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

Snapshot edge_switch_snapshot(const Snapshot& snap, std::size_t attempts, RngStream& rng);
Snapshot weight_decorrelate_snapshot(const Snapshot& snap, RngStream& rng);
TemporalNetwork sequence_shuffle(const TemporalNetwork& net, RngStream& rng);

// Throws ConfigError on weighted input unless `drop_weights` is set. Output weights are 1.
TemporalNetwork timestamp_shuffle(const TemporalNetwork& net, std::size_t swaps, RngStream& rng,
                                  bool drop_weights = false);

// Weight permutation pooled over every temporal edge of the network.
TemporalNetwork weight_decorrelate_global(const TemporalNetwork& net, RngStream& rng);

std::size_t default_switch_attempts(std::size_t edge_count, double multiplier = 10.0);

struct EdgeSwitchStep {
    double attempts_multiplier = 10.0;
    friend bool operator==(const EdgeSwitchStep&, const EdgeSwitchStep&) = default;
};
struct WeightDecorrelateStep {
    bool global = false;
    friend bool operator==(const WeightDecorrelateStep&, const WeightDecorrelateStep&) = default;
};
struct SequenceShuffleStep {
    friend bool operator==(const SequenceShuffleStep&, const SequenceShuffleStep&) = default;
};
struct TimestampShuffleStep {
    double swaps_multiplier = 10.0;
    bool drop_weights = false;
    friend bool operator==(const TimestampShuffleStep&, const TimestampShuffleStep&) = default;
};

using NullStep = std::variant<EdgeSwitchStep, WeightDecorrelateStep, SequenceShuffleStep, TimestampShuffleStep>;

struct NullRecipe {
    std::vector<NullStep> steps;

    // Non-empty, each step kind at most once, positive multipliers.
    void validate() const;

    bool has_edge_switch() const;

    static NullRecipe wtrc();   // weight-decorrelate, sequence-shuffle
    static NullRecipe ttrc();   // edge-switch, sequence-shuffle
    static NullRecipe mixed();  // edge-switch, weight-decorrelate, sequence-shuffle

    friend bool operator==(const NullRecipe&, const NullRecipe&) = default;
};

// Text form: comma-separated step names with optional parameters, e.g.
//   "edge-switch(10), weight-decorrelate, sequence-shuffle"
//   "weight-decorrelate(global)", "timestamp-shuffle(10, drop-weights)"
NullRecipe parse_recipe(const std::string& text);
std::string to_string(const NullRecipe& recipe);

// Applies the recipe's steps in order. Per-snapshot steps draw from
// rng.substream(step).substream(snapshot), so snapshots are randomized independently.
TemporalNetwork make_null(const TemporalNetwork& net, const NullRecipe& recipe, const RngStream& rng);

}  // namespace richclub
