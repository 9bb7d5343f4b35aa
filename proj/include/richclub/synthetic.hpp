#pragma once

// Synthetic temporal networks with a planted weighted club, and recovery scoring.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "richclub/scan.hpp"
#include "richclub/temporal_graph.hpp"

namespace richclub {

struct UniformLaw {
    double low = 1.0;
    double high = 2.0;
};

struct LogNormalLaw {
    double mu = 0.0;
    double sigma = 1.0;
};

using WeightLaw = std::variant<LogNormalLaw, UniformLaw>;

// Club edges at t > after have their boosted weight multiplied by factor.
struct StepChange {
    std::size_t after = 0;
    double factor = 1.0;
};

struct PlantedSpec {
    std::size_t nodes = 60;
    std::size_t snapshots = 52;
    std::size_t club_size = 8;
    double club_weight_scale = 10.0;  // >= 1
    std::size_t window_start = 10;    // 1-based, inclusive
    std::size_t window_end = 31;
    double background_density = 0.3;  // (0, 1]
    WeightLaw weight_law = LogNormalLaw{};
    std::optional<StepChange> step;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// Keys: nodes, snapshots, club-size, scale, window-start, window-end, density,
// weight-law (lognormal|uniform), law-a, law-b (mu/sigma or low/high),
// step-after, step-factor, seed. Returns false for an unknown key.
bool apply_planted_setting(PlantedSpec& spec, const std::string& key, const std::string& value);

struct GroundTruth {
    std::vector<std::string> members;  // sorted labels
    std::size_t window_start = 1;
    std::size_t window_end = 1;
    std::size_t expected_delta = 1;  // window_end - window_start + 1
    bool expect_significant = false;
};

struct PlantedInstance {
    TemporalNetwork network;
    GroundTruth truth;
};

// Background pairs appear per snapshot with probability `background_density`
// and a weight drawn from the law. Club pairs are always present inside the
// window, with the drawn weight multiplied by `club_weight_scale`.
PlantedInstance generate_planted(const PlantedSpec& spec);

struct RecoveryReport {
    std::optional<CellIndex> cell;  // global argmax cell
    double precision = 0.0;
    double recall = 0.0;
    std::optional<std::size_t> delta_error;
    std::optional<double> p_value;  // at the argmax cell
    double min_p = 1.0;             // over all defined cells
    bool any_significant = false;   // some defined cell with p <= alpha
};

RecoveryReport evaluate_recovery(const ScanResult& result, const GroundTruth& truth, double alpha = 0.05);

}  // namespace richclub
