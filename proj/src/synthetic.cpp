#include "richclub/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "richclub/error.hpp"
#include "richclub/null_models.hpp"

namespace richclub {

namespace {

std::string key_of(std::string key) {
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return c == '_' ? '-' : static_cast<char>(std::tolower(c)); });
    return key;
}

template <class T>
T number(const std::string& s, const std::string& key) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("invalid value '" + s + "' for " + key);
    return value;
}

std::string node_label(std::size_t i, std::size_t n) {
    std::string digits = std::to_string(i);
    const std::size_t width = std::to_string(n - 1).size();
    return "n" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

void PlantedSpec::validate() const {
    if (nodes < 2) throw ConfigError("planted network needs at least 2 nodes");
    if (snapshots < 1) throw ConfigError("planted network needs at least 1 snapshot");
    if (club_size > nodes) throw ConfigError("club size exceeds node count");
    if (!(club_weight_scale >= 1.0) || !std::isfinite(club_weight_scale))
        throw ConfigError("club weight scale must be >= 1");
    if (window_start < 1 || window_start > window_end || window_end > snapshots)
        throw ConfigError("club window must satisfy 1 <= start <= end <= snapshots");
    if (!(background_density > 0.0 && background_density <= 1.0))
        throw ConfigError("background density must be in (0, 1]");
    if (auto* u = std::get_if<UniformLaw>(&weight_law); u && !(u->low >= 0.0 && u->low <= u->high))
        throw ConfigError("uniform weight law needs 0 <= low <= high");
    if (auto* l = std::get_if<LogNormalLaw>(&weight_law); l && !(l->sigma >= 0.0))
        throw ConfigError("lognormal sigma must be non-negative");
    if (step && !(step->factor >= 0.0)) throw ConfigError("step factor must be non-negative");
}

bool apply_planted_setting(PlantedSpec& spec, const std::string& raw_key, const std::string& value) {
    const std::string key = key_of(raw_key);
    if (key == "nodes") spec.nodes = number<std::size_t>(value, key);
    else if (key == "snapshots") spec.snapshots = number<std::size_t>(value, key);
    else if (key == "club-size") spec.club_size = number<std::size_t>(value, key);
    else if (key == "scale") spec.club_weight_scale = number<double>(value, key);
    else if (key == "window-start") spec.window_start = number<std::size_t>(value, key);
    else if (key == "window-end") spec.window_end = number<std::size_t>(value, key);
    else if (key == "density") spec.background_density = number<double>(value, key);
    else if (key == "seed") spec.seed = number<std::uint64_t>(value, key);
    else if (key == "weight-law") {
        if (value == "lognormal") spec.weight_law = LogNormalLaw{};
        else if (value == "uniform") spec.weight_law = UniformLaw{};
        else throw ConfigError("unknown weight law '" + value + "'");
    } else if (key == "law-a" || key == "law-b") {
        const double v = number<double>(value, key);
        std::visit(
            [&](auto& law) {
                using L = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<L, LogNormalLaw>) (key == "law-a" ? law.mu : law.sigma) = v;
                else (key == "law-a" ? law.low : law.high) = v;
            },
            spec.weight_law);
    } else if (key == "step-after") {
        if (!spec.step) spec.step = StepChange{};
        spec.step->after = number<std::size_t>(value, key);
    } else if (key == "step-factor") {
        if (!spec.step) spec.step = StepChange{};
        spec.step->factor = number<double>(value, key);
    } else {
        return false;
    }
    return true;
}

PlantedInstance generate_planted(const PlantedSpec& spec) {
    spec.validate();
    RngStream rng(spec.seed, 0);
    auto& eng = rng.engine();

    std::vector<NodeIndex> order(spec.nodes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), eng);
    std::vector<char> in_club(spec.nodes, 0);
    for (std::size_t i = 0; i < spec.club_size; ++i) in_club[order[i]] = 1;

    std::bernoulli_distribution present(spec.background_density);
    auto draw = [&]() -> double {
        return std::visit(
            [&](const auto& law) -> double {
                using L = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<L, LogNormalLaw>)
                    return std::lognormal_distribution<double>(law.mu, law.sigma)(eng);
                else
                    return law.low == law.high ? law.low
                                               : std::uniform_real_distribution<double>(law.low, law.high)(eng);
            },
            spec.weight_law);
    };

    std::vector<Snapshot> snapshots;
    std::vector<std::string> timestamps;
    snapshots.reserve(spec.snapshots);
    for (std::size_t t = 1; t <= spec.snapshots; ++t) {
        const bool boosted = t >= spec.window_start && t <= spec.window_end;
        const double step = spec.step && t > spec.step->after ? spec.step->factor : 1.0;
        std::vector<Edge> edges;
        for (NodeIndex i = 0; i < spec.nodes; ++i)
            for (NodeIndex j = i + 1; j < spec.nodes; ++j) {
                if (boosted && in_club[i] && in_club[j]) {
                    edges.push_back({i, j, draw() * spec.club_weight_scale * step});
                } else if (present(eng)) {
                    edges.push_back({i, j, draw()});
                }
            }
        snapshots.emplace_back(std::move(edges));
        timestamps.push_back(std::to_string(t));
    }

    std::vector<std::string> labels;
    labels.reserve(spec.nodes);
    for (std::size_t i = 0; i < spec.nodes; ++i) labels.push_back(node_label(i, spec.nodes));

    GroundTruth truth;
    for (std::size_t i = 0; i < spec.nodes; ++i)
        if (in_club[i]) truth.members.push_back(labels[i]);
    truth.window_start = spec.window_start;
    truth.window_end = spec.window_end;
    truth.expected_delta = spec.window_end - spec.window_start + 1;
    truth.expect_significant = spec.club_weight_scale > 1.0 && spec.club_size >= 2;

    return {TemporalNetwork(std::move(labels), std::move(timestamps), std::move(snapshots)), std::move(truth)};
}

RecoveryReport evaluate_recovery(const ScanResult& result, const GroundTruth& truth, double alpha) {
    RecoveryReport report;
    for (const auto& row : result.cells)
        for (const auto& cell : row)
            if (cell.coefficient.defined && cell.coefficient.p_two_tailed) {
                report.min_p = std::min(report.min_p, *cell.coefficient.p_two_tailed);
                if (*cell.coefficient.p_two_tailed <= alpha) report.any_significant = true;
            }

    report.cell = result.argmax();
    if (!report.cell) return report;
    const auto& members = result.membership.at(report.cell->k);
    std::size_t hits = 0;
    for (NodeIndex i : members)
        if (std::binary_search(truth.members.begin(), truth.members.end(), result.node_labels.at(i))) ++hits;
    report.precision = members.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(members.size());
    report.recall = truth.members.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.members.size());
    const std::size_t delta = result.deltas.at(report.cell->delta);
    report.delta_error = delta > truth.expected_delta ? delta - truth.expected_delta : truth.expected_delta - delta;
    report.p_value = result.cells[report.cell->k][report.cell->delta].coefficient.p_two_tailed;
    return report;
}

}  // namespace richclub
