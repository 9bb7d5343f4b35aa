#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "richclub/temporal_graph.hpp"

namespace testutil {

inline richclub::FlowRecord rec(std::string t, std::string a, std::string b, double w, std::size_t line = 0) {
    return {std::move(t), std::move(a), std::move(b), w, line};
}

// Network over labels "a", "b", ... from per-snapshot edge lists given by label.
struct Spec {
    std::vector<std::vector<std::tuple<std::string, std::string, double>>> snapshots;
};

inline richclub::TemporalNetwork net_of(std::size_t n, const Spec& spec) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<richclub::Snapshot> snaps;
    std::vector<std::string> stamps;
    for (const auto& s : spec.snapshots) {
        std::vector<richclub::Edge> edges;
        for (const auto& [u, v, w] : s)
            edges.push_back({static_cast<richclub::NodeIndex>(u[0] - 'a'), static_cast<richclub::NodeIndex>(v[0] - 'a'), w});
        snaps.emplace_back(std::move(edges));
        stamps.push_back(std::to_string(stamps.size() + 1));
    }
    return richclub::TemporalNetwork(std::move(labels), std::move(stamps), std::move(snaps));
}

inline richclub::RichSet rich_of(std::size_t n, const std::string& members) {
    std::vector<richclub::NodeIndex> m;
    for (char c : members) m.push_back(static_cast<richclub::NodeIndex>(c - 'a'));
    return richclub::RichSet(n, std::move(m));
}

inline std::vector<double> weights_sorted(const richclub::Snapshot& s) {
    std::vector<double> w;
    for (const auto& e : s.edges()) w.push_back(e.weight);
    std::sort(w.begin(), w.end());
    return w;
}

inline std::vector<std::uint64_t> pairs_of(const richclub::Snapshot& s) {
    std::vector<std::uint64_t> p;
    for (const auto& e : s.edges()) p.push_back(richclub::pair_key(e.u, e.v));
    return p;
}

}  // namespace testutil
