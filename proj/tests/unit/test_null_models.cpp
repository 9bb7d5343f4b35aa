#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "../oracle/brute_force.hpp"
#include "helpers.hpp"
#include "richclub/error.hpp"
#include "richclub/null_models.hpp"

using namespace richclub;

namespace {

void check_simple(const Snapshot& s) {
    std::set<std::uint64_t> seen;
    for (const auto& e : s.edges()) {
        CHECK(e.u != e.v);
        CHECK(seen.insert(pair_key(e.u, e.v)).second);
    }
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    std::vector<std::uint64_t> xa, xb, xc, xd;
    for (int i = 0; i < 8; ++i) {
        xa.push_back(a.engine()());
        xb.push_back(b.engine()());
        xc.push_back(c.engine()());
        xd.push_back(d.engine()());
    }
    CHECK(xa == xb);
    CHECK(xa != xc);
    CHECK(xa != xd);
    RngStream p(1, 0);
    auto s1 = p.substream(5), s2 = p.substream(5);
    CHECK(s1.engine()() == s2.engine()());
    CHECK(p.substream(5).engine()() != p.substream(6).engine()());
    for (int i = 0; i < 100; ++i) CHECK(p.index(7) < 7);
}

TEST_CASE("edge switching leaves a star untouched") {
    Snapshot star({{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
    RngStream rng(1);
    CHECK(edge_switch_snapshot(star, 100, rng) == star);
}

TEST_CASE("edge switching of two disjoint edges yields a legal rewiring") {
    Snapshot path({{0, 1, 1.0}, {2, 3, 1.0}});
    std::set<std::vector<std::uint64_t>> outcomes;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RngStream rng(seed);
        auto out = edge_switch_snapshot(path, 2, rng);
        auto p = testutil::pairs_of(out);
        outcomes.insert(p);
        CHECK(out.degrees(4) == std::vector<std::uint32_t>{1, 1, 1, 1});
    }
    const std::set<std::vector<std::uint64_t>> legal{
        {pair_key(0, 1), pair_key(2, 3)}, {pair_key(0, 2), pair_key(1, 3)}, {pair_key(0, 3), pair_key(1, 2)}};
    for (const auto& o : outcomes) CHECK(legal.count(o) == 1);
    CHECK(outcomes.size() == 3);

    // a single attempt on two disjoint edges always succeeds
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream rng(seed);
        CHECK_FALSE(edge_switch_snapshot(path, 1, rng) == path);
    }
}

TEST_CASE("edge switching preserves degrees and weights on a denser graph") {
    std::mt19937_64 gen(7);
    std::vector<Edge> edges;
    std::set<std::uint64_t> used;
    std::uniform_int_distribution<NodeIndex> node(0, 7);
    while (edges.size() < 12) {
        NodeIndex u = node(gen), v = node(gen);
        if (u == v || !used.insert(pair_key(u, v)).second) continue;
        edges.push_back({u, v, static_cast<double>(edges.size() + 1)});
    }
    Snapshot s(edges);
    RngStream rng(99);
    auto out = edge_switch_snapshot(s, 1000, rng);
    CHECK(out.degrees(8) == s.degrees(8));
    CHECK(testutil::weights_sorted(out) == testutil::weights_sorted(s));
    check_simple(out);
    CHECK(default_switch_attempts(12) == 120);
    CHECK(default_switch_attempts(3, 2.5) == 8);
}

TEST_CASE("weight decorrelation") {
    Snapshot s({{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
    RngStream rng(4);
    auto out = weight_decorrelate_snapshot(s, rng);
    CHECK(testutil::pairs_of(out) == testutil::pairs_of(s));
    CHECK(testutil::weights_sorted(out) == std::vector<double>{1, 2, 3});

    Snapshot single({{2, 5, 7.5}});
    CHECK(weight_decorrelate_snapshot(single, rng) == single);
    Snapshot flat({{0, 1, 2.0}, {1, 2, 2.0}, {2, 3, 2.0}});
    CHECK(weight_decorrelate_snapshot(flat, rng) == flat);
}

TEST_CASE("weight decorrelation assigns weights uniformly") {
    Snapshot s({{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
    std::map<double, int> first;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        RngStream rng(seed);
        first[weight_decorrelate_snapshot(s, rng).edges()[0].weight]++;
    }
    for (auto [w, n] : first) CHECK(n == doctest::Approx(1000).epsilon(0.1));
}

TEST_CASE("global weight decorrelation pools weights across snapshots") {
    testutil::Spec spec{{{{"a", "b", 1}, {"b", "c", 2}}, {{"a", "c", 30}}, {{"a", "b", 400}, {"c", "d", 5}}}};
    auto net = testutil::net_of(4, spec);
    std::multiset<double> before, after;
    bool moved = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream rng(seed);
        auto out = weight_decorrelate_global(net, rng);
        after.clear();
        for (std::size_t t = 1; t <= 3; ++t) {
            CHECK(testutil::pairs_of(out.at(t)) == testutil::pairs_of(net.at(t)));
            for (const auto& e : out.at(t).edges()) after.insert(e.weight);
        }
        CHECK(after == std::multiset<double>{1, 2, 5, 30, 400});
        moved = moved || out.at(2).edges()[0].weight != 30.0;
    }
    CHECK(moved);
}

TEST_CASE("sequence shuffling") {
    testutil::Spec one{{{{"a", "b", 1}}}};
    auto single = testutil::net_of(2, one);
    RngStream rng(2);
    CHECK(sequence_shuffle(single, rng) == single);

    testutil::Spec three{{{{"a", "b", 1}}, {{"b", "c", 2}}, {{"a", "c", 3}}}};
    auto net = testutil::net_of(3, three);
    std::set<std::vector<double>> orders;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RngStream r(seed);
        auto out = sequence_shuffle(net, r);
        std::vector<double> order;
        for (std::size_t t = 1; t <= 3; ++t) order.push_back(out.at(t).edges()[0].weight);
        orders.insert(order);
        CHECK(std::vector<std::string>(out.timestamps().begin(), out.timestamps().end()) ==
              std::vector<std::string>{"1", "2", "3"});
        CHECK(aggregate(out) == aggregate(net));
    }
    CHECK(orders.size() == 6);
}

TEST_CASE("timestamp shuffling") {
    SUBCASE("two events swap times") {
        testutil::Spec spec{{{{"a", "b", 1}}, {{"c", "d", 1}}}};
        auto net = testutil::net_of(4, spec);
        bool swapped = false;
        for (std::uint64_t seed = 0; seed < 20 && !swapped; ++seed) {
            RngStream rng(seed);
            auto out = timestamp_shuffle(net, 1, rng);
            if (out.at(1).has_edge(2, 3)) {
                swapped = true;
                CHECK(out.at(1).edge_count() == 1);
                CHECK(out.at(2).has_edge(0, 1));
            } else {
                CHECK(out == net);
            }
        }
        CHECK(swapped);
    }
    SUBCASE("single event is unchanged") {
        testutil::Spec spec{{{{"a", "b", 1}}, {}}};
        auto net = testutil::net_of(2, spec);
        RngStream rng(1);
        CHECK(timestamp_shuffle(net, 10, rng) == net);
    }
    SUBCASE("weighted input needs drop-weights") {
        testutil::Spec spec{{{{"a", "b", 2.5}}, {{"a", "c", 1}}}};
        auto net = testutil::net_of(3, spec);
        RngStream rng(1);
        CHECK_THROWS_AS(timestamp_shuffle(net, 10, rng), ConfigError);
        auto out = timestamp_shuffle(net, 10, rng, true);
        CHECK(is_unit_weight(out));
    }
    SUBCASE("counts are preserved") {
        std::mt19937_64 gen(21);
        for (int rep = 0; rep < 20; ++rep) {
            auto net = unweight(oracle::to_network(oracle::random_dense(gen, 7, 6, 0.4, true)));
            RngStream rng(static_cast<std::uint64_t>(rep));
            auto out = timestamp_shuffle(net, 10 * net.temporal_edge_count(), rng);
            for (std::size_t t = 1; t <= 6; ++t) CHECK(out.at(t).edge_count() == net.at(t).edge_count());
            CHECK(aggregate(out).graph == aggregate(net).graph);
        }
    }
}

TEST_CASE("recipes parse, print and validate") {
    auto r = parse_recipe("edge-switch(5), weight-decorrelate(global), sequence-shuffle");
    REQUIRE(r.steps.size() == 3);
    CHECK(std::get<EdgeSwitchStep>(r.steps[0]).attempts_multiplier == 5.0);
    CHECK(std::get<WeightDecorrelateStep>(r.steps[1]).global);
    CHECK(parse_recipe(to_string(r)) == r);
    auto ts = parse_recipe("timestamp-shuffle(3, drop-weights)");
    CHECK(std::get<TimestampShuffleStep>(ts.steps[0]).drop_weights);
    CHECK(parse_recipe(to_string(ts)) == ts);
    CHECK(parse_recipe(to_string(NullRecipe::mixed())) == NullRecipe::mixed());
    CHECK(NullRecipe::ttrc().has_edge_switch());
    CHECK_FALSE(NullRecipe::wtrc().has_edge_switch());

    CHECK_THROWS_AS(parse_recipe(""), ConfigError);
    CHECK_THROWS_AS(parse_recipe("edge-switch, edge-switch"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("edge-switch(-1)"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("rewire"), ConfigError);
    CHECK_THROWS_AS(parse_recipe("edge-switch(3"), ConfigError);
    CHECK_THROWS_AS(NullRecipe{}.validate(), ConfigError);
}

TEST_CASE("make_null composes steps") {
    std::mt19937_64 gen(8);
    auto net = oracle::to_network(oracle::random_dense(gen, 8, 5, 0.5, false));

    auto snapshot_signature = [](const Snapshot& s) { return testutil::pairs_of(s); };
    std::multiset<std::vector<std::uint64_t>> topo;
    std::multiset<std::vector<double>> weights;
    for (const auto& s : net.snapshots()) {
        topo.insert(snapshot_signature(s));
        weights.insert(testutil::weights_sorted(s));
    }

    auto wd = make_null(net, NullRecipe::wtrc(), RngStream(3, 0));
    std::multiset<std::vector<std::uint64_t>> topo_out;
    std::multiset<std::vector<double>> weights_out;
    for (const auto& s : wd.snapshots()) {
        topo_out.insert(snapshot_signature(s));
        weights_out.insert(testutil::weights_sorted(s));
    }
    CHECK(topo_out == topo);
    CHECK(weights_out == weights);

    auto unit = unweight(net);
    auto es = make_null(unit, NullRecipe::ttrc(), RngStream(3, 0));
    std::multiset<std::vector<std::uint32_t>> deg, deg_out;
    for (const auto& s : unit.snapshots()) deg.insert(s.degrees(8));
    for (const auto& s : es.snapshots()) deg_out.insert(s.degrees(8));
    CHECK(deg_out == deg);

    CHECK(make_null(net, NullRecipe::mixed(), RngStream(5, 2)) == make_null(net, NullRecipe::mixed(), RngStream(5, 2)));
    CHECK_FALSE(make_null(net, NullRecipe::mixed(), RngStream(5, 2)) == make_null(net, NullRecipe::mixed(), RngStream(5, 3)));
}
