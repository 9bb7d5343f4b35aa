#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "richclub/io.hpp"

namespace fs = std::filesystem;
using namespace richclub;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("richclub_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "richclub");
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("synth then scan writes a reproducible bundle") {
    TempDir dir("scan");
    auto synth = run({"synth", "--output-dir", dir.path.string(), "--seed", "7", "--nodes", "20", "--snapshots", "10",
                      "--club-size", "4", "--window-start", "2", "--window-end", "6"});
    REQUIRE(synth.code == 0);
    const std::string flows = dir / "flows.csv";
    CHECK(fs::exists(dir / "truth.json"));

    auto args = [&](const std::string& out) {
        return std::vector<std::string>{"scan", "--input", flows, "--output-dir", out, "--metric", "wtrc", "--nulls",
                                        "4", "--seed", "7", "--k-count", "4", "--delta-count", "3", "--svg"};
    };
    auto a = run(args(dir / "a"));
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("argmax k=", 0) == 0);
    for (const char* f : {"result.json", "wtrc_coefficient.csv", "wtrc_observed.csv", "wtrc_null_mean.csv",
                          "wtrc_pvalue.csv", "wtrc_tstart.csv", "membership.csv", "heatmap.svg", "timing.json"})
        CHECK(fs::exists(dir.path / "a" / f));
    auto b_args = args(dir / "b");
    b_args.push_back("--threads");
    b_args.push_back("3");
    REQUIRE(run(b_args).code == 0);
    CHECK(slurp(dir / "a/result.json") == slurp(dir / "b/result.json"));
    CHECK(slurp(dir / "a/wtrc_coefficient.csv") == slurp(dir / "b/wtrc_coefficient.csv"));

    auto parsed = scan_result_from_json(nlohmann::json::parse(slurp(dir / "a/result.json")));
    CHECK(parsed.config.seed == 7);
    CHECK(*parsed.config.null_count == 4);

    // Global flags may come before the subcommand too.
    auto c = run({"--seed", "7", "--output-dir", dir / "c", "scan", "--input", flows, "--nulls", "4", "--k-count", "4",
                  "--delta-count", "3"});
    REQUIRE(c.code == 0);
    CHECK(slurp(dir / "a/result.json") == slurp(dir / "c/result.json"));
}

TEST_CASE("ttrc on unit-weight input matches wtrc observed numerators") {
    TempDir dir("ttrc");
    write(dir / "flows.csv",
          "timestamp,origin,destination,weight\n1,a,b,1\n1,b,c,1\n1,c,d,1\n2,a,b,1\n2,a,c,1\n3,a,b,1\n3,b,d,1\n3,c,d,1\n");
    auto w = run({"scan", "--input", dir / "flows.csv", "--output-dir", dir / "w", "--metric", "wtrc", "--nulls", "3",
                  "--seed", "1", "--k-count", "3"});
    auto t = run({"scan", "--input", dir / "flows.csv", "--output-dir", dir / "t", "--metric", "ttrc", "--nulls", "3",
                  "--seed", "1", "--k-count", "3"});
    REQUIRE(w.code == 0);
    REQUIRE(t.code == 0);
    auto jw = nlohmann::json::parse(slurp(dir / "w/result.json"));
    auto jt = nlohmann::json::parse(slurp(dir / "t/result.json"));
    for (std::size_t k = 0; k < jw["cells"].size(); ++k)
        for (std::size_t d = 0; d < jw["cells"][k].size(); ++d)
            CHECK(jw["cells"][k][d]["observed"] == jt["cells"][k][d]["observed"]);
}

TEST_CASE("config file with flag overrides") {
    TempDir dir("config");
    write(dir / "flows.csv", "timestamp,origin,destination,weight\n1,a,b,2\n1,b,c,1\n2,a,b,3\n2,a,c,1\n");
    write(dir / "scan.cfg", "metric = ttrc\nnulls = 2\nk-count = 2\n");
    auto r = run({"scan", "--config", dir / "scan.cfg", "--input", dir / "flows.csv", "--output-dir", dir / "o",
                  "--metric", "wtrc"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(slurp(dir / "o/result.json"));
    CHECK(j["config"]["metric"] == "wtrc");
    CHECK(j["config"]["nulls"] == 2);

    write(dir / "bad.cfg", "metric = wtrc\nflavour = mint\n");
    auto bad = run({"scan", "--config", dir / "bad.cfg", "--input", dir / "flows.csv", "--output-dir", dir / "o"});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("exit codes") {
    TempDir dir("codes");
    write(dir / "flows.csv", "timestamp,origin,destination,weight\n1,a,b,1\n1,a,c,oops\n");
    auto parse = run({"scan", "--input", dir / "flows.csv", "--output-dir", dir / "o"});
    CHECK(parse.code == 2);
    CHECK(parse.err.find("line 3") != std::string::npos);

    CHECK(run({"scan", "--input", dir / "missing.csv", "--output-dir", dir / "o"}).code == 2);
    CHECK(run({"scan", "--bogus-flag"}).code == 2);
    CHECK(run({}).code == 2);

    write(dir / "good.csv", "timestamp,origin,destination,weight\n1,a,b,1\n1,a,c,2\n2,b,c,1\n");
    CHECK(run({"scan", "--input", dir / "good.csv", "--output-dir", dir / "o", "--metric", "pagerank"}).code == 3);
    CHECK(run({"scan", "--input", dir / "good.csv", "--output-dir", dir / "o", "--delta-values", "9"}).code == 3);
    CHECK(run({"scan", "--input", dir / "good.csv", "--output-dir", dir / "o", "--nulls", "0"}).code == 3);
    CHECK(run({"synth", "--output-dir", dir / "s", "--club-size", "500"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("undefined cells still exit zero") {
    TempDir dir("undef");
    write(dir / "flows.csv", "timestamp,origin,destination,weight\n1,a,b,1\n2,c,d,1\n");
    auto r = run({"scan", "--input", dir / "flows.csv", "--output-dir", dir / "o", "--k-values", "1,50", "--nulls", "2"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(slurp(dir / "o/result.json"));
    CHECK(j["defined_mask"][1][0] == false);
    CHECK(j["cells"][1][0]["coefficient"].is_null());
}

TEST_CASE("timeseries with split") {
    TempDir dir("ts");
    REQUIRE(run({"synth", "--output-dir", dir.path.string(), "--seed", "3", "--nodes", "20", "--snapshots", "16",
                 "--club-size", "4", "--window-start", "1", "--window-end", "16", "--step-after", "8",
                 "--step-factor", "0.4"})
                .code == 0);
    auto r = run({"timeseries", "--input", dir / "flows.csv", "--output-dir", dir / "o", "--k", "0", "--delta", "2",
                  "--nulls", "4", "--split", "1"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(slurp(dir / "o/regression.json"));
    CHECK(j["pre"]["defined"] == false);
    CHECK(j["post"]["defined"] == true);
    CHECK(j["full"]["defined"] == true);
    std::istringstream csv(slurp(dir / "o/timeseries.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,observed,null_mean,coefficient,flow_sum");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 15);

    CHECK(run({"timeseries", "--input", dir / "flows.csv", "--output-dir", dir / "o", "--delta", "2"}).code == 3);
    CHECK(run({"timeseries", "--input", dir / "flows.csv", "--output-dir", dir / "o", "--k", "0", "--delta", "99"})
              .code == 3);
}

TEST_CASE("synth is deterministic and round trips") {
    TempDir dir("synth");
    REQUIRE(run({"synth", "--output-dir", dir / "a", "--seed", "11", "--nodes", "15", "--snapshots", "6",
                 "--club-size", "3", "--window-start", "1", "--window-end", "3", "--scale", "1"})
                .code == 0);
    REQUIRE(run({"synth", "--output-dir", dir / "b", "--seed", "11", "--nodes", "15", "--snapshots", "6",
                 "--club-size", "3", "--window-start", "1", "--window-end", "3", "--scale", "1"})
                .code == 0);
    CHECK(slurp(dir / "a/flows.csv") == slurp(dir / "b/flows.csv"));
    CHECK(slurp(dir / "a/truth.json") == slurp(dir / "b/truth.json"));
    auto truth = nlohmann::json::parse(slurp(dir / "a/truth.json"));
    CHECK(truth["expect_significant"] == false);

    PlantedSpec spec;
    spec.nodes = 15;
    spec.snapshots = 6;
    spec.club_size = 3;
    spec.window_start = 1;
    spec.window_end = 3;
    spec.club_weight_scale = 1;
    spec.seed = 11;
    auto inst = generate_planted(spec);
    CHECK(build_temporal_network(read_flow_csv_file(dir / "a/flows.csv")) == inst.network);
}

TEST_CASE("export-geo and aggregate") {
    TempDir dir("geo");
    write(dir / "flows.csv",
          "timestamp,origin,destination,weight\n1,a,b,4\n1,b,c,1\n1,c,d,1\n2,a,b,2\n2,a,c,1\n2,b,d,1\n");
    REQUIRE(run({"scan", "--input", dir / "flows.csv", "--output-dir", dir / "s", "--k-values", "3,4", "--delta-values",
                 "1,2", "--nulls", "3"})
                .code == 0);
    write(dir / "geo.csv", "node,lon,lat\na,0,0\nb,1,1\nc,2,2\nd,3,3\n");
    auto ok = run({"export-geo", "--result", dir / "s/result.json", "--geometry", dir / "geo.csv", "--input",
                   dir / "flows.csv", "--output-dir", dir / "g", "--k", "3", "--delta", "2"});
    REQUIRE(ok.code == 0);
    auto layer = nlohmann::json::parse(slurp(dir / "g/rich_club.geojson"));
    CHECK(layer["type"] == "FeatureCollection");

    write(dir / "partial.csv", "node,lon,lat\nd,3,3\n");
    auto missing = run({"export-geo", "--result", dir / "s/result.json", "--geometry", dir / "partial.csv", "--input",
                        dir / "flows.csv", "--output-dir", dir / "g", "--k", "3", "--delta", "2"});
    CHECK(missing.code == 4);
    CHECK(missing.err.find("missing geometry") != std::string::npos);
    CHECK(run({"export-geo", "--result", dir / "s/result.json", "--geometry", dir / "geo.csv", "--input",
               dir / "flows.csv", "--output-dir", dir / "g", "--k", "3.7", "--delta", "2"})
              .code == 3);

    auto agg = run({"aggregate", "--input", dir / "flows.csv", "--output-dir", dir / "agg"});
    REQUIRE(agg.code == 0);
    CHECK(slurp(dir / "agg/aggregate_edges.csv").rfind("source,target,weight,snapshots\na,b,6,2\n", 0) == 0);
    CHECK(fs::exists(dir / "agg/aggregate_nodes.csv"));
}
