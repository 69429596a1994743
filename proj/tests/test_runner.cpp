// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <doctest.h>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "circons/graph_io.hpp"
#include "circons/runner.hpp"

using namespace circons;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("circons_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

json base_manifest(const std::filesystem::path& out_dir) {
    return json{
        {"graphs", json::array({json{{"synthetic", {{"seed", 5}}}}})},
        {"configs", {{"kind", "crossed"},
                     {"node_levels", {0.6, 0.9}},
                     {"edge_levels", {0.9, 0.99}}}},
        {"output_dir", out_dir.string()},
    };
}

int run_cli(const std::string& args) {
    const std::string command = std::string(CIRCONS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("manifest parsing applies defaults and validates") {
    const json doc = base_manifest("out");
    const RunManifest manifest = parse_manifest(doc);
    CHECK(manifest.graphs.size() == 1);
    CHECK(manifest.family.kind == FamilyKind::crossed);
    CHECK(manifest.tau == 1.0);
    CHECK(manifest.random_baseline_seeds == 10);
    CHECK(manifest.bootstrap_samples == 100);

    json bad = doc;
    bad.erase("graphs");
    CHECK_THROWS_AS(parse_manifest(bad), ValidationError);

    json bad_tau = doc;
    bad_tau["tau"] = 1.5;
    CHECK_THROWS_AS(parse_manifest(bad_tau), ValidationError);

    json bad_family = doc;
    bad_family["configs"] = {{"kind", "mystery"}};
    CHECK_THROWS_AS(parse_manifest(bad_family), ValidationError);
}

TEST_CASE("crossed two-config run emits only scores in {0.5, 1}") {
    const auto out_dir = fresh_dir("crossed2");
    const RunManifest manifest = parse_manifest(base_manifest(out_dir));
    std::ostringstream log;
    const RunSummary summary = run_manifest(manifest, log);
    REQUIRE(summary.exit_code == 0);

    const json report = json::parse(read_file(out_dir / "syn0_seed5.json"));
    const int b = report.at("stability").at("views").get<int>();
    CHECK(b == 2);
    std::set<int> counts;
    for (const auto& row : report.at("stability").at("scores")) {
        counts.insert(row.at(2).get<int>());
    }
    for (int k : counts) {
        CHECK((k == 1 || k == 2));
    }
    CHECK(std::filesystem::exists(out_dir / "aggregate.csv"));
    CHECK(std::filesystem::exists(out_dir / "curve_syn0_seed5.csv"));
    CHECK(std::filesystem::exists(out_dir / "bins_syn0_seed5.csv"));
    CHECK(std::filesystem::exists(out_dir / "report.json"));
}

TEST_CASE("nested triple family matches on every graph") {
    const auto out_dir = fresh_dir("nested");
    json doc = base_manifest(out_dir);
    doc["graphs"] = json::array({json{{"synthetic", {{"seed", 1}}}},
                                 json{{"synthetic", {{"seed", 2}}}},
                                 json{{"synthetic", {{"seed", 3}}}}});
    doc["configs"] = {{"kind", "explicit"},
                      {"configs", json::array({json{{"node_keep", 0.6}, {"edge_keep", 0.95}},
                                               json{{"node_keep", 0.8}, {"edge_keep", 0.98}},
                                               json{{"node_keep", 0.9}, {"edge_keep", 0.99}}})}};
    const RunManifest manifest = parse_manifest(doc);
    std::ostringstream log;
    const RunSummary summary = run_manifest(manifest, log);
    REQUIRE(summary.exit_code == 0);

    const json aggregate = json::parse(read_file(out_dir / "report.json"));
    CHECK(aggregate.at("table").at("match").get<int>() == 3);
    for (const auto& id : aggregate.at("graphs")) {
        const json report = json::parse(read_file(out_dir / (id.get<std::string>() + ".json")));
        CHECK(report.at("diagnostics").at("nested_chain").get<bool>());
    }
}

TEST_CASE("identical manifests produce byte-identical reports") {
    const auto out_a = fresh_dir("det_a");
    const auto out_b = fresh_dir("det_b");
    json doc = base_manifest(out_a);
    doc["boost"] = {{"enabled", true}, {"alpha", 0.9}, {"post_prune_keep", 0.95}};

    std::ostringstream log;
    RunManifest manifest = parse_manifest(doc);
    REQUIRE(run_manifest(manifest, log).exit_code == 0);
    manifest.output_dir = out_b;
    REQUIRE(run_manifest(manifest, log).exit_code == 0);

    for (const char* name : {"syn0_seed5.json", "report.json", "aggregate.csv",
                             "curve_syn0_seed5.csv", "bins_syn0_seed5.csv"}) {
        CHECK(read_file(out_a / name) == read_file(out_b / name));
    }
}

TEST_CASE("per-graph failure flushes a failure marker") {
    const auto out_dir = fresh_dir("failure");
    json doc = base_manifest(out_dir);
    doc["graphs"].push_back(json{{"file", (out_dir / "missing.json").string()}});
    const RunManifest manifest = parse_manifest(doc);
    std::ostringstream log;
    const RunSummary summary = run_manifest(manifest, log);
    CHECK(summary.exit_code == 2);
    const json report = json::parse(read_file(out_dir / "report.json"));
    CHECK(report.at("status").get<std::string>() == "failed");
    CHECK(report.at("completed_graphs").size() == 1);
}

TEST_CASE("cli subcommands: gen, validate, run, bench") {
    const auto dir = fresh_dir("cli");

    const auto spec_path = dir / "spec.json";
    write_file(spec_path, json{{"layers", 3},
                               {"features_per_layer", 4},
                               {"logits", 2},
                               {"core_edges", 6},
                               {"contingent_edges", 10},
                               {"noise_edges", 30},
                               {"seed", 7}}
                              .dump());
    const auto graph_path = dir / "graph.json";
    REQUIRE(run_cli("gen " + spec_path.string() + " " + graph_path.string()) == 0);

    const AttributionGraph g = load_graph_file(graph_path);
    CHECK(g.edge_count() == 46);

    SUBCASE("gen is reproducible") {
        const auto graph2 = dir / "graph2.json";
        REQUIRE(run_cli("gen " + spec_path.string() + " " + graph2.string()) == 0);
        CHECK(read_file(graph_path) == read_file(graph2));
    }
    SUBCASE("validate accepts the generated file") {
        CHECK(run_cli("validate " + graph_path.string()) == 0);
    }
    SUBCASE("validate rejects a cyclic file with exit 1") {
        const auto bad_path = dir / "cyclic.json";
        write_file(bad_path, R"({
            "meta": {"prompt": "", "target_token": "", "model": ""},
            "nodes": [
                {"id": "a", "kind": "feature", "layer": 0, "position": 0},
                {"id": "b", "kind": "feature", "layer": 0, "position": 1},
                {"id": "L", "kind": "logit", "layer": 1, "position": 0}
            ],
            "edges": [
                {"src": "a", "dst": "b", "w": 1.0},
                {"src": "b", "dst": "a", "w": 1.0},
                {"src": "a", "dst": "L", "w": 1.0}
            ]
        })");
        CHECK(run_cli("validate " + bad_path.string()) == 1);
    }
    SUBCASE("missing file exits with the I/O code") {
        CHECK(run_cli("validate " + (dir / "absent.json").string()) == 2);
    }
    SUBCASE("run executes a manifest against a graph file") {
        const auto manifest_path = dir / "manifest.json";
        const auto out_dir = dir / "out";
        json doc = base_manifest(out_dir);
        doc["graphs"] = json::array({json{{"file", graph_path.string()}}});
        write_file(manifest_path, doc.dump());
        CHECK(run_cli("run " + manifest_path.string()) == 0);
        CHECK(std::filesystem::exists(out_dir / "graph.json"));
        CHECK(std::filesystem::exists(out_dir / "aggregate.csv"));
    }
    SUBCASE("bench runs at a small size") {
        CHECK(run_cli("bench --edges 500 --views 3 --repeats 2") == 0);
    }
}
