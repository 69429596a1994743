// SPDX-License-Identifier: Apache-2.0
//
// circons — consensus circuits over attribution-graph pruning ensembles.
//
//   circons run <manifest.json> [--out DIR]
//   circons gen <spec.json> <out.json>
//   circons validate <graph.json>
//   circons bench --edges N --views B --repeats R
//
// Exit codes: 0 ok, 1 validation failure, 2 I/O failure, 3 internal error.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "circons/graph_io.hpp"
#include "circons/runner.hpp"

namespace {

int mapped_exit_code(const std::exception& err) {
    if (dynamic_cast<const circons::IoError*>(&err)) return 2;
    if (dynamic_cast<const circons::ValidationError*>(&err) ||
        dynamic_cast<const circons::ParseError*>(&err) ||
        dynamic_cast<const std::invalid_argument*>(&err) ||
        dynamic_cast<const std::domain_error*>(&err)) {
        return 1;
    }
    return 3;
}

int cmd_run(const std::filesystem::path& manifest_path, const std::string& out_override) {
    circons::RunManifest manifest = circons::load_manifest_file(manifest_path);
    if (!out_override.empty()) {
        manifest.output_dir = out_override;
    }
    const circons::RunSummary summary = circons::run_manifest(manifest, std::cout);
    if (summary.exit_code != 0) {
        std::cerr << "error: " << summary.error << "\n";
    }
    return summary.exit_code;
}

int cmd_gen(const std::filesystem::path& spec_path, const std::filesystem::path& out_path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(circons::read_file(spec_path));
    } catch (const nlohmann::json::parse_error& err) {
        throw circons::ParseError(std::string("malformed spec: ") + err.what());
    }
    const circons::SyntheticSpec spec = circons::synthetic_spec_from_json(doc);
    const circons::AttributionGraph g = circons::generate_synthetic(spec);
    circons::save_graph_file(g, out_path);
    std::cout << "wrote " << out_path.string() << " (" << g.node_count() << " nodes, "
              << g.edge_count() << " edges)\n";
    return 0;
}

int cmd_validate(const std::filesystem::path& graph_path) {
    const circons::GraphDocument doc =
        circons::parse_graph_document(circons::read_file(graph_path));
    const std::vector<std::string> violations = circons::validate(doc);
    for (const std::string& violation : violations) {
        std::cout << violation << "\n";
    }
    if (violations.empty()) {
        std::cout << "ok: " << doc.nodes.size() << " nodes, " << doc.edges.size() << " edges\n";
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"consensus circuits over attribution-graph pruning ensembles"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string out_override;
    CLI::App* run = app.add_subcommand("run", "execute a run manifest");
    run->add_option("manifest", manifest_path, "manifest JSON file")->required();
    run->add_option("--out", out_override, "override the manifest output directory");

    std::string spec_path;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic graph file");
    gen->add_option("spec", spec_path, "synthetic spec JSON file")->required();
    gen->add_option("out", gen_out, "output graph file")->required();

    std::string graph_path;
    CLI::App* validate = app.add_subcommand("validate", "validate a graph file");
    validate->add_option("graph", graph_path, "graph JSON file")->required();

    std::size_t bench_edges = 40000;
    int bench_views = 25;
    int bench_repeats = 5;
    CLI::App* bench = app.add_subcommand("bench", "time the pipeline on a synthetic graph");
    bench->add_option("--edges", bench_edges, "approximate edge count");
    bench->add_option("--views", bench_views, "number of pruning configurations");
    bench->add_option("--repeats", bench_repeats, "repetitions for the median");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(manifest_path, out_override);
        if (gen->parsed()) return cmd_gen(spec_path, gen_out);
        if (validate->parsed()) return cmd_validate(graph_path);
        if (bench->parsed()) {
            circons::run_bench(bench_edges, bench_views, bench_repeats, std::cout);
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return mapped_exit_code(err);
    }
    return 0;
}
