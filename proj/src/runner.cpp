// SPDX-License-Identifier: Apache-2.0
#include "circons/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "circons/boosting.hpp"
#include "circons/graph_io.hpp"

namespace circons {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_number(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general);
    return std::string(buf, res.ptr);
}

json edge_keys(const AttributionGraph& g, std::span<const EdgeId> edges) {
    json keys = json::array();
    for (EdgeId e : edges) {
        keys.push_back({g.nodes()[g.edges()[e].src].id, g.nodes()[g.edges()[e].dst].id});
    }
    return keys;
}

std::size_t endpoint_count(const AttributionGraph& g, std::span<const EdgeId> edges) {
    std::vector<char> seen(g.node_count(), 0);
    std::size_t count = 0;
    for (EdgeId e : edges) {
        for (NodeId v : {g.edges()[e].src, g.edges()[e].dst}) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
            }
        }
    }
    return count;
}

json circuit_row(const AttributionGraph& g, std::span<const EdgeId> edges,
                 std::optional<double> ir) {
    json row{{"edges", edges.size()}, {"nodes", endpoint_count(g, edges)}};
    if (ir) row["ir"] = *ir;
    else row["ir"] = nullptr;
    return row;
}

AttributionGraph materialize(const GraphSource& source) {
    if (source.file) {
        return load_graph_file(*source.file);
    }
    return generate_synthetic(*source.synthetic);
}

struct GraphReport {
    GraphRunResult record;
    json document;
    std::vector<CurvePoint> curve;
    std::vector<StabilityBin> bins;
};

GraphReport process_graph(const AttributionGraph& g, const std::string& id,
                          const RunManifest& manifest) {
    GraphReport out;
    out.record.id = id;
    out.record.model = g.meta().model;

    const InfluenceMap inf = compute_influence(g, manifest.logit_seeds);
    const std::vector<PruningConfig> configs = manifest.family.build();
    std::vector<View> views;
    views.reserve(configs.size());
    for (const PruningConfig& cfg : configs) {
        views.push_back(apply_config(g, inf, cfg));
    }
    const int b = static_cast<int>(views.size());

    const StabilityReport report = stability_scores(views);
    const std::vector<EdgeId> c1 = consensus(report, 1.0);
    const std::vector<EdgeId> c_tau = consensus(report, manifest.tau);
    const Taxonomy taxonomy = classify(report, manifest.contingent_boundary);

    std::vector<EdgeId> all_edges(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) all_edges[e] = e;

    const double ir_c1 = influence_retained(g, c1);
    const double ir_union = influence_retained(g, report.union_edges);
    const std::size_t k = c1.size();

    const std::vector<EdgeId> up = union_pruned_baseline(report, inf, g, k, manifest.baseline_rank);
    const std::vector<std::vector<EdgeId>> random_sets =
        random_baseline(report, k, manifest.random_baseline_seeds, manifest.baseline_seed);
    double random_ir_sum = 0.0;
    json random_irs = json::array();
    for (const auto& draw : random_sets) {
        const double ir = influence_retained(g, draw);
        random_ir_sum += ir;
        random_irs.push_back(ir);
    }
    const double ir_up = influence_retained(g, up);
    const double ir_random_mean = random_ir_sum / static_cast<double>(random_sets.size());

    const LogitDistribution p_full = logit_distribution(g, all_edges, manifest.epsilon);
    const double kl_c1 = kl_divergence(p_full, logit_distribution(g, c1, manifest.epsilon));
    const double kl_up = kl_divergence(p_full, logit_distribution(g, up, manifest.epsilon));

    const std::optional<std::size_t> match = match_single_config(c1, views);
    out.record.irs = IrRecord{ir_c1, ir_up, ir_random_mean};
    out.record.match_index = match;

    out.curve = coverage_curve(report, g);
    out.bins = stability_influence_bins(report, inf);

    json diagnostics;
    diagnostics["match_index"] = match ? json(*match) : json(nullptr);
    if (b >= 2) {
        const JaccardResult jaccard = pairwise_jaccard(views);
        out.record.mean_jaccard = jaccard.mean;
        diagnostics["jaccard"] = {{"mean", jaccard.mean}, {"skipped_pairs", jaccard.skipped_pairs}};

        const NestedChainCheck chain = is_nested_chain(views);
        diagnostics["nested_chain"] = chain.nested;

        json loo = json::array();
        for (const LeaveOneOutRow& row : leave_one_out(views)) {
            loo.push_back({{"score_bin", row.score_bin},
                           {"retention", row.retention},
                           {"edges", row.edge_count}});
        }
        diagnostics["leave_one_out"] = std::move(loo);

        const BootstrapSummary boot =
            bootstrap_consensus(views, g, manifest.bootstrap_samples, manifest.bootstrap_seed);
        diagnostics["bootstrap"] = {{"samples", boot.samples},
                                    {"size_point", boot.size_point},
                                    {"size_ci", {boot.size_ci.first, boot.size_ci.second}},
                                    {"ir_point", boot.ir_point},
                                    {"ir_ci", {boot.ir_ci.first, boot.ir_ci.second}}};
        diagnostics["ci_width_mean_ir"] = boot.ir_ci.second - boot.ir_ci.first;
    } else {
        diagnostics["jaccard"] = nullptr;
        diagnostics["nested_chain"] = nullptr;
        diagnostics["leave_one_out"] = json::array();
        diagnostics["bootstrap"] = nullptr;
        diagnostics["ci_width_mean_ir"] = nullptr;
    }

    // Alternative aggregation rules at the consensus edge budget.
    const std::vector<EdgeId> sxi = aggregate_stability_times_influence(report, inf, k);
    json aggregation{{"stability_times_influence_ir", influence_retained(g, sxi)},
                     {"tau_adaptive",
                      {{"margin", 0.02}, {"tau", tau_adaptive(report, g, views, 0.02)}}}};
    const OracleBest oracle = oracle_best_config(views, g);
    aggregation["oracle_best_config"] = {{"index", oracle.index}, {"ir", oracle.ir}};

    json boosting_section = nullptr;
    if (manifest.boost_enabled) {
        const BoostResult boosted = boost(g, c1, manifest.boost_alpha);
        boosting_section = json{{"alpha", boosted.alpha},
                                {"c1", circuit_row(g, boosted.c1, boosted.ir_c1)},
                                {"c2", circuit_row(g, boosted.c2, std::nullopt)},
                                {"full", circuit_row(g, boosted.boosted, boosted.ir_boosted)}};
        if (manifest.post_prune_keep) {
            const std::vector<EdgeId> pruned =
                post_prune(g, inf, boosted.boosted, *manifest.post_prune_keep);
            json row = circuit_row(g, pruned, influence_retained(g, pruned));
            row["edge_keep"] = *manifest.post_prune_keep;
            boosting_section["post_pruned"] = std::move(row);
        }
    }

    // Summary rows; entries needing a live model are marked, never omitted.
    const double union_size = static_cast<double>(report.union_edges.size());
    json summaries;
    summaries["rejection"] = {
        {"core_edges", taxonomy.core.size()},
        {"core_fraction_of_union", union_size > 0 ? taxonomy.core.size() / union_size : 0.0},
        {"noise_fraction_of_union", union_size > 0 ? taxonomy.noise.size() / union_size : 0.0}};
    summaries["alternatives"] = {
        {"contingent_edges", taxonomy.contingent.size()},
        {"contingent_influence_share", influence_retained(g, taxonomy.contingent)}};
    summaries["approx_intervention"] = "out-of-scope (requires model)";
    summaries["ablation"] = "out-of-scope (requires model)";
    summaries["patching"] = "out-of-scope (requires model)";
    summaries["prompt_level_spearman"] = "out-of-scope (requires model)";
    summaries["sensitivity"] = "not computed (compare runs with alternate config families)";

    json views_section = json::array();
    for (const View& v : views) {
        views_section.push_back({{"config", v.config.id},
                                 {"node_keep", v.config.node_keep},
                                 {"edge_keep", v.config.edge_keep},
                                 {"nodes", v.nodes.size()},
                                 {"edges", v.edges.size()},
                                 {"ir", influence_retained(g, v.edges)}});
    }

    json curve_rows = json::array();
    for (const CurvePoint& p : out.curve) {
        curve_rows.push_back({{"tau", p.tau}, {"size", p.size}, {"ir", p.ir}});
    }
    json bin_rows = json::array();
    for (const StabilityBin& bin : out.bins) {
        bin_rows.push_back({{"score", bin.score},
                            {"mean_edge_influence", bin.mean_edge_influence},
                            {"edges", bin.edge_count}});
    }

    out.document = json{
        {"graph",
         {{"id", id},
          {"model", g.meta().model},
          {"prompt", g.meta().prompt},
          {"target_token", g.meta().target_token},
          {"nodes", g.node_count()},
          {"edges", g.edge_count()}}},
        {"family", manifest.family.describe()},
        {"views", std::move(views_section)},
        {"stability", stability_report_to_json(report)},
        {"consensus",
         {{"tau", manifest.tau},
          {"size", c_tau.size()},
          {"ir", influence_retained(g, c_tau)},
          {"edges", edge_keys(g, c_tau)}}},
        {"strict_consensus",
         {{"size", c1.size()}, {"ir", ir_c1}, {"edges", edge_keys(g, c1)}}},
        {"taxonomy", taxonomy_to_json(taxonomy, g)},
        {"taxonomy_boundary", manifest.contingent_boundary},
        {"diagnostics", std::move(diagnostics)},
        {"baselines",
         {{"edge_budget", k},
          {"rank_by",
           manifest.baseline_rank == BaselineRank::influence ? "influence" : "abs_weight"},
          {"union_pruned", {{"ir", ir_up}, {"kl", kl_up}}},
          {"random",
           {{"seeds", manifest.random_baseline_seeds},
            {"ir_mean", ir_random_mean},
            {"ir_per_seed", std::move(random_irs)}}}}},
        {"metrics",
         {{"ir_c1", ir_c1},
          {"ir_union", ir_union},
          {"kl_consensus", kl_c1},
          {"kl_union_pruned", kl_up}}},
        {"aggregation_rules", std::move(aggregation)},
        {"boosting", std::move(boosting_section)},
        {"curve", std::move(curve_rows)},
        {"bins", std::move(bin_rows)},
        {"summaries", std::move(summaries)}};

    return out;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream out;
    out << "tau,size,ir\n";
    for (const CurvePoint& p : curve) {
        out << format_number(p.tau) << "," << p.size << "," << format_number(p.ir) << "\n";
    }
    return out.str();
}

std::string bins_csv(const std::vector<StabilityBin>& bins) {
    std::ostringstream out;
    out << "score,mean_edge_influence,edges\n";
    for (const StabilityBin& bin : bins) {
        out << format_number(bin.score) << "," << format_number(bin.mean_edge_influence) << ","
            << bin.edge_count << "\n";
    }
    return out.str();
}

int exit_code_for(const std::exception& err) {
    if (dynamic_cast<const IoError*>(&err)) return 2;
    if (dynamic_cast<const ValidationError*>(&err) || dynamic_cast<const ParseError*>(&err) ||
        dynamic_cast<const std::invalid_argument*>(&err) ||
        dynamic_cast<const std::domain_error*>(&err)) {
        return 1;
    }
    return 3;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

RunSummary run_manifest(const RunManifest& manifest, std::ostream& log) {
    RunSummary summary;
    std::filesystem::create_directories(manifest.output_dir);

    json aggregate;
    aggregate["family"] = manifest.family.describe();
    json graph_ids = json::array();

    try {
        for (const GraphSource& source : manifest.graphs) {
            const auto started = Clock::now();
            const AttributionGraph g = materialize(source);
            GraphReport report = process_graph(g, source.id, manifest);

            write_file(manifest.output_dir / (source.id + ".json"), report.document.dump(2) + "\n");
            write_file(manifest.output_dir / ("curve_" + source.id + ".csv"),
                       curve_csv(report.curve));
            write_file(manifest.output_dir / ("bins_" + source.id + ".csv"),
                       bins_csv(report.bins));

            log << "graph " << source.id << ": |E|=" << g.edge_count()
                << " ir_c1=" << report.record.irs.consensus << " ("
                << format_number(ms_since(started)) << " ms)\n";

            graph_ids.push_back(source.id);
            summary.graphs.push_back(std::move(report.record));
        }
    } catch (const std::exception& err) {
        summary.exit_code = exit_code_for(err);
        summary.error = err.what();
        aggregate["status"] = "failed";
        aggregate["error"] = summary.error;
        aggregate["completed_graphs"] = std::move(graph_ids);
        write_file(manifest.output_dir / "report.json", aggregate.dump(2) + "\n");
        log << "run failed: " << summary.error << "\n";
        return summary;
    }

    std::vector<IrRecord> records;
    records.reserve(summary.graphs.size());
    double ir_sum = 0.0;
    int match_count = 0;
    double jaccard_sum = 0.0;
    int jaccard_count = 0;
    for (const GraphRunResult& r : summary.graphs) {
        records.push_back(r.irs);
        ir_sum += r.irs.consensus;
        if (r.match_index) ++match_count;
        if (r.mean_jaccard) {
            jaccard_sum += *r.mean_jaccard;
            ++jaccard_count;
        }
    }
    const double ir_mean = ir_sum / static_cast<double>(records.size());
    double variance = 0.0;
    for (const IrRecord& r : records) {
        variance += (r.consensus - ir_mean) * (r.consensus - ir_mean);
    }
    const double ir_sd =
        records.size() > 1 ? std::sqrt(variance / static_cast<double>(records.size() - 1)) : 0.0;
    const WinRates rates = win_rates(records);

    std::string model = summary.graphs.front().model;
    for (const GraphRunResult& r : summary.graphs) {
        if (r.model != model) {
            model = "mixed";
            break;
        }
    }

    aggregate["status"] = "ok";
    aggregate["graphs"] = std::move(graph_ids);
    aggregate["table"] = {
        {"model", model},
        {"graphs", records.size()},
        {"ir_c1_mean", ir_mean},
        {"ir_c1_sd", ir_sd},
        {"w_up", rates.vs_union_pruned.wins},
        {"w_up_ties", rates.vs_union_pruned.ties},
        {"w_rand", rates.vs_random.wins},
        {"w_rand_ties", rates.vs_random.ties},
        {"match", match_count},
        {"mean_jaccard", jaccard_count > 0 ? json(jaccard_sum / jaccard_count) : json(nullptr)}};
    write_file(manifest.output_dir / "report.json", aggregate.dump(2) + "\n");

    std::ostringstream csv;
    csv << "model,configs,graphs,ir_c1_mean,ir_c1_sd,w_up,w_rand,ties_up,ties_rand,match,"
           "mean_jaccard\n";
    csv << model << "," << manifest.family.describe() << "," << records.size() << ","
        << format_number(ir_mean) << "," << format_number(ir_sd) << ","
        << rates.vs_union_pruned.wins << "," << rates.vs_random.wins << ","
        << rates.vs_union_pruned.ties << "," << rates.vs_random.ties << "," << match_count << ","
        << (jaccard_count > 0 ? format_number(jaccard_sum / jaccard_count) : "") << "\n";
    write_file(manifest.output_dir / "aggregate.csv", csv.str());

    return summary;
}

BenchReport run_bench(std::size_t edges, int views, int repeats, std::ostream& log) {
    if (edges < 1) throw std::invalid_argument("bench: edges must be >= 1");
    if (views < 1) throw std::invalid_argument("bench: views must be >= 1");
    if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");

    SyntheticSpec spec;
    spec.layers = 6;
    spec.features_per_layer =
        std::clamp(static_cast<int>(std::sqrt(static_cast<double>(edges))), 4, 150);
    spec.logits = 8;
    spec.core_edges = static_cast<int>(edges / 20);
    spec.contingent_edges = static_cast<int>(edges / 5);
    spec.noise_edges = static_cast<int>(edges) - spec.core_edges - spec.contingent_edges;
    spec.seed = 4242;

    const AttributionGraph g = generate_synthetic(spec);
    const std::vector<PruningConfig> configs = jittered_family(0.75, 0.9, 0.15, views, 7);

    BenchReport report;
    report.requested_edges = edges;
    report.graph_edges = g.edge_count();
    report.views = views;
    report.repeats = repeats;

    std::vector<double> influence_ms, apply_ms, stability_ms, consensus_ms, ir_ms, pipeline_ms;
    for (int rep = 0; rep < repeats; ++rep) {
        const auto t0 = Clock::now();
        const InfluenceMap inf = compute_influence(g);
        const auto t1 = Clock::now();
        std::vector<View> view_list;
        view_list.reserve(configs.size());
        for (const PruningConfig& cfg : configs) {
            view_list.push_back(apply_config(g, inf, cfg));
        }
        const auto t2 = Clock::now();
        const StabilityReport stability = stability_scores(view_list);
        const auto t3 = Clock::now();
        const std::vector<EdgeId> c1 = consensus(stability, 1.0);
        const auto t4 = Clock::now();
        const double ir = influence_retained(g, c1);
        const auto t5 = Clock::now();
        (void)ir;

        const auto delta = [](Clock::time_point a, Clock::time_point b) {
            return std::chrono::duration<double, std::milli>(b - a).count();
        };
        influence_ms.push_back(delta(t0, t1));
        apply_ms.push_back(delta(t1, t2));
        stability_ms.push_back(delta(t2, t3));
        consensus_ms.push_back(delta(t3, t4));
        ir_ms.push_back(delta(t4, t5));
        pipeline_ms.push_back(delta(t0, t5));
        report.union_edges = stability.union_edges.size();
    }

    report.influence_ms = median(influence_ms);
    report.apply_all_ms = median(apply_ms);
    report.stability_ms = median(stability_ms);
    report.consensus_ms = median(consensus_ms);
    report.ir_ms = median(ir_ms);
    report.pipeline_ms = median(pipeline_ms);

    log << "bench: graph_edges=" << report.graph_edges << " union=" << report.union_edges
        << " B=" << views << " repeats=" << repeats << "\n"
        << "  influence      " << format_number(report.influence_ms) << " ms\n"
        << "  apply x" << views << "      " << format_number(report.apply_all_ms) << " ms\n"
        << "  stability      " << format_number(report.stability_ms) << " ms\n"
        << "  consensus      " << format_number(report.consensus_ms) << " ms\n"
        << "  ir             " << format_number(report.ir_ms) << " ms\n"
        << "  full pipeline  " << format_number(report.pipeline_ms) << " ms\n";

    return report;
}

} // namespace circons
