// SPDX-License-Identifier: Apache-2.0
#pragma once

// Pipeline orchestration: influence -> B views -> stability -> consensus ->
// taxonomy -> (optional boosting) -> baselines and metrics, with per-graph
// JSON reports, plot-ready CSV tables, and a Table-style aggregate. Report
// files contain only seed-deterministic quantities; wall-clock timings go to
// the log stream so identical manifests produce byte-identical reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "circons/manifest.hpp"

namespace circons {

struct GraphRunResult {
    std::string id;
    std::string model;
    IrRecord irs;
    std::optional<std::size_t> match_index;
    std::optional<double> mean_jaccard;
};

struct RunSummary {
    int exit_code = 0;
    std::string error;
    std::vector<GraphRunResult> graphs;
};

/// Executes the manifest and writes reports under manifest.output_dir.
/// On a per-graph failure, flushes partial results plus a failure marker in
/// report.json and returns the mapped exit code (1 validation, 2 I/O,
/// 3 internal).
RunSummary run_manifest(const RunManifest& manifest, std::ostream& log);

struct BenchReport {
    std::size_t requested_edges = 0;
    std::size_t graph_edges = 0;
    std::size_t union_edges = 0;
    int views = 0;
    int repeats = 0;
    // medians over repeats, milliseconds
    double influence_ms = 0.0;
    double apply_all_ms = 0.0;
    double stability_ms = 0.0;
    double consensus_ms = 0.0;
    double ir_ms = 0.0;
    double pipeline_ms = 0.0;
};

/// Synthesizes a graph of roughly `edges` edges and times each pipeline
/// stage separately, reporting medians over `repeats`.
BenchReport run_bench(std::size_t edges, int views, int repeats, std::ostream& log);

} // namespace circons
