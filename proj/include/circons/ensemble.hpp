// SPDX-License-Identifier: Apache-2.0
#pragma once

// Stability scores over a family of views, consensus circuits, the
// core/contingent/noise taxonomy, and the stability diagnostics (pairwise
// Jaccard, leave-one-out retention, config bootstrap).
//
// Scores are stored as exact integer counts k out of B so reports round-trip
// without loss; s(e) = k / B.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "circons/graph.hpp"
#include "circons/influence.hpp"
#include "circons/pruning.hpp"

namespace circons {

struct StabilityReport {
    int views = 0;                     // B
    std::vector<EdgeId> union_edges;   // sorted
    std::vector<int> counts;           // aligned with union_edges, each in [1, B]
    std::vector<std::size_t> view_sizes;
    const AttributionGraph* graph = nullptr;

    double score_at(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(views);
    }
    /// Score of an edge by graph index; nullopt when outside the union.
    std::optional<double> score_of(EdgeId edge) const;
};

struct Taxonomy {
    std::vector<EdgeId> core;       // s(e) = 1
    std::vector<EdgeId> contingent; // boundary <= s(e) < 1
    std::vector<EdgeId> noise;      // s(e) < boundary
};

struct BootstrapSummary {
    int samples = 0;
    double size_point = 0.0;
    double ir_point = 0.0;
    std::pair<double, double> size_ci{0.0, 0.0};
    std::pair<double, double> ir_ci{0.0, 0.0};
};

/// Exact selection counts over the views. Throws on an empty list or views
/// from different graphs.
StabilityReport stability_scores(std::span<const View> views);

/// Edges with s(e) >= tau; tau must lie in (0, 1].
std::vector<EdgeId> consensus(const StabilityReport& report, double tau);

/// Partition of the union at s = 1 / [boundary, 1) / below boundary.
Taxonomy classify(const StabilityReport& report, double contingent_boundary = 0.5);

/// Index of the first view whose edge set equals the consensus exactly.
std::optional<std::size_t> match_single_config(std::span<const EdgeId> consensus_edges,
                                               std::span<const View> views);

struct JaccardResult {
    double mean = 0.0;
    std::vector<std::vector<double>> matrix; // NaN marks skipped (both-empty) pairs
    int skipped_pairs = 0;
};

JaccardResult pairwise_jaccard(std::span<const View> views);

struct LeaveOneOutRow {
    double score_bin = 0.0; // k / (B-1)
    double retention = 0.0; // mean held-out presence fraction over folds
    std::size_t edge_count = 0;
};

/// Holds out each view in turn, re-scores the rest, and reports per-bin
/// held-out retention averaged over folds.
std::vector<LeaveOneOutRow> leave_one_out(std::span<const View> views);

/// Resamples the B views with replacement and reports 2.5/97.5 percentile
/// intervals of |C_1| and IR(C_1). Deterministic given the seed.
BootstrapSummary bootstrap_consensus(std::span<const View> views, const AttributionGraph& g,
                                     int n_boot, std::uint64_t seed);

nlohmann::json stability_report_to_json(const StabilityReport& report);
StabilityReport stability_report_from_json(const nlohmann::json& doc, const AttributionGraph& g);
nlohmann::json taxonomy_to_json(const Taxonomy& taxonomy, const AttributionGraph& g);

} // namespace circons
