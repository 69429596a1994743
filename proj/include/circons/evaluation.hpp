// SPDX-License-Identifier: Apache-2.0
#pragma once

// Baselines at matched edge budgets, win-rate bookkeeping, alternative
// aggregation rules, and the stability diagnostics tables (score-vs-influence
// bins, stability-coverage curve).

#include <cstdint>
#include <span>
#include <vector>

#include "circons/ensemble.hpp"
#include "circons/graph.hpp"
#include "circons/influence.hpp"

namespace circons {

enum class BaselineRank { influence, abs_weight };

/// Top-k union edges by propagated edge influence (or raw |w|), lexicographic
/// tie-break. Throws when k exceeds the union size.
std::vector<EdgeId> union_pruned_baseline(const StabilityReport& report, const InfluenceMap& inf,
                                          const AttributionGraph& g, std::size_t k,
                                          BaselineRank rank = BaselineRank::influence);

/// `seeds` uniform k-subsets of the union, without replacement within each
/// draw. Deterministic given seed0.
std::vector<std::vector<EdgeId>> random_baseline(const StabilityReport& report, std::size_t k,
                                                 int seeds, std::uint64_t seed0);

struct IrRecord {
    double consensus = 0.0;
    double union_pruned = 0.0;
    double random_mean = 0.0;
};

struct WinCounts {
    int wins = 0;
    int ties = 0;
    int losses = 0;
};

struct WinRates {
    WinCounts vs_union_pruned;
    WinCounts vs_random;
    int total = 0;
};

/// Strict comparison: a win requires IR(consensus) > IR(baseline); exact
/// ties are counted separately.
WinRates win_rates(std::span<const IrRecord> records);

struct StabilityBin {
    double score = 0.0;
    double mean_edge_influence = 0.0;
    std::size_t edge_count = 0;
};

/// Mean edge influence per occupied stability bin, ascending in score.
std::vector<StabilityBin> stability_influence_bins(const StabilityReport& report,
                                                   const InfluenceMap& inf);

struct CurvePoint {
    double tau = 0.0;
    std::size_t size = 0;
    double ir = 0.0;
};

/// One point per attainable tau = k/B, ascending.
std::vector<CurvePoint> coverage_curve(const StabilityReport& report, const AttributionGraph& g);

/// Top-k union edges by s(e) * influence(e), lexicographic tie-break.
std::vector<EdgeId> aggregate_stability_times_influence(const StabilityReport& report,
                                                        const InfluenceMap& inf, std::size_t k);

/// Largest attainable tau with IR(C_tau) >= max_b IR(E^(b)) - margin.
double tau_adaptive(const StabilityReport& report, const AttributionGraph& g,
                    std::span<const View> views, double margin);

struct OracleBest {
    std::size_t index = 0;
    double ir = 0.0;
};

/// Post-hoc best single view by IR; first index on ties.
OracleBest oracle_best_config(std::span<const View> views, const AttributionGraph& g);

} // namespace circons
