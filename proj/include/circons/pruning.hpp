// SPDX-License-Identifier: Apache-2.0
#pragma once

// Pruning configurations and views.
//
// A config keeps the minimal top-influence prefix reaching a cumulative
// fraction of the total, first over nodes (tokens and logits are exempt)
// and then over the induced edges. A keep fraction of exactly 1.0 retains
// every candidate, including zero-influence ones, so (1.0, 1.0) reproduces
// the full graph. Ties break on the canonical (id) order; edge influence is
// always the full-graph quantity, never recomputed after node pruning.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circons/graph.hpp"
#include "circons/influence.hpp"

namespace circons {

struct PruningConfig {
    double node_keep = 1.0; // in (0, 1]
    double edge_keep = 1.0; // in (0, 1]
    std::string id;
};

struct View {
    PruningConfig config;
    std::vector<NodeId> nodes; // sorted; exactly the endpoints of `edges`
    std::vector<EdgeId> edges; // sorted
    const AttributionGraph* graph = nullptr;
};

View apply_config(const AttributionGraph& g, const InfluenceMap& inf, const PruningConfig& cfg);

/// Cartesian product of the level lists, row-major, deterministic order.
std::vector<PruningConfig> grid_family(std::span<const double> node_levels,
                                       std::span<const double> edge_levels);

/// Crossed family: config i pairs node_levels[i] with edge_levels[k-1-i].
/// Both lists must be strictly ascending and of equal length.
std::vector<PruningConfig> non_nested_family(std::span<const double> node_levels,
                                             std::span<const double> edge_levels);

/// Exchangeable family: base thresholds plus independent uniform jitter in
/// [-jitter, +jitter] per component, clamped to (0, 1].
std::vector<PruningConfig> jittered_family(double base_node_keep, double base_edge_keep,
                                           double jitter, int count, std::uint64_t seed);

constexpr double kDefaultGridNodeLevels[] = {0.5, 0.6, 0.7, 0.8, 0.9};
constexpr double kDefaultGridEdgeLevels[] = {0.80, 0.85, 0.90, 0.95, 0.99};
constexpr double kDefaultCrossedNodeLevels[] = {0.50, 0.55, 0.60, 0.65, 0.70,
                                                0.75, 0.80, 0.85, 0.90};
constexpr double kDefaultCrossedEdgeLevels[] = {0.800, 0.825, 0.850, 0.875, 0.900,
                                                0.925, 0.950, 0.975, 0.990};

struct NestedChainCheck {
    bool nested = false;
    std::vector<std::size_t> order;                        // witness chain when nested
    std::pair<std::size_t, std::size_t> incomparable{0, 0}; // witness pair otherwise
};

/// True iff the views' edge sets can be ordered into a subset chain.
NestedChainCheck is_nested_chain(std::span<const View> views);

} // namespace circons
