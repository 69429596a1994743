// SPDX-License-Identifier: Apache-2.0
#pragma once

// Residual boosting: remove the strict-consensus edges, recompute influence
// on what is left, and pick up the top-alpha fraction of the residual as a
// second circuit C2. One round only; removed edges cannot re-enter.

#include <span>
#include <vector>

#include "circons/graph.hpp"
#include "circons/influence.hpp"

namespace circons {

struct BoostResult {
    std::vector<EdgeId> c1;      // input circuit (indices into the full graph)
    std::vector<EdgeId> c2;      // residual circuit, disjoint from c1
    std::vector<EdgeId> boosted; // c1 union c2
    double alpha = 0.0;
    double ir_c1 = 0.0;
    double ir_boosted = 0.0;
};

/// Graph with the c1 edges removed; all nodes and other edges intact.
AttributionGraph residual_graph(const AttributionGraph& g, std::span<const EdgeId> c1);

/// Builds C2 from the residual graph (minimal prefix of residual edges by
/// residual influence reaching alpha of the residual total; alpha == 1
/// takes the whole residual). IR values are against the full graph.
BoostResult boost(const AttributionGraph& g, std::span<const EdgeId> c1, double alpha);

/// Keeps the minimal prefix of `boosted` (ranked by full-graph edge
/// influence) reaching edge_keep of the boosted set's influence mass.
std::vector<EdgeId> post_prune(const AttributionGraph& g, const InfluenceMap& inf,
                               std::span<const EdgeId> boosted, double edge_keep);

} // namespace circons
