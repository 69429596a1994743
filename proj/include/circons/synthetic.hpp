// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic attribution graphs with planted structure: a layered token ->
// features -> logit DAG where `core` edges form heavy paths to logits,
// `contingent` edges form parallel medium-weight paths, and `noise` edges
// are low-weight cross links. Each planted edge carries a `planted_tier`
// tag that the pruning/ensemble math never reads; evaluation uses it as
// ground truth.

#include <cstdint>
#include <string_view>
#include <vector>

#include "circons/graph.hpp"

namespace circons {

struct SyntheticSpec {
    int layers = 4;             // feature layers between tokens and logits
    int features_per_layer = 16;
    int logits = 4;
    int core_edges = 30;
    int contingent_edges = 160;
    int noise_edges = 400;
    double core_weight_scale = 1.0;
    double noise_weight_scale = 0.05;
    std::uint64_t seed = 1;
};

/// Deterministic function of the spec (seed included). Throws
/// ValidationError on invalid or infeasible specs.
AttributionGraph generate_synthetic(const SyntheticSpec& spec);

/// Edge indices whose planted_tier equals `tier`.
std::vector<EdgeId> planted_edges(const AttributionGraph& g, std::string_view tier);

} // namespace circons
