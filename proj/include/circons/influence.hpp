// SPDX-License-Identifier: Apache-2.0
#pragma once

// Influence propagation toward logits and the derived metrics.
//
// Incoming weights are normalized per target node,
//   A(u,v) = |w(u,v)| / sum over (x,v) of |w(x,v)|,
// and node influence solves, in reverse topological order,
//   influence(v) = seed(v) + sum over (v,x) of A(v,x) * influence(x)
// with seed 1 at each logit (overridable) and 0 elsewhere. Edge influence is
// A(u,v) * influence(v). Influence retained is the separate raw quantity
// sum of |w| over a subset divided by the sum over all edges; the two are
// never interchanged.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "circons/graph.hpp"

namespace circons {

struct InfluenceMap {
    std::vector<double> node_influence; // by node index
    std::vector<double> edge_influence; // by edge index
    double total_edge_influence = 0.0;

    double node_influence_of(const AttributionGraph& g, std::string_view id) const;
    double edge_influence_of(const AttributionGraph& g, std::string_view src,
                             std::string_view dst) const;
};

/// Uniform seed 1.0 at every logit.
InfluenceMap compute_influence(const AttributionGraph& g);

/// Explicit per-logit seeds; logits absent from the map default to 1.0.
/// Keys that are not logit node ids are rejected.
InfluenceMap compute_influence(const AttributionGraph& g,
                               const std::map<std::string, double>& logit_seeds);

/// Fraction of total absolute edge weight captured by `subset` (in [0,1]).
/// Throws std::domain_error when the graph has no edges.
double influence_retained(const AttributionGraph& g, std::span<const EdgeId> subset);

struct LogitDistribution {
    std::map<std::string, double> probs; // logit id -> probability, sums to 1
};

/// Per-logit share of the subset's influence flow, epsilon-smoothed and
/// normalized. Flow toward each logit is obtained by re-running propagation
/// with a unit seed at that logit only.
LogitDistribution logit_distribution(const AttributionGraph& g, std::span<const EdgeId> subset,
                                     double epsilon = 1e-9);

/// Discrete KL divergence sum p ln(p/q); terms with p = 0 contribute 0.
/// Requires identical supports and strictly positive q.
double kl_divergence(const LogitDistribution& p, const LogitDistribution& q);

} // namespace circons
