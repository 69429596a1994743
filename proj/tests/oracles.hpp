// SPDX-License-Identifier: Apache-2.0
#pragma once

// Test-side oracles, deliberately independent of the library internals:
// influence via explicit path enumeration, stability via a naive double
// loop, consensus via std::set algebra.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "circons/graph.hpp"
#include "circons/pruning.hpp"
#include "circons/rng.hpp"

namespace oracles {

using circons::AttributionGraph;
using circons::EdgeId;
using circons::NodeId;

// Normalized incoming share of each edge, recomputed from scratch.
inline std::vector<double> edge_shares(const AttributionGraph& g) {
    std::vector<double> in_sum(g.node_count(), 0.0);
    for (const circons::Edge& e : g.edges()) {
        in_sum[e.dst] += std::abs(e.weight);
    }
    std::vector<double> share(g.edge_count(), 0.0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        share[e] = std::abs(g.edges()[e].weight) / in_sum[g.edges()[e].dst];
    }
    return share;
}

// Sum over all directed paths node -> logit of the product of edge shares,
// where the empty path contributes the node's own seed. Exponential-time by
// construction; only for small graphs.
inline double path_sum_node_influence(const AttributionGraph& g, NodeId node,
                                      const std::vector<double>& seed,
                                      const std::vector<double>& share) {
    double total = seed[node];
    for (EdgeId e : g.out_edges()[node]) {
        total += share[e] * path_sum_node_influence(g, g.edges()[e].dst, seed, share);
    }
    return total;
}

inline double path_sum_edge_influence(const AttributionGraph& g, EdgeId edge,
                                      const std::vector<double>& seed,
                                      const std::vector<double>& share) {
    return share[edge] * path_sum_node_influence(g, g.edges()[edge].dst, seed, share);
}

// Naive recount of selection frequencies.
inline std::map<EdgeId, int> recount_scores(const std::vector<circons::View>& views) {
    std::map<EdgeId, int> counts;
    std::set<EdgeId> universe;
    for (const circons::View& v : views) {
        universe.insert(v.edges.begin(), v.edges.end());
    }
    for (EdgeId e : universe) {
        int k = 0;
        for (const circons::View& v : views) {
            for (EdgeId cand : v.edges) {
                if (cand == e) {
                    ++k;
                    break;
                }
            }
        }
        counts[e] = k;
    }
    return counts;
}

inline std::set<EdgeId> intersect_views(const std::vector<circons::View>& views) {
    std::set<EdgeId> acc(views.front().edges.begin(), views.front().edges.end());
    for (std::size_t i = 1; i < views.size(); ++i) {
        std::set<EdgeId> next(views[i].edges.begin(), views[i].edges.end());
        std::set<EdgeId> merged;
        for (EdgeId e : acc) {
            if (next.count(e)) merged.insert(e);
        }
        acc = std::move(merged);
    }
    return acc;
}

// Random layered DAG builder for oracle comparisons: node 0..n-1 in
// topological order, first nodes tokens, last nodes logits, edges forward
// only with random density.
inline AttributionGraph random_dag(int n, double density, std::uint64_t seed) {
    circons::rng::Engine eng(seed);
    circons::GraphDocument doc;
    doc.meta.model = "random-dag";
    const int tokens = 1 + static_cast<int>(circons::rng::below(eng, 2));
    const int logits = 1 + static_cast<int>(circons::rng::below(eng, 2));
    for (int i = 0; i < n; ++i) {
        circons::DocNode node;
        node.id = "n" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        node.layer = i;
        node.position = 0;
        if (i < tokens) node.kind = "token";
        else if (i >= n - logits) node.kind = "logit";
        else node.kind = circons::rng::uniform01(eng) < 0.15 ? "error" : "feature";
        doc.nodes.push_back(std::move(node));
    }
    for (int u = 0; u < n; ++u) {
        if (doc.nodes[u].kind == "logit") continue;
        for (int v = u + 1; v < n; ++v) {
            if (doc.nodes[v].kind == "token") continue;
            if (circons::rng::uniform01(eng) < density) {
                circons::DocEdge edge;
                edge.src = doc.nodes[u].id;
                edge.dst = doc.nodes[v].id;
                const double sign = circons::rng::uniform01(eng) < 0.5 ? 1.0 : -1.0;
                edge.weight = sign * (0.1 + 2.0 * circons::rng::uniform01(eng));
                doc.edges.push_back(std::move(edge));
            }
        }
    }
    // guarantee at least one edge into a logit so influence is nontrivial
    if (doc.edges.empty() && n >= 2) {
        circons::DocEdge edge;
        edge.src = doc.nodes[0].id;
        edge.dst = doc.nodes[n - 1].id;
        edge.weight = 1.0;
        doc.edges.push_back(std::move(edge));
    }
    return AttributionGraph::from_document(doc);
}

// View over explicit edge indices; bypasses apply_config on purpose.
inline circons::View make_view(const AttributionGraph& g, std::vector<EdgeId> edges,
                               const std::string& id = "manual") {
    std::sort(edges.begin(), edges.end());
    circons::View view;
    view.config = circons::PruningConfig{1.0, 1.0, id};
    view.edges = std::move(edges);
    view.graph = &g;
    std::set<NodeId> nodes;
    for (EdgeId e : view.edges) {
        nodes.insert(g.edges()[e].src);
        nodes.insert(g.edges()[e].dst);
    }
    view.nodes.assign(nodes.begin(), nodes.end());
    return view;
}

} // namespace oracles
