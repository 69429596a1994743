// SPDX-License-Identifier: Apache-2.0
#include "circons/boosting.hpp"

#include <algorithm>
#include <stdexcept>

namespace circons {

namespace {

std::vector<char> membership(const AttributionGraph& g, std::span<const EdgeId> edges) {
    std::vector<char> in(g.edge_count(), 0);
    for (EdgeId e : edges) {
        if (e >= g.edge_count()) {
            throw std::invalid_argument("edge index out of range");
        }
        in[e] = 1;
    }
    return in;
}

// Minimal prefix of (already influence-descending) `ranked` reaching
// keep * total; keep == 1.0 takes everything.
std::vector<EdgeId> prefix_by_mass(const std::vector<EdgeId>& ranked,
                                   const std::vector<double>& influence, double keep) {
    if (keep == 1.0) return ranked;
    double total = 0.0;
    for (EdgeId e : ranked) total += influence[e];
    const double target = keep * total;
    std::vector<EdgeId> kept;
    double cum = 0.0;
    for (EdgeId e : ranked) {
        if (cum >= target) break;
        kept.push_back(e);
        cum += influence[e];
    }
    return kept;
}

} // namespace

AttributionGraph residual_graph(const AttributionGraph& g, std::span<const EdgeId> c1) {
    const std::vector<char> removed = membership(g, c1);
    GraphDocument doc = g.to_document();
    std::vector<DocEdge> kept;
    kept.reserve(doc.edges.size());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!removed[e]) {
            kept.push_back(std::move(doc.edges[e]));
        }
    }
    doc.edges = std::move(kept);
    return AttributionGraph::from_document(doc);
}

BoostResult boost(const AttributionGraph& g, std::span<const EdgeId> c1, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1]");
    }

    BoostResult result;
    result.alpha = alpha;
    result.c1.assign(c1.begin(), c1.end());
    std::sort(result.c1.begin(), result.c1.end());
    result.ir_c1 = influence_retained(g, result.c1);

    // Residual edge j maps back to the j-th surviving full-graph index:
    // removal preserves the canonical (src, dst) order.
    const std::vector<char> removed = membership(g, result.c1);
    std::vector<EdgeId> residual_to_full;
    residual_to_full.reserve(g.edge_count() - result.c1.size());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!removed[e]) residual_to_full.push_back(e);
    }

    if (!residual_to_full.empty()) {
        const AttributionGraph residual = residual_graph(g, result.c1);
        const InfluenceMap res_inf = compute_influence(residual);

        std::vector<EdgeId> ranked(residual.edge_count());
        for (EdgeId e = 0; e < residual.edge_count(); ++e) ranked[e] = e;
        std::sort(ranked.begin(), ranked.end(), [&res_inf](EdgeId a, EdgeId b) {
            if (res_inf.edge_influence[a] != res_inf.edge_influence[b]) {
                return res_inf.edge_influence[a] > res_inf.edge_influence[b];
            }
            return a < b;
        });

        for (EdgeId res_edge : prefix_by_mass(ranked, res_inf.edge_influence, alpha)) {
            result.c2.push_back(residual_to_full[res_edge]);
        }
        std::sort(result.c2.begin(), result.c2.end());
    }

    result.boosted.resize(result.c1.size() + result.c2.size());
    std::merge(result.c1.begin(), result.c1.end(), result.c2.begin(), result.c2.end(),
               result.boosted.begin());
    result.ir_boosted = influence_retained(g, result.boosted);
    return result;
}

std::vector<EdgeId> post_prune(const AttributionGraph& g, const InfluenceMap& inf,
                               std::span<const EdgeId> boosted, double edge_keep) {
    if (!(edge_keep > 0.0) || edge_keep > 1.0) {
        throw std::invalid_argument("edge_keep must lie in (0, 1]");
    }
    membership(g, boosted); // range check

    std::vector<EdgeId> ranked(boosted.begin(), boosted.end());
    std::sort(ranked.begin(), ranked.end(), [&inf](EdgeId a, EdgeId b) {
        if (inf.edge_influence[a] != inf.edge_influence[b]) {
            return inf.edge_influence[a] > inf.edge_influence[b];
        }
        return a < b;
    });

    std::vector<EdgeId> kept = prefix_by_mass(ranked, inf.edge_influence, edge_keep);
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace circons
