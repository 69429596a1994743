// SPDX-License-Identifier: Apache-2.0
#include "circons/influence.hpp"

#include <cmath>
#include <stdexcept>

namespace circons {

namespace {

InfluenceMap propagate(const AttributionGraph& g, const std::vector<double>& seed) {
    InfluenceMap out;
    out.node_influence.assign(g.node_count(), 0.0);
    out.edge_influence.assign(g.edge_count(), 0.0);

    std::vector<double> in_weight(g.node_count(), 0.0);
    for (const Edge& e : g.edges()) {
        in_weight[e.dst] += std::abs(e.weight);
    }

    const auto& topo = g.topo_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const NodeId v = *it;
        double acc = seed[v];
        for (EdgeId e : g.out_edges()[v]) {
            const NodeId x = g.edges()[e].dst;
            const double share = std::abs(g.edges()[e].weight) / in_weight[x];
            acc += share * out.node_influence[x];
        }
        out.node_influence[v] = acc;
    }

    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const NodeId dst = g.edges()[e].dst;
        const double share = std::abs(g.edges()[e].weight) / in_weight[dst];
        out.edge_influence[e] = share * out.node_influence[dst];
        out.total_edge_influence += out.edge_influence[e];
    }

    return out;
}

} // namespace

double InfluenceMap::node_influence_of(const AttributionGraph& g, std::string_view id) const {
    const auto idx = g.node_index(id);
    if (!idx) throw std::invalid_argument("unknown node id: " + std::string(id));
    return node_influence[*idx];
}

double InfluenceMap::edge_influence_of(const AttributionGraph& g, std::string_view src,
                                       std::string_view dst) const {
    const auto idx = g.edge_index(src, dst);
    if (!idx) {
        throw std::invalid_argument("unknown edge: " + std::string(src) + " -> " +
                                    std::string(dst));
    }
    return edge_influence[*idx];
}

InfluenceMap compute_influence(const AttributionGraph& g) {
    return compute_influence(g, {});
}

InfluenceMap compute_influence(const AttributionGraph& g,
                               const std::map<std::string, double>& logit_seeds) {
    std::vector<double> seed(g.node_count(), 0.0);
    for (NodeId v : g.logit_nodes()) {
        seed[v] = 1.0;
    }
    for (const auto& [id, value] : logit_seeds) {
        const auto idx = g.node_index(id);
        if (!idx || g.nodes()[*idx].kind != NodeKind::logit) {
            throw std::invalid_argument("logit seed for non-logit node: " + id);
        }
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw std::invalid_argument("logit seed must be finite and >= 0: " + id);
        }
        seed[*idx] = value;
    }
    return propagate(g, seed);
}

double influence_retained(const AttributionGraph& g, std::span<const EdgeId> subset) {
    double total = 0.0;
    for (const Edge& e : g.edges()) {
        total += std::abs(e.weight);
    }
    if (total == 0.0) {
        throw std::domain_error("influence retained undefined: graph has no edges");
    }
    double kept = 0.0;
    for (EdgeId e : subset) {
        if (e >= g.edge_count()) {
            throw std::invalid_argument("edge index out of range");
        }
        kept += std::abs(g.edges()[e].weight);
    }
    return kept / total;
}

LogitDistribution logit_distribution(const AttributionGraph& g, std::span<const EdgeId> subset,
                                     double epsilon) {
    if (g.logit_nodes().empty()) {
        throw std::invalid_argument("graph has no logit nodes");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    for (EdgeId e : subset) {
        if (e >= g.edge_count()) {
            throw std::invalid_argument("edge index out of range");
        }
    }

    LogitDistribution dist;
    double total = 0.0;
    std::vector<double> seed(g.node_count(), 0.0);
    for (NodeId logit : g.logit_nodes()) {
        seed[logit] = 1.0;
        const InfluenceMap flow = propagate(g, seed);
        seed[logit] = 0.0;

        double mass = epsilon;
        for (EdgeId e : subset) {
            mass += flow.edge_influence[e];
        }
        dist.probs.emplace(g.nodes()[logit].id, mass);
        total += mass;
    }
    for (auto& [id, p] : dist.probs) {
        p /= total;
    }
    return dist;
}

double kl_divergence(const LogitDistribution& p, const LogitDistribution& q) {
    if (p.probs.size() != q.probs.size()) {
        throw std::invalid_argument("KL divergence: mismatched supports");
    }
    double sum = 0.0;
    auto qit = q.probs.begin();
    for (const auto& [id, pv] : p.probs) {
        if (qit->first != id) {
            throw std::invalid_argument("KL divergence: mismatched supports");
        }
        const double qv = qit->second;
        ++qit;
        if (pv == 0.0) continue;
        if (!(qv > 0.0)) {
            throw std::invalid_argument("KL divergence: zero mass in q (smoothing required)");
        }
        sum += pv * std::log(pv / qv);
    }
    // Nonnegative in exact arithmetic; clamp round-off residue.
    return std::max(sum, 0.0);
}

} // namespace circons
