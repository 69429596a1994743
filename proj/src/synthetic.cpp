// SPDX-License-Identifier: Apache-2.0
#include "circons/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "circons/rng.hpp"

namespace circons {

namespace {

std::string padded(int value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) {
        s.insert(s.begin(), '0');
    }
    return s;
}

int digits(int count) {
    int width = 1;
    for (int v = count - 1; v >= 10; v /= 10) {
        ++width;
    }
    return width;
}

struct Topology {
    int tokens = 0;
    int layers = 0;
    int features = 0;
    int logits = 0;

    int total_nodes() const { return tokens + layers * features + logits; }

    // Global node ordinals, layer-major.
    int token_node(int i) const { return i; }
    int feature_node(int layer, int j) const { return tokens + (layer - 1) * features + j; }
    int logit_node(int i) const { return tokens + layers * features + i; }

    int layer_of(int node) const {
        if (node < tokens) return 0;
        if (node >= tokens + layers * features) return layers + 1;
        return 1 + (node - tokens) / features;
    }
};

} // namespace

AttributionGraph generate_synthetic(const SyntheticSpec& spec) {
    if (spec.layers < 2) throw ValidationError("synthetic spec: layers must be >= 2");
    if (spec.features_per_layer < 1) {
        throw ValidationError("synthetic spec: features_per_layer must be >= 1");
    }
    if (spec.logits < 1) throw ValidationError("synthetic spec: logits must be >= 1");
    if (spec.core_edges < 0 || spec.contingent_edges < 0 || spec.noise_edges < 0) {
        throw ValidationError("synthetic spec: edge counts must be >= 0");
    }
    if (!(spec.core_weight_scale > 0.0) || !std::isfinite(spec.core_weight_scale) ||
        !(spec.noise_weight_scale > 0.0) || !std::isfinite(spec.noise_weight_scale)) {
        throw ValidationError("synthetic spec: weight scales must be positive finite");
    }

    Topology topo;
    topo.tokens = std::max(1, spec.features_per_layer / 2);
    topo.layers = spec.layers;
    topo.features = spec.features_per_layer;
    topo.logits = spec.logits;

    const long long f = topo.features;
    const long long path_slots = topo.tokens * f + (topo.layers - 1) * f * f + f * topo.logits;
    const long long planted = static_cast<long long>(spec.core_edges) + spec.contingent_edges;
    if (planted > path_slots) {
        throw ValidationError("synthetic spec infeasible: core+contingent exceeds path capacity");
    }

    // All (u, v) pairs with layer(u) < layer(v) are legal slots.
    std::vector<int> layer_size{topo.tokens};
    for (int l = 0; l < topo.layers; ++l) layer_size.push_back(topo.features);
    layer_size.push_back(topo.logits);
    long long total_slots = 0;
    long long suffix = 0;
    for (std::size_t l = layer_size.size(); l-- > 0;) {
        total_slots += static_cast<long long>(layer_size[l]) * suffix;
        suffix += layer_size[l];
    }
    if (planted + spec.noise_edges > total_slots) {
        throw ValidationError("synthetic spec infeasible: requested edges exceed topology capacity");
    }

    const int n = topo.total_nodes();
    const int token_w = digits(topo.tokens);
    const int layer_w = digits(topo.layers + 1);
    const int feat_w = digits(topo.features);
    const int logit_w = digits(topo.logits);

    std::vector<std::string> id_of(n);
    for (int i = 0; i < topo.tokens; ++i) {
        id_of[topo.token_node(i)] = "tok_" + padded(i, token_w);
    }
    for (int l = 1; l <= topo.layers; ++l) {
        for (int j = 0; j < topo.features; ++j) {
            id_of[topo.feature_node(l, j)] = "f" + padded(l, layer_w) + "_" + padded(j, feat_w);
        }
    }
    for (int i = 0; i < topo.logits; ++i) {
        id_of[topo.logit_node(i)] = "logit_" + padded(i, logit_w);
    }

    rng::Engine eng(spec.seed);
    std::set<std::pair<int, int>> used;
    std::vector<DocEdge> edges;
    edges.reserve(static_cast<std::size_t>(planted + spec.noise_edges));
    std::vector<int> node_tier(n, 0); // 0 none, 1 contingent, 2 core

    const auto draw_weight = [&eng](double scale) {
        const double magnitude = scale * (0.75 + 0.5 * rng::uniform01(eng));
        const double sign = rng::uniform01(eng) < 0.85 ? 1.0 : -1.0;
        return sign * magnitude;
    };

    // Plants edges along random token -> f_1 -> ... -> f_L -> logit routes,
    // proposing the logit-side edges first so a truncated budget still leaves
    // path suffixes anchored at a logit.
    const auto plant_paths = [&](int budget, double scale, const char* tier, int tier_rank) {
        int placed = 0;
        long long attempts = 0;
        const long long attempt_limit = 400 + 200LL * budget;
        while (placed < budget) {
            if (++attempts > attempt_limit) {
                throw ValidationError("synthetic spec infeasible: could not place planted paths");
            }
            const int token = static_cast<int>(rng::below(eng, topo.tokens));
            std::vector<int> route{topo.token_node(token)};
            for (int l = 1; l <= topo.layers; ++l) {
                route.push_back(topo.feature_node(l, static_cast<int>(rng::below(eng, topo.features))));
            }
            route.push_back(topo.logit_node(static_cast<int>(rng::below(eng, topo.logits))));

            for (std::size_t hop = route.size() - 1; hop >= 1 && placed < budget; --hop) {
                const int u = route[hop - 1];
                const int v = route[hop];
                if (!used.emplace(u, v).second) continue;
                DocEdge edge;
                edge.src = id_of[u];
                edge.dst = id_of[v];
                edge.weight = draw_weight(scale);
                edge.planted_tier = tier;
                edges.push_back(std::move(edge));
                ++placed;
                for (std::size_t i = 1; i + 1 < route.size(); ++i) {
                    node_tier[route[i]] = std::max(node_tier[route[i]], tier_rank);
                }
            }
        }
    };

    plant_paths(spec.core_edges, spec.core_weight_scale, "core", 2);
    const double contingent_scale = std::sqrt(spec.core_weight_scale * spec.noise_weight_scale);
    plant_paths(spec.contingent_edges, contingent_scale, "contingent", 1);

    // Noise: uniform draw over the remaining legal slots.
    std::vector<std::pair<int, int>> free_slots;
    free_slots.reserve(static_cast<std::size_t>(total_slots));
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (topo.layer_of(u) < topo.layer_of(v) && !used.count({u, v})) {
                free_slots.emplace_back(u, v);
            }
        }
    }
    if (static_cast<long long>(free_slots.size()) < spec.noise_edges) {
        throw ValidationError("synthetic spec infeasible: not enough free slots for noise edges");
    }
    rng::shuffle(free_slots, eng);
    for (int i = 0; i < spec.noise_edges; ++i) {
        const auto [u, v] = free_slots[i];
        DocEdge edge;
        edge.src = id_of[u];
        edge.dst = id_of[v];
        edge.weight = draw_weight(spec.noise_weight_scale);
        edge.planted_tier = "noise";
        edges.push_back(std::move(edge));
    }

    GraphDocument doc;
    std::ostringstream model;
    model << "syn-L" << topo.layers << "-F" << topo.features << "-K" << topo.logits << "-seed"
          << spec.seed;
    doc.meta.prompt = "synthetic planted-structure graph";
    doc.meta.target_token = id_of[topo.logit_node(0)];
    doc.meta.model = model.str();

    doc.nodes.reserve(n);
    for (int i = 0; i < topo.tokens; ++i) {
        doc.nodes.push_back(DocNode{id_of[topo.token_node(i)], "token", 0, i, std::nullopt,
                                    std::nullopt});
    }
    for (int l = 1; l <= topo.layers; ++l) {
        for (int j = 0; j < topo.features; ++j) {
            const int node = topo.feature_node(l, j);
            std::optional<std::string> tier;
            if (node_tier[node] == 2) tier = "core";
            else if (node_tier[node] == 1) tier = "contingent";
            doc.nodes.push_back(DocNode{id_of[node], "feature", l, j, std::nullopt, tier});
        }
    }
    for (int i = 0; i < topo.logits; ++i) {
        doc.nodes.push_back(DocNode{id_of[topo.logit_node(i)], "logit", topo.layers + 1, i,
                                    std::nullopt, std::nullopt});
    }
    doc.edges = std::move(edges);

    return AttributionGraph::from_document(doc);
}

std::vector<EdgeId> planted_edges(const AttributionGraph& g, std::string_view tier) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& tag = g.edges()[e].planted_tier;
        if (tag && *tag == tier) {
            out.push_back(e);
        }
    }
    return out;
}

} // namespace circons
