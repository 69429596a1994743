// SPDX-License-Identifier: Apache-2.0
#include "circons/pruning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "circons/rng.hpp"

namespace circons {

namespace {

void check_fraction(double value, const char* what) {
    if (!(value > 0.0) || value > 1.0) {
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
    }
}

std::string format_fraction(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general);
    return std::string(buf, res.ptr);
}

// Minimal prefix of `ranked` (already sorted by influence descending) whose
// cumulative influence reaches keep * total. keep == 1.0 keeps everything.
template <typename Id>
std::vector<Id> keep_prefix(const std::vector<Id>& ranked, const std::vector<double>& influence,
                            double keep) {
    if (keep == 1.0) {
        return ranked;
    }
    double total = 0.0;
    for (Id item : ranked) {
        total += influence[item];
    }
    const double target = keep * total;
    std::vector<Id> kept;
    double cum = 0.0;
    for (Id item : ranked) {
        if (cum >= target) break;
        kept.push_back(item);
        cum += influence[item];
    }
    return kept;
}

} // namespace

View apply_config(const AttributionGraph& g, const InfluenceMap& inf, const PruningConfig& cfg) {
    check_fraction(cfg.node_keep, "node_keep");
    check_fraction(cfg.edge_keep, "edge_keep");
    if (inf.node_influence.size() != g.node_count() || inf.edge_influence.size() != g.edge_count()) {
        throw std::invalid_argument("influence map does not match graph");
    }

    // Node stage: rank feature/error nodes; tokens and logits are exempt.
    std::vector<NodeId> sortable;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const NodeKind kind = g.nodes()[v].kind;
        if (kind == NodeKind::feature || kind == NodeKind::error) {
            sortable.push_back(v);
        }
    }
    std::sort(sortable.begin(), sortable.end(), [&inf](NodeId a, NodeId b) {
        if (inf.node_influence[a] != inf.node_influence[b]) {
            return inf.node_influence[a] > inf.node_influence[b];
        }
        return a < b; // index order is id order
    });

    std::vector<char> kept_node(g.node_count(), 0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const NodeKind kind = g.nodes()[v].kind;
        if (kind == NodeKind::token || kind == NodeKind::logit) {
            kept_node[v] = 1;
        }
    }
    for (NodeId v : keep_prefix(sortable, inf.node_influence, cfg.node_keep)) {
        kept_node[v] = 1;
    }

    // Edge stage over the induced edges, ranked by full-graph edge influence.
    std::vector<EdgeId> induced;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (kept_node[g.edges()[e].src] && kept_node[g.edges()[e].dst]) {
            induced.push_back(e);
        }
    }
    std::sort(induced.begin(), induced.end(), [&inf](EdgeId a, EdgeId b) {
        if (inf.edge_influence[a] != inf.edge_influence[b]) {
            return inf.edge_influence[a] > inf.edge_influence[b];
        }
        return a < b;
    });

    View view;
    view.config = cfg;
    view.graph = &g;
    view.edges = keep_prefix(induced, inf.edge_influence, cfg.edge_keep);
    std::sort(view.edges.begin(), view.edges.end());

    // Isolated nodes are dropped: the view's nodes are exactly the endpoints.
    std::vector<char> endpoint(g.node_count(), 0);
    for (EdgeId e : view.edges) {
        endpoint[g.edges()[e].src] = 1;
        endpoint[g.edges()[e].dst] = 1;
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (endpoint[v]) view.nodes.push_back(v);
    }
    return view;
}

std::vector<PruningConfig> grid_family(std::span<const double> node_levels,
                                       std::span<const double> edge_levels) {
    if (node_levels.empty() || edge_levels.empty()) {
        throw std::invalid_argument("grid family: level lists must be nonempty");
    }
    for (double v : node_levels) check_fraction(v, "node level");
    for (double v : edge_levels) check_fraction(v, "edge level");

    std::vector<PruningConfig> configs;
    configs.reserve(node_levels.size() * edge_levels.size());
    for (double n : node_levels) {
        for (double e : edge_levels) {
            configs.push_back(
                PruningConfig{n, e, "n" + format_fraction(n) + "_e" + format_fraction(e)});
        }
    }
    return configs;
}

std::vector<PruningConfig> non_nested_family(std::span<const double> node_levels,
                                             std::span<const double> edge_levels) {
    if (node_levels.size() != edge_levels.size()) {
        throw std::invalid_argument("crossed family: length mismatch");
    }
    if (node_levels.empty()) {
        throw std::invalid_argument("crossed family: level lists must be nonempty");
    }
    const auto check_ascending = [](std::span<const double> levels, const char* what) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            check_fraction(levels[i], what);
            if (i > 0 && !(levels[i] > levels[i - 1])) {
                throw std::invalid_argument(std::string("crossed family: ") + what +
                                            "s must be strictly ascending");
            }
        }
    };
    check_ascending(node_levels, "node level");
    check_ascending(edge_levels, "edge level");

    const std::size_t k = node_levels.size();
    std::vector<PruningConfig> configs;
    configs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double n = node_levels[i];
        const double e = edge_levels[k - 1 - i];
        configs.push_back(PruningConfig{n, e, "n" + format_fraction(n) + "_e" + format_fraction(e)});
    }
    return configs;
}

std::vector<PruningConfig> jittered_family(double base_node_keep, double base_edge_keep,
                                           double jitter, int count, std::uint64_t seed) {
    check_fraction(base_node_keep, "node_keep");
    check_fraction(base_edge_keep, "edge_keep");
    if (count < 1) throw std::invalid_argument("jittered family: count must be >= 1");
    if (jitter < 0.0) throw std::invalid_argument("jittered family: jitter must be >= 0");

    rng::Engine eng(seed);
    const auto clamp01 = [](double v) { return std::min(1.0, std::max(0.02, v)); };
    std::vector<PruningConfig> configs;
    configs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double n = clamp01(base_node_keep + jitter * (2.0 * rng::uniform01(eng) - 1.0));
        const double e = clamp01(base_edge_keep + jitter * (2.0 * rng::uniform01(eng) - 1.0));
        configs.push_back(PruningConfig{n, e, "j" + std::to_string(i)});
    }
    return configs;
}

NestedChainCheck is_nested_chain(std::span<const View> views) {
    if (views.size() < 2) {
        throw std::invalid_argument("nested-chain check needs at least two views");
    }
    for (const View& v : views) {
        if (v.graph != views.front().graph) {
            throw std::invalid_argument("nested-chain check: views from different graphs");
        }
    }

    NestedChainCheck result;
    result.order.resize(views.size());
    for (std::size_t i = 0; i < views.size(); ++i) result.order[i] = i;
    std::stable_sort(result.order.begin(), result.order.end(),
                     [&views](std::size_t a, std::size_t b) {
                         return views[a].edges.size() < views[b].edges.size();
                     });

    for (std::size_t i = 0; i + 1 < result.order.size(); ++i) {
        const View& small = views[result.order[i]];
        const View& large = views[result.order[i + 1]];
        if (!std::includes(large.edges.begin(), large.edges.end(), small.edges.begin(),
                           small.edges.end())) {
            result.nested = false;
            result.incomparable = {result.order[i], result.order[i + 1]};
            result.order.clear();
            return result;
        }
    }
    result.nested = true;
    return result;
}

} // namespace circons
