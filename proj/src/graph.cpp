// SPDX-License-Identifier: Apache-2.0
#include "circons/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace circons {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::feature: return "feature";
        case NodeKind::error: return "error";
        case NodeKind::token: return "token";
        case NodeKind::logit: return "logit";
    }
    return "feature";
}

std::optional<NodeKind> node_kind_from_string(std::string_view text) {
    if (text == "feature") return NodeKind::feature;
    if (text == "error") return NodeKind::error;
    if (text == "token") return NodeKind::token;
    if (text == "logit") return NodeKind::logit;
    return std::nullopt;
}

namespace {

// Locates one directed cycle among the given adjacency lists and formats it
// as "a -> b -> a". Returns empty if none reachable (should not happen when
// Kahn's algorithm left nodes behind).
std::string find_cycle(const std::vector<std::vector<std::size_t>>& adj,
                       const std::vector<std::string>& ids) {
    const std::size_t n = adj.size();
    std::vector<int> state(n, 0); // 0 unvisited, 1 on stack, 2 done
    std::vector<std::size_t> parent(n, n);

    for (std::size_t root = 0; root < n; ++root) {
        if (state[root] != 0) continue;
        // iterative DFS
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < adj[u].size()) {
                const std::size_t v = adj[u][next++];
                if (state[v] == 0) {
                    state[v] = 1;
                    parent[v] = u;
                    stack.emplace_back(v, 0);
                } else if (state[v] == 1) {
                    // walk back from u to v
                    std::vector<std::size_t> cycle{v};
                    for (std::size_t w = u; w != v; w = parent[w]) {
                        cycle.push_back(w);
                    }
                    std::reverse(cycle.begin() + 1, cycle.end());
                    std::ostringstream out;
                    for (std::size_t w : cycle) {
                        out << ids[w] << " -> ";
                    }
                    out << ids[v];
                    return out.str();
                }
            } else {
                state[u] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

} // namespace

std::vector<std::string> validate(const GraphDocument& doc) {
    std::vector<std::string> violations;

    for (const DocNode& node : doc.nodes) {
        if (!node_kind_from_string(node.kind)) {
            violations.push_back("unknown node kind '" + node.kind + "' on node " + node.id);
        }
        if (node.layer < 0) {
            violations.push_back("negative layer on node " + node.id);
        }
        if (node.position < 0) {
            violations.push_back("negative position on node " + node.id);
        }
    }

    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
        auto [it, inserted] = index_of.emplace(doc.nodes[i].id, i);
        if (!inserted) {
            violations.push_back("duplicate node id: " + doc.nodes[i].id);
        }
    }

    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const DocEdge& edge : doc.edges) {
        if (index_of.find(edge.src) == index_of.end()) {
            violations.push_back("unknown node id: " + edge.src);
        }
        if (index_of.find(edge.dst) == index_of.end()) {
            violations.push_back("unknown node id: " + edge.dst);
        }
        if (edge.src == edge.dst) {
            violations.push_back("self-loop on node " + edge.src);
        }
        if (!std::isfinite(edge.weight)) {
            violations.push_back("non-finite weight on edge " + edge.src + " -> " + edge.dst);
        } else if (edge.weight == 0.0) {
            violations.push_back("zero weight on edge " + edge.src + " -> " + edge.dst);
        }
        if (!seen_edges.emplace(edge.src, edge.dst).second) {
            violations.push_back("duplicate edge: " + edge.src + " -> " + edge.dst);
        }
    }

    // Degree rules and acyclicity are only meaningful over resolvable edges.
    std::size_t logit_count = 0;
    for (const DocNode& node : doc.nodes) {
        if (node.kind == "logit") ++logit_count;
    }
    if (logit_count == 0) {
        violations.push_back("graph has no logit node");
    }

    std::vector<std::vector<std::size_t>> adj(doc.nodes.size());
    std::vector<std::string> ids(doc.nodes.size());
    for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
        ids[i] = doc.nodes[i].id;
    }
    for (const DocEdge& edge : doc.edges) {
        auto s = index_of.find(edge.src);
        auto d = index_of.find(edge.dst);
        if (s == index_of.end() || d == index_of.end() || edge.src == edge.dst) continue;
        adj[s->second].push_back(d->second);
        if (doc.nodes[s->second].kind == "logit") {
            violations.push_back("logit node has outgoing edge: " + edge.src);
        }
        if (doc.nodes[d->second].kind == "token") {
            violations.push_back("token node has incoming edge: " + edge.dst);
        }
    }

    const std::string cycle = find_cycle(adj, ids);
    if (!cycle.empty()) {
        violations.push_back("cycle: " + cycle);
    }

    return violations;
}

AttributionGraph AttributionGraph::from_document(const GraphDocument& doc) {
    const std::vector<std::string> violations = validate(doc);
    if (!violations.empty()) {
        throw ValidationError("invalid graph: " + violations.front());
    }

    AttributionGraph g;
    g.meta_ = doc.meta;

    std::vector<std::size_t> order(doc.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&doc](std::size_t a, std::size_t b) {
        return doc.nodes[a].id < doc.nodes[b].id;
    });

    g.nodes_.reserve(doc.nodes.size());
    std::map<std::string, NodeId> index_of;
    for (std::size_t i : order) {
        const DocNode& n = doc.nodes[i];
        g.nodes_.push_back(Node{n.id, *node_kind_from_string(n.kind), n.layer, n.position,
                                n.label, n.planted_tier});
        index_of.emplace(n.id, static_cast<NodeId>(g.nodes_.size() - 1));
    }

    g.edges_.reserve(doc.edges.size());
    for (const DocEdge& e : doc.edges) {
        g.edges_.push_back(Edge{index_of.at(e.src), index_of.at(e.dst), e.weight, e.planted_tier});
    }
    std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
    });

    g.out_edges_.resize(g.nodes_.size());
    g.in_edges_.resize(g.nodes_.size());
    for (EdgeId e = 0; e < g.edges_.size(); ++e) {
        g.out_edges_[g.edges_[e].src].push_back(e);
        g.in_edges_[g.edges_[e].dst].push_back(e);
    }

    for (NodeId v = 0; v < g.nodes_.size(); ++v) {
        if (g.nodes_[v].kind == NodeKind::logit) {
            g.logits_.push_back(v);
        }
    }

    // Kahn's algorithm; validation already guarantees acyclicity.
    std::vector<std::size_t> in_degree(g.nodes_.size());
    for (NodeId v = 0; v < g.nodes_.size(); ++v) {
        in_degree[v] = g.in_edges_[v].size();
    }
    std::vector<NodeId> frontier;
    for (NodeId v = 0; v < g.nodes_.size(); ++v) {
        if (in_degree[v] == 0) frontier.push_back(v);
    }
    g.topo_order_.reserve(g.nodes_.size());
    while (!frontier.empty()) {
        const NodeId v = frontier.back();
        frontier.pop_back();
        g.topo_order_.push_back(v);
        for (EdgeId e : g.out_edges_[v]) {
            const NodeId w = g.edges_[e].dst;
            if (--in_degree[w] == 0) frontier.push_back(w);
        }
    }

    return g;
}

std::optional<NodeId> AttributionGraph::node_index(std::string_view id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                     [](const Node& n, std::string_view v) { return n.id < v; });
    if (it == nodes_.end() || it->id != id) return std::nullopt;
    return static_cast<NodeId>(it - nodes_.begin());
}

std::optional<EdgeId> AttributionGraph::edge_index(std::string_view src, std::string_view dst) const {
    const auto s = node_index(src);
    const auto d = node_index(dst);
    if (!s || !d) return std::nullopt;
    const std::pair<NodeId, NodeId> key{*s, *d};
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                                     [](const Edge& e, const std::pair<NodeId, NodeId>& k) {
                                         return std::pair(e.src, e.dst) < k;
                                     });
    if (it == edges_.end() || std::pair(it->src, it->dst) != key) return std::nullopt;
    return static_cast<EdgeId>(it - edges_.begin());
}

GraphDocument AttributionGraph::to_document() const {
    GraphDocument doc;
    doc.meta = meta_;
    doc.nodes.reserve(nodes_.size());
    for (const Node& n : nodes_) {
        doc.nodes.push_back(DocNode{n.id, to_string(n.kind), n.layer, n.position, n.label,
                                    n.planted_tier});
    }
    doc.edges.reserve(edges_.size());
    for (const Edge& e : edges_) {
        doc.edges.push_back(DocEdge{nodes_[e.src].id, nodes_[e.dst].id, e.weight, e.planted_tier});
    }
    return doc;
}

} // namespace circons
