// SPDX-License-Identifier: Apache-2.0
#pragma once

// Attribution-graph data model: a directed weighted DAG over typed nodes
// (feature / error / token / logit). GraphDocument is the raw, possibly
// invalid description as read from disk or built by hand; AttributionGraph
// is the validated, immutable product the rest of the pipeline consumes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circons/common.hpp"

namespace circons {

enum class NodeKind { feature, error, token, logit };

const char* to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);

struct GraphMeta {
    std::string prompt;
    std::string target_token;
    std::string model;
};

struct DocNode {
    std::string id;
    std::string kind;
    std::int64_t layer = 0;
    std::int64_t position = 0;
    std::optional<std::string> label;
    std::optional<std::string> planted_tier;
};

struct DocEdge {
    std::string src;
    std::string dst;
    double weight = 0.0;
    std::optional<std::string> planted_tier;
};

struct GraphDocument {
    GraphMeta meta;
    std::vector<DocNode> nodes;
    std::vector<DocEdge> edges;
};

/// Every invariant violation in `doc`, each naming the invariant and the
/// offending element. Empty iff the document describes a valid graph.
std::vector<std::string> validate(const GraphDocument& doc);

using NodeId = std::uint32_t; // index into AttributionGraph::nodes()
using EdgeId = std::uint32_t; // index into AttributionGraph::edges()

struct Node {
    std::string id;
    NodeKind kind = NodeKind::feature;
    std::int64_t layer = 0;
    std::int64_t position = 0;
    std::optional<std::string> label;
    std::optional<std::string> planted_tier;
};

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    double weight = 0.0;
    std::optional<std::string> planted_tier;
};

/// Validated immutable attribution graph. Nodes are stored sorted by id and
/// edges by (src id, dst id), so index order doubles as the canonical order
/// and index comparisons are id comparisons. Safe to share across threads.
class AttributionGraph {
public:
    /// Validates and freezes a document. Throws ValidationError naming the
    /// first violated invariant.
    static AttributionGraph from_document(const GraphDocument& doc);

    const GraphMeta& meta() const { return meta_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    std::optional<NodeId> node_index(std::string_view id) const;
    std::optional<EdgeId> edge_index(std::string_view src, std::string_view dst) const;

    /// Node indices, sources first; every edge goes forward in this order.
    const std::vector<NodeId>& topo_order() const { return topo_order_; }
    const std::vector<std::vector<EdgeId>>& out_edges() const { return out_edges_; }
    const std::vector<std::vector<EdgeId>>& in_edges() const { return in_edges_; }
    const std::vector<NodeId>& logit_nodes() const { return logits_; }

    GraphDocument to_document() const;

private:
    AttributionGraph() = default;

    GraphMeta meta_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_edges_;
    std::vector<std::vector<EdgeId>> in_edges_;
    std::vector<NodeId> topo_order_;
    std::vector<NodeId> logits_;
};

} // namespace circons
