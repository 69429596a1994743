// SPDX-License-Identifier: Apache-2.0
#include "circons/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace circons {

namespace {

using nlohmann::json;

std::string require_string(const json& obj, const char* key, const char* where) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(std::string("missing or non-string '") + key + "' in " + where);
    }
    return it->get<std::string>();
}

std::int64_t require_int(const json& obj, const char* key, const char* where) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) {
        throw ParseError(std::string("missing or non-integer '") + key + "' in " + where);
    }
    return it->get<std::int64_t>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw ParseError(std::string("non-string '") + key + "'");
    }
    return it->get<std::string>();
}

} // namespace

GraphDocument parse_graph_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ParseError(std::string("malformed graph document: ") + err.what());
    }
    if (!doc.is_object()) {
        throw ParseError("graph document must be a JSON object");
    }

    GraphDocument out;
    if (const auto meta = doc.find("meta"); meta != doc.end() && meta->is_object()) {
        out.meta.prompt = meta->value("prompt", std::string{});
        out.meta.target_token = meta->value("target_token", std::string{});
        out.meta.model = meta->value("model", std::string{});
    }

    const auto nodes = doc.find("nodes");
    if (nodes == doc.end() || !nodes->is_array()) {
        throw ParseError("missing or non-array 'nodes'");
    }
    out.nodes.reserve(nodes->size());
    for (const json& n : *nodes) {
        if (!n.is_object()) throw ParseError("node entry must be an object");
        DocNode node;
        node.id = require_string(n, "id", "node");
        node.kind = require_string(n, "kind", "node");
        node.layer = require_int(n, "layer", "node");
        node.position = require_int(n, "position", "node");
        node.label = optional_string(n, "label");
        node.planted_tier = optional_string(n, "planted_tier");
        out.nodes.push_back(std::move(node));
    }

    const auto edges = doc.find("edges");
    if (edges == doc.end() || !edges->is_array()) {
        throw ParseError("missing or non-array 'edges'");
    }
    out.edges.reserve(edges->size());
    for (const json& e : *edges) {
        if (!e.is_object()) throw ParseError("edge entry must be an object");
        DocEdge edge;
        edge.src = require_string(e, "src", "edge");
        edge.dst = require_string(e, "dst", "edge");
        const auto w = e.find("w");
        if (w == e.end() || !w->is_number()) {
            throw ParseError("missing or non-numeric 'w' in edge");
        }
        edge.weight = w->get<double>();
        edge.planted_tier = optional_string(e, "planted_tier");
        out.edges.push_back(std::move(edge));
    }

    return out;
}

AttributionGraph load_graph(const std::string& text) {
    return AttributionGraph::from_document(parse_graph_document(text));
}

std::string save_graph(const AttributionGraph& g) {
    // AttributionGraph already stores nodes and edges in canonical order;
    // nlohmann::json objects iterate keys alphabetically.
    json doc;
    doc["meta"] = {{"prompt", g.meta().prompt},
                   {"target_token", g.meta().target_token},
                   {"model", g.meta().model}};

    json nodes = json::array();
    for (const Node& n : g.nodes()) {
        json node{{"id", n.id},
                  {"kind", to_string(n.kind)},
                  {"layer", n.layer},
                  {"position", n.position}};
        if (n.label) node["label"] = *n.label;
        if (n.planted_tier) node["planted_tier"] = *n.planted_tier;
        nodes.push_back(std::move(node));
    }
    doc["nodes"] = std::move(nodes);

    json edges = json::array();
    for (const Edge& e : g.edges()) {
        json edge{{"src", g.nodes()[e.src].id},
                  {"dst", g.nodes()[e.dst].id},
                  {"w", e.weight}};
        if (e.planted_tier) edge["planted_tier"] = *e.planted_tier;
        edges.push_back(std::move(edge));
    }
    doc["edges"] = std::move(edges);

    return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open file for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

AttributionGraph load_graph_file(const std::filesystem::path& path) {
    return load_graph(read_file(path));
}

void save_graph_file(const AttributionGraph& g, const std::filesystem::path& path) {
    write_file(path, save_graph(g));
}

} // namespace circons
