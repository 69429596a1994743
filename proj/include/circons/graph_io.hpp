// SPDX-License-Identifier: Apache-2.0
#pragma once

// On-disk graph format and canonical serialization.
//
// A graph file is UTF-8 JSON:
//   {"meta": {"prompt", "target_token", "model"},
//    "nodes": [{"id", "kind", "layer", "position", "label"?, "planted_tier"?}, ...],
//    "edges": [{"src", "dst", "w", "planted_tier"?}, ...]}
//
// Canonical form sorts nodes by id and edges by (src, dst) and emits floats
// with their shortest round-trip representation, so serializing the same
// graph twice is byte-identical and load(save(g)) == g.

#include <filesystem>
#include <string>

#include "circons/graph.hpp"

namespace circons {

/// Parses the JSON text into a raw document. Throws ParseError on malformed
/// input (bad JSON, wrong types, missing required keys).
GraphDocument parse_graph_document(const std::string& text);

/// Parses and validates. Throws ParseError or ValidationError.
AttributionGraph load_graph(const std::string& text);

/// Canonical serialization of a validated graph.
std::string save_graph(const AttributionGraph& g);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

AttributionGraph load_graph_file(const std::filesystem::path& path);
void save_graph_file(const AttributionGraph& g, const std::filesystem::path& path);

} // namespace circons
