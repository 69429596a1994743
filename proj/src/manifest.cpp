// SPDX-License-Identifier: Apache-2.0
#include "circons/manifest.hpp"

#include <sstream>

#include "circons/graph_io.hpp"

namespace circons {

namespace {

using nlohmann::json;

double number_or(const json& obj, const char* key, double fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw ParseError(std::string("'") + key + "' must be a number");
    return it->get<double>();
}

std::int64_t integer_or(const json& obj, const char* key, std::int64_t fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer");
    return it->get<std::int64_t>();
}

std::vector<double> levels_or(const json& obj, const char* key, std::span<const double> fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return {fallback.begin(), fallback.end()};
    if (!it->is_array()) throw ParseError(std::string("'") + key + "' must be an array");
    return it->get<std::vector<double>>();
}

} // namespace

std::vector<PruningConfig> ConfigFamilySpec::build() const {
    switch (kind) {
        case FamilyKind::explicit_list:
            return configs;
        case FamilyKind::grid:
            return grid_family(node_levels, edge_levels);
        case FamilyKind::crossed:
            return non_nested_family(node_levels, edge_levels);
    }
    return {};
}

std::string ConfigFamilySpec::describe() const {
    std::ostringstream out;
    switch (kind) {
        case FamilyKind::explicit_list:
            out << "explicit B=" << configs.size();
            break;
        case FamilyKind::grid:
            out << "grid " << node_levels.size() << "x" << edge_levels.size();
            break;
        case FamilyKind::crossed:
            out << "crossed B=" << node_levels.size();
            break;
    }
    return out.str();
}

SyntheticSpec synthetic_spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("synthetic spec must be an object");
    SyntheticSpec spec;
    spec.layers = static_cast<int>(integer_or(doc, "layers", spec.layers));
    spec.features_per_layer =
        static_cast<int>(integer_or(doc, "features_per_layer", spec.features_per_layer));
    spec.logits = static_cast<int>(integer_or(doc, "logits", spec.logits));
    spec.core_edges = static_cast<int>(integer_or(doc, "core_edges", spec.core_edges));
    spec.contingent_edges =
        static_cast<int>(integer_or(doc, "contingent_edges", spec.contingent_edges));
    spec.noise_edges = static_cast<int>(integer_or(doc, "noise_edges", spec.noise_edges));
    spec.core_weight_scale = number_or(doc, "core_weight_scale", spec.core_weight_scale);
    spec.noise_weight_scale = number_or(doc, "noise_weight_scale", spec.noise_weight_scale);
    spec.seed = static_cast<std::uint64_t>(integer_or(doc, "seed", static_cast<std::int64_t>(spec.seed)));
    return spec;
}

RunManifest parse_manifest(const json& doc) {
    if (!doc.is_object()) throw ParseError("manifest must be a JSON object");

    RunManifest manifest;

    const auto graphs = doc.find("graphs");
    if (graphs == doc.end() || !graphs->is_array() || graphs->empty()) {
        throw ValidationError("manifest needs at least one graph source");
    }
    int synthetic_counter = 0;
    for (const json& src : *graphs) {
        if (!src.is_object()) throw ParseError("graph source must be an object");
        GraphSource source;
        if (const auto file = src.find("file"); file != src.end()) {
            source.file = std::filesystem::path(file->get<std::string>());
            source.id = src.value("id", source.file->stem().string());
        } else if (const auto syn = src.find("synthetic"); syn != src.end()) {
            source.synthetic = synthetic_spec_from_json(*syn);
            std::ostringstream fallback;
            fallback << "syn" << synthetic_counter << "_seed" << source.synthetic->seed;
            source.id = src.value("id", fallback.str());
            ++synthetic_counter;
        } else {
            throw ValidationError("graph source needs 'file' or 'synthetic'");
        }
        manifest.graphs.push_back(std::move(source));
    }

    const auto configs = doc.find("configs");
    if (configs == doc.end() || !configs->is_object()) {
        throw ValidationError("manifest needs a 'configs' family");
    }
    const std::string kind = configs->value("kind", std::string("grid"));
    if (kind == "explicit") {
        manifest.family.kind = FamilyKind::explicit_list;
        const auto list = configs->find("configs");
        if (list == configs->end() || !list->is_array() || list->empty()) {
            throw ValidationError("explicit config family must be nonempty");
        }
        int index = 0;
        for (const json& c : *list) {
            PruningConfig cfg;
            cfg.node_keep = c.at("node_keep").get<double>();
            cfg.edge_keep = c.at("edge_keep").get<double>();
            cfg.id = c.value("id", "cfg" + std::to_string(index));
            manifest.family.configs.push_back(std::move(cfg));
            ++index;
        }
    } else if (kind == "grid") {
        manifest.family.kind = FamilyKind::grid;
        manifest.family.node_levels = levels_or(*configs, "node_levels", kDefaultGridNodeLevels);
        manifest.family.edge_levels = levels_or(*configs, "edge_levels", kDefaultGridEdgeLevels);
    } else if (kind == "crossed") {
        manifest.family.kind = FamilyKind::crossed;
        manifest.family.node_levels = levels_or(*configs, "node_levels", kDefaultCrossedNodeLevels);
        manifest.family.edge_levels = levels_or(*configs, "edge_levels", kDefaultCrossedEdgeLevels);
    } else {
        throw ValidationError("unknown config family kind: " + kind);
    }
    manifest.family.build(); // validate now rather than mid-run

    manifest.tau = number_or(doc, "tau", manifest.tau);
    if (!(manifest.tau > 0.0) || manifest.tau > 1.0) {
        throw ValidationError("tau must lie in (0, 1]");
    }
    if (const auto tax = doc.find("taxonomy"); tax != doc.end()) {
        manifest.contingent_boundary =
            number_or(*tax, "contingent_boundary", manifest.contingent_boundary);
    }
    if (const auto boost = doc.find("boost"); boost != doc.end()) {
        manifest.boost_enabled = boost->value("enabled", false);
        manifest.boost_alpha = number_or(*boost, "alpha", manifest.boost_alpha);
        if (boost->contains("post_prune_keep")) {
            manifest.post_prune_keep = number_or(*boost, "post_prune_keep", 0.95);
        }
    }
    if (const auto baselines = doc.find("baselines"); baselines != doc.end()) {
        manifest.random_baseline_seeds =
            static_cast<int>(integer_or(*baselines, "random_seeds", manifest.random_baseline_seeds));
        manifest.baseline_seed =
            static_cast<std::uint64_t>(integer_or(*baselines, "seed",
                                                  static_cast<std::int64_t>(manifest.baseline_seed)));
        const std::string rank = baselines->value("rank_by", std::string("influence"));
        if (rank == "influence") {
            manifest.baseline_rank = BaselineRank::influence;
        } else if (rank == "abs_weight") {
            manifest.baseline_rank = BaselineRank::abs_weight;
        } else {
            throw ValidationError("baselines.rank_by must be 'influence' or 'abs_weight'");
        }
        if (manifest.random_baseline_seeds < 1) {
            throw ValidationError("baselines.random_seeds must be >= 1");
        }
    }
    if (const auto boot = doc.find("bootstrap"); boot != doc.end()) {
        manifest.bootstrap_samples =
            static_cast<int>(integer_or(*boot, "samples", manifest.bootstrap_samples));
        manifest.bootstrap_seed =
            static_cast<std::uint64_t>(integer_or(*boot, "seed",
                                                  static_cast<std::int64_t>(manifest.bootstrap_seed)));
        if (manifest.bootstrap_samples < 1) {
            throw ValidationError("bootstrap.samples must be >= 1");
        }
    }
    manifest.epsilon = number_or(doc, "epsilon", manifest.epsilon);
    if (!(manifest.epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    if (const auto seeds = doc.find("logit_seeds"); seeds != doc.end()) {
        if (!seeds->is_object()) throw ParseError("'logit_seeds' must be an object");
        for (const auto& [id, value] : seeds->items()) {
            manifest.logit_seeds[id] = value.get<double>();
        }
    }
    manifest.output_dir = std::filesystem::path(doc.value("output_dir", std::string("out")));

    return manifest;
}

RunManifest load_manifest_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& err) {
        throw ParseError(std::string("malformed manifest: ") + err.what());
    }
    return parse_manifest(doc);
}

} // namespace circons
