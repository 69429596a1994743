// SPDX-License-Identifier: Apache-2.0
#pragma once

// Run manifests: one JSON document that names every input, threshold, and
// seed for a pipeline run, so identical manifests produce identical reports.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "circons/evaluation.hpp"
#include "circons/pruning.hpp"
#include "circons/synthetic.hpp"

namespace circons {

struct GraphSource {
    std::string id;
    std::optional<std::filesystem::path> file;
    std::optional<SyntheticSpec> synthetic;
};

enum class FamilyKind { explicit_list, grid, crossed };

struct ConfigFamilySpec {
    FamilyKind kind = FamilyKind::grid;
    std::vector<PruningConfig> configs;    // explicit_list
    std::vector<double> node_levels;       // grid / crossed
    std::vector<double> edge_levels;

    std::vector<PruningConfig> build() const;
    std::string describe() const;
};

struct RunManifest {
    std::vector<GraphSource> graphs;
    ConfigFamilySpec family;
    double tau = 1.0;
    double contingent_boundary = 0.5;
    bool boost_enabled = false;
    double boost_alpha = 0.9;
    std::optional<double> post_prune_keep;
    int random_baseline_seeds = 10;
    std::uint64_t baseline_seed = 1234;
    BaselineRank baseline_rank = BaselineRank::influence;
    int bootstrap_samples = 100;
    std::uint64_t bootstrap_seed = 99;
    double epsilon = 1e-9;
    std::map<std::string, double> logit_seeds;
    std::filesystem::path output_dir = "out";
};

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& doc);

/// Parses and validates a manifest document. Throws ParseError or
/// ValidationError.
RunManifest parse_manifest(const nlohmann::json& doc);
RunManifest load_manifest_file(const std::filesystem::path& path);

} // namespace circons
