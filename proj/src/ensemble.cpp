// SPDX-License-Identifier: Apache-2.0
#include "circons/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "circons/rng.hpp"

namespace circons {

namespace {

const AttributionGraph* common_graph(std::span<const View> views) {
    if (views.empty()) {
        throw std::invalid_argument("empty view list");
    }
    const AttributionGraph* g = views.front().graph;
    for (const View& v : views) {
        if (v.graph != g || g == nullptr) {
            throw std::invalid_argument("views must come from one graph");
        }
    }
    return g;
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

} // namespace

std::optional<double> StabilityReport::score_of(EdgeId edge) const {
    const auto it = std::lower_bound(union_edges.begin(), union_edges.end(), edge);
    if (it == union_edges.end() || *it != edge) return std::nullopt;
    return score_at(static_cast<std::size_t>(it - union_edges.begin()));
}

StabilityReport stability_scores(std::span<const View> views) {
    const AttributionGraph* g = common_graph(views);

    StabilityReport report;
    report.views = static_cast<int>(views.size());
    report.graph = g;
    report.view_sizes.reserve(views.size());

    std::vector<int> count(g->edge_count(), 0);
    for (const View& v : views) {
        report.view_sizes.push_back(v.edges.size());
        for (EdgeId e : v.edges) {
            ++count[e];
        }
    }
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
        if (count[e] > 0) {
            report.union_edges.push_back(e);
            report.counts.push_back(count[e]);
        }
    }
    return report;
}

std::vector<EdgeId> consensus(const StabilityReport& report, double tau) {
    if (!(tau > 0.0) || tau > 1.0) {
        throw std::invalid_argument("tau must lie in (0, 1]");
    }
    std::vector<EdgeId> edges;
    for (std::size_t i = 0; i < report.union_edges.size(); ++i) {
        if (report.score_at(i) >= tau) {
            edges.push_back(report.union_edges[i]);
        }
    }
    return edges;
}

Taxonomy classify(const StabilityReport& report, double contingent_boundary) {
    if (!(contingent_boundary > 0.0) || contingent_boundary >= 1.0) {
        throw std::invalid_argument("contingent boundary must lie in (0, 1)");
    }
    Taxonomy taxonomy;
    for (std::size_t i = 0; i < report.union_edges.size(); ++i) {
        const EdgeId e = report.union_edges[i];
        if (report.counts[i] == report.views) {
            taxonomy.core.push_back(e);
        } else if (report.score_at(i) >= contingent_boundary) {
            taxonomy.contingent.push_back(e);
        } else {
            taxonomy.noise.push_back(e);
        }
    }
    return taxonomy;
}

std::optional<std::size_t> match_single_config(std::span<const EdgeId> consensus_edges,
                                               std::span<const View> views) {
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (views[i].edges.size() == consensus_edges.size() &&
            std::equal(views[i].edges.begin(), views[i].edges.end(), consensus_edges.begin())) {
            return i;
        }
    }
    return std::nullopt;
}

JaccardResult pairwise_jaccard(std::span<const View> views) {
    common_graph(views);
    if (views.size() < 2) {
        throw std::invalid_argument("pairwise Jaccard needs at least two views");
    }

    JaccardResult result;
    const std::size_t b = views.size();
    result.matrix.assign(b, std::vector<double>(b, 1.0));

    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = i + 1; j < b; ++j) {
            const auto& a = views[i].edges;
            const auto& c = views[j].edges;
            std::size_t inter = 0;
            std::size_t ia = 0, ic = 0;
            while (ia < a.size() && ic < c.size()) {
                if (a[ia] < c[ic]) ++ia;
                else if (c[ic] < a[ia]) ++ic;
                else { ++inter; ++ia; ++ic; }
            }
            const std::size_t uni = a.size() + c.size() - inter;
            double value;
            if (uni == 0) {
                value = std::numeric_limits<double>::quiet_NaN();
                ++result.skipped_pairs;
            } else {
                value = static_cast<double>(inter) / static_cast<double>(uni);
                sum += value;
                ++pairs;
            }
            result.matrix[i][j] = result.matrix[j][i] = value;
        }
    }
    result.mean = pairs > 0 ? sum / pairs : 0.0;
    return result;
}

std::vector<LeaveOneOutRow> leave_one_out(std::span<const View> views) {
    const AttributionGraph* g = common_graph(views);
    const int b = static_cast<int>(views.size());
    if (b < 2) {
        throw std::invalid_argument("leave-one-out needs at least two views");
    }

    std::vector<int> total_count(g->edge_count(), 0);
    for (const View& v : views) {
        for (EdgeId e : v.edges) ++total_count[e];
    }

    // Per bin k = 1..B-1: sum of per-fold retention fractions, number of
    // folds where the bin is populated, and total edges seen in the bin.
    std::vector<double> retention_sum(b, 0.0);
    std::vector<int> folds(b, 0);
    std::vector<std::size_t> edge_total(b, 0);

    std::vector<char> in_held(g->edge_count(), 0);
    for (const View& held : views) {
        for (EdgeId e : held.edges) in_held[e] = 1;

        std::vector<std::size_t> bin_size(b, 0);
        std::vector<std::size_t> bin_hit(b, 0);
        for (EdgeId e = 0; e < g->edge_count(); ++e) {
            const int k = total_count[e] - in_held[e];
            if (k <= 0) continue; // not in the union of the other views
            bin_size[k] += 1;
            bin_hit[k] += in_held[e];
        }
        for (int k = 1; k < b; ++k) {
            if (bin_size[k] == 0) continue;
            retention_sum[k] += static_cast<double>(bin_hit[k]) / static_cast<double>(bin_size[k]);
            folds[k] += 1;
            edge_total[k] += bin_size[k];
        }

        for (EdgeId e : held.edges) in_held[e] = 0;
    }

    std::vector<LeaveOneOutRow> rows;
    for (int k = 1; k < b; ++k) {
        if (folds[k] == 0) continue;
        rows.push_back(LeaveOneOutRow{static_cast<double>(k) / static_cast<double>(b - 1),
                                      retention_sum[k] / folds[k], edge_total[k]});
    }
    return rows;
}

BootstrapSummary bootstrap_consensus(std::span<const View> views, const AttributionGraph& g,
                                     int n_boot, std::uint64_t seed) {
    common_graph(views);
    if (views.size() < 2) {
        throw std::invalid_argument("bootstrap needs at least two views");
    }
    if (n_boot < 1) {
        throw std::invalid_argument("bootstrap needs at least one sample");
    }
    const int b = static_cast<int>(views.size());

    const auto strict_consensus = [&](std::span<const std::size_t> chosen) {
        std::vector<int> count(g.edge_count(), 0);
        for (std::size_t v : chosen) {
            for (EdgeId e : views[v].edges) ++count[e];
        }
        std::vector<EdgeId> edges;
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            if (count[e] == b) edges.push_back(e);
        }
        return edges;
    };

    std::vector<std::size_t> all(views.size());
    for (std::size_t i = 0; i < views.size(); ++i) all[i] = i;
    const std::vector<EdgeId> point = strict_consensus(all);

    BootstrapSummary summary;
    summary.samples = n_boot;
    summary.size_point = static_cast<double>(point.size());
    summary.ir_point = influence_retained(g, point);

    rng::Engine eng(seed);
    std::vector<double> sizes;
    std::vector<double> irs;
    sizes.reserve(static_cast<std::size_t>(n_boot));
    irs.reserve(static_cast<std::size_t>(n_boot));
    std::vector<std::size_t> chosen(views.size());
    for (int i = 0; i < n_boot; ++i) {
        for (std::size_t& c : chosen) {
            c = static_cast<std::size_t>(rng::below(eng, views.size()));
        }
        const std::vector<EdgeId> c1 = strict_consensus(chosen);
        sizes.push_back(static_cast<double>(c1.size()));
        irs.push_back(influence_retained(g, c1));
    }

    summary.size_ci = {percentile(sizes, 0.025), percentile(sizes, 0.975)};
    summary.ir_ci = {percentile(irs, 0.025), percentile(irs, 0.975)};
    return summary;
}

nlohmann::json stability_report_to_json(const StabilityReport& report) {
    const AttributionGraph& g = *report.graph;
    nlohmann::json scores = nlohmann::json::array();
    for (std::size_t i = 0; i < report.union_edges.size(); ++i) {
        const Edge& e = g.edges()[report.union_edges[i]];
        scores.push_back({g.nodes()[e.src].id, g.nodes()[e.dst].id, report.counts[i]});
    }
    return nlohmann::json{{"views", report.views},
                          {"view_sizes", report.view_sizes},
                          {"scores", std::move(scores)}};
}

StabilityReport stability_report_from_json(const nlohmann::json& doc, const AttributionGraph& g) {
    StabilityReport report;
    report.graph = &g;
    report.views = doc.at("views").get<int>();
    report.view_sizes = doc.at("view_sizes").get<std::vector<std::size_t>>();

    std::vector<std::pair<EdgeId, int>> entries;
    for (const auto& row : doc.at("scores")) {
        const auto src = row.at(0).get<std::string>();
        const auto dst = row.at(1).get<std::string>();
        const auto idx = g.edge_index(src, dst);
        if (!idx) {
            throw ValidationError("stability report references unknown edge: " + src + " -> " +
                                  dst);
        }
        entries.emplace_back(*idx, row.at(2).get<int>());
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [edge, count] : entries) {
        report.union_edges.push_back(edge);
        report.counts.push_back(count);
    }
    return report;
}

nlohmann::json taxonomy_to_json(const Taxonomy& taxonomy, const AttributionGraph& g) {
    const auto tier = [&g](const std::vector<EdgeId>& edges) {
        nlohmann::json keys = nlohmann::json::array();
        for (EdgeId e : edges) {
            keys.push_back({g.nodes()[g.edges()[e].src].id, g.nodes()[g.edges()[e].dst].id});
        }
        return nlohmann::json{{"size", edges.size()}, {"edges", std::move(keys)}};
    };
    return nlohmann::json{{"core", tier(taxonomy.core)},
                          {"contingent", tier(taxonomy.contingent)},
                          {"noise", tier(taxonomy.noise)}};
}

} // namespace circons
