// SPDX-License-Identifier: Apache-2.0
#include "circons/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "circons/rng.hpp"

namespace circons {

std::vector<EdgeId> union_pruned_baseline(const StabilityReport& report, const InfluenceMap& inf,
                                          const AttributionGraph& g, std::size_t k,
                                          BaselineRank rank) {
    if (k > report.union_edges.size()) {
        throw std::invalid_argument("union-pruned baseline: k exceeds union size");
    }
    std::vector<EdgeId> ranked = report.union_edges;
    const auto value = [&](EdgeId e) {
        return rank == BaselineRank::influence ? inf.edge_influence[e]
                                               : std::abs(g.edges()[e].weight);
    };
    std::sort(ranked.begin(), ranked.end(), [&](EdgeId a, EdgeId b) {
        if (value(a) != value(b)) return value(a) > value(b);
        return a < b;
    });
    ranked.resize(k);
    std::sort(ranked.begin(), ranked.end());
    return ranked;
}

std::vector<std::vector<EdgeId>> random_baseline(const StabilityReport& report, std::size_t k,
                                                 int seeds, std::uint64_t seed0) {
    if (k > report.union_edges.size()) {
        throw std::invalid_argument("random baseline: k exceeds union size");
    }
    if (seeds < 1) {
        throw std::invalid_argument("random baseline: seeds must be >= 1");
    }
    rng::Engine eng(seed0);
    std::vector<std::vector<EdgeId>> draws;
    draws.reserve(static_cast<std::size_t>(seeds));
    for (int s = 0; s < seeds; ++s) {
        const auto picks = rng::sample_indices(static_cast<std::uint32_t>(report.union_edges.size()),
                                               static_cast<std::uint32_t>(k), eng);
        std::vector<EdgeId> edges;
        edges.reserve(k);
        for (std::uint32_t i : picks) {
            edges.push_back(report.union_edges[i]);
        }
        draws.push_back(std::move(edges));
    }
    return draws;
}

WinRates win_rates(std::span<const IrRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("win rates need at least one record");
    }
    WinRates rates;
    rates.total = static_cast<int>(records.size());
    const auto tally = [](WinCounts& counts, double consensus, double baseline) {
        if (consensus > baseline) ++counts.wins;
        else if (consensus == baseline) ++counts.ties;
        else ++counts.losses;
    };
    for (const IrRecord& r : records) {
        tally(rates.vs_union_pruned, r.consensus, r.union_pruned);
        tally(rates.vs_random, r.consensus, r.random_mean);
    }
    return rates;
}

std::vector<StabilityBin> stability_influence_bins(const StabilityReport& report,
                                                   const InfluenceMap& inf) {
    std::map<int, std::pair<double, std::size_t>> bins; // count k -> (sum, n)
    for (std::size_t i = 0; i < report.union_edges.size(); ++i) {
        auto& [sum, n] = bins[report.counts[i]];
        sum += inf.edge_influence[report.union_edges[i]];
        n += 1;
    }
    std::vector<StabilityBin> rows;
    rows.reserve(bins.size());
    for (const auto& [k, acc] : bins) {
        rows.push_back(StabilityBin{static_cast<double>(k) / report.views,
                                    acc.first / static_cast<double>(acc.second), acc.second});
    }
    return rows;
}

std::vector<CurvePoint> coverage_curve(const StabilityReport& report, const AttributionGraph& g) {
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(report.views));
    for (int k = 1; k <= report.views; ++k) {
        const double tau = static_cast<double>(k) / report.views;
        const std::vector<EdgeId> c = consensus(report, tau);
        curve.push_back(CurvePoint{tau, c.size(), influence_retained(g, c)});
    }
    return curve;
}

std::vector<EdgeId> aggregate_stability_times_influence(const StabilityReport& report,
                                                        const InfluenceMap& inf, std::size_t k) {
    if (k > report.union_edges.size()) {
        throw std::invalid_argument("stability-times-influence: k exceeds union size");
    }
    std::vector<std::size_t> order(report.union_edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto value = [&](std::size_t i) {
        return report.score_at(i) * inf.edge_influence[report.union_edges[i]];
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (value(a) != value(b)) return value(a) > value(b);
        return report.union_edges[a] < report.union_edges[b];
    });
    std::vector<EdgeId> edges;
    edges.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        edges.push_back(report.union_edges[order[i]]);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

double tau_adaptive(const StabilityReport& report, const AttributionGraph& g,
                    std::span<const View> views, double margin) {
    if (margin < 0.0) {
        throw std::invalid_argument("margin must be >= 0");
    }
    if (views.empty()) {
        throw std::invalid_argument("tau-adaptive needs at least one view");
    }
    double ir_star = 0.0;
    for (const View& v : views) {
        ir_star = std::max(ir_star, influence_retained(g, v.edges));
    }
    for (int k = report.views; k >= 1; --k) {
        const double tau = static_cast<double>(k) / report.views;
        if (influence_retained(g, consensus(report, tau)) >= ir_star - margin) {
            return tau;
        }
    }
    return 1.0 / report.views;
}

OracleBest oracle_best_config(std::span<const View> views, const AttributionGraph& g) {
    if (views.empty()) {
        throw std::invalid_argument("oracle needs at least one view");
    }
    OracleBest best{0, influence_retained(g, views[0].edges)};
    for (std::size_t i = 1; i < views.size(); ++i) {
        const double ir = influence_retained(g, views[i].edges);
        if (ir > best.ir) {
            best = OracleBest{i, ir};
        }
    }
    return best;
}

} // namespace circons
