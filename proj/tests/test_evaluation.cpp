// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <doctest.h>

#include "circons/evaluation.hpp"
#include "circons/synthetic.hpp"
#include "oracles.hpp"

using namespace circons;

namespace {

struct Pipeline {
    AttributionGraph graph;
    InfluenceMap influence;
    std::vector<View> views;
    StabilityReport report;
};

Pipeline run_crossed(std::uint64_t seed, std::vector<double> node_levels = {0.5, 0.7, 0.9},
                     std::vector<double> edge_levels = {0.8, 0.9, 0.99}) {
    SyntheticSpec spec;
    spec.seed = seed;
    Pipeline p{generate_synthetic(spec), {}, {}, {}};
    p.influence = compute_influence(p.graph);
    for (const PruningConfig& cfg : non_nested_family(node_levels, edge_levels)) {
        p.views.push_back(apply_config(p.graph, p.influence, cfg));
    }
    p.report = stability_scores(p.views);
    return p;
}

} // namespace

TEST_CASE("union-pruned baseline selects the top-k union edges") {
    const Pipeline p = run_crossed(1);
    const std::size_t u = p.report.union_edges.size();

    CHECK(union_pruned_baseline(p.report, p.influence, p.graph, u) == p.report.union_edges);
    const auto top1 = union_pruned_baseline(p.report, p.influence, p.graph, 1);
    REQUIRE(top1.size() == 1);
    for (EdgeId e : p.report.union_edges) {
        CHECK(p.influence.edge_influence[top1[0]] >= p.influence.edge_influence[e]);
    }
    CHECK_THROWS_AS(union_pruned_baseline(p.report, p.influence, p.graph, u + 1),
                    std::invalid_argument);

    const std::vector<EdgeId> c1 = consensus(p.report, 1.0);
    if (!c1.empty()) {
        const auto up = union_pruned_baseline(p.report, p.influence, p.graph, c1.size());
        CHECK(up != c1); // crossed families disagree with greedy ranking
    }
}

TEST_CASE("union-pruned under |w| ranking is optimal among k-subsets") {
    // exhaustive check on a small union
    SyntheticSpec spec;
    spec.layers = 2;
    spec.features_per_layer = 3;
    spec.logits = 1;
    spec.core_edges = 5;
    spec.contingent_edges = 5;
    spec.noise_edges = 6;
    spec.seed = 6;
    const AttributionGraph g = generate_synthetic(spec);
    const InfluenceMap inf = compute_influence(g);
    std::vector<View> views{oracles::make_view(g, [&] {
        std::vector<EdgeId> all(g.edge_count());
        for (EdgeId e = 0; e < g.edge_count(); ++e) all[e] = e;
        return all;
    }())};
    const StabilityReport report = stability_scores(views);
    const std::size_t n = report.union_edges.size();
    REQUIRE(n <= 20);

    for (std::size_t k : {std::size_t{1}, std::size_t{3}, n / 2, n - 1}) {
        const auto picked = union_pruned_baseline(report, inf, g, k, BaselineRank::abs_weight);
        const double achieved = influence_retained(g, picked);
        double best = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
            std::vector<EdgeId> subset;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) subset.push_back(report.union_edges[i]);
            }
            best = std::max(best, influence_retained(g, subset));
        }
        CHECK(achieved == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("random baseline draws deterministic k-subsets of the union") {
    const Pipeline p = run_crossed(2);
    const std::size_t u = p.report.union_edges.size();
    const std::size_t k = u / 2;

    const auto draws = random_baseline(p.report, k, 10, 99);
    CHECK(draws.size() == 10);
    for (const auto& draw : draws) {
        CHECK(draw.size() == k);
        CHECK(std::includes(p.report.union_edges.begin(), p.report.union_edges.end(),
                            draw.begin(), draw.end()));
    }
    CHECK(random_baseline(p.report, k, 10, 99) == draws);
    CHECK(random_baseline(p.report, k, 10, 100) != draws);

    const auto full = random_baseline(p.report, u, 3, 5);
    for (const auto& draw : full) {
        CHECK(draw == p.report.union_edges);
    }
    CHECK_THROWS_AS(random_baseline(p.report, u + 1, 1, 0), std::invalid_argument);
}

TEST_CASE("win rates use strict comparison with separate ties") {
    std::vector<IrRecord> records{{0.9, 0.8, 0.7}, {0.8, 0.8, 0.5}, {0.6, 0.7, 0.6}};
    const WinRates rates = win_rates(records);
    CHECK(rates.total == 3);
    CHECK(rates.vs_union_pruned.wins == 1);
    CHECK(rates.vs_union_pruned.ties == 1);
    CHECK(rates.vs_union_pruned.losses == 1);
    CHECK(rates.vs_random.wins == 2);
    CHECK(rates.vs_random.ties == 1);
    CHECK(rates.vs_random.losses == 0);

    // permutation invariance
    std::vector<IrRecord> shuffled{records[2], records[0], records[1]};
    const WinRates again = win_rates(shuffled);
    CHECK(again.vs_union_pruned.wins == rates.vs_union_pruned.wins);
    CHECK(again.vs_random.ties == rates.vs_random.ties);

    CHECK_THROWS_AS(win_rates(std::vector<IrRecord>{}), std::invalid_argument);
}

TEST_CASE("stability bins group by exact score") {
    const AttributionGraph g = [] {
        SyntheticSpec spec;
        spec.seed = 13;
        return generate_synthetic(spec);
    }();
    const InfluenceMap inf = compute_influence(g);

    SUBCASE("identical views collapse to one bin") {
        std::vector<View> views{oracles::make_view(g, {0, 1}), oracles::make_view(g, {0, 1})};
        const auto bins = stability_influence_bins(stability_scores(views), inf);
        REQUIRE(bins.size() == 1);
        CHECK(bins[0].score == 1.0);
        CHECK(bins[0].edge_count == 2);
        CHECK(bins[0].mean_edge_influence ==
              doctest::Approx((inf.edge_influence[0] + inf.edge_influence[1]) / 2.0)
                  .epsilon(1e-12));
    }
    SUBCASE("bin means match a brute-force grouping") {
        std::vector<View> views{oracles::make_view(g, {0, 1, 2, 3, 4}),
                                oracles::make_view(g, {1, 2, 3}), oracles::make_view(g, {2, 9})};
        const StabilityReport report = stability_scores(views);
        const auto bins = stability_influence_bins(report, inf);
        std::map<int, std::vector<EdgeId>> groups;
        for (std::size_t i = 0; i < report.union_edges.size(); ++i) {
            groups[report.counts[i]].push_back(report.union_edges[i]);
        }
        REQUIRE(bins.size() == groups.size());
        std::size_t row = 0;
        for (const auto& [count, edges] : groups) {
            double sum = 0.0;
            for (EdgeId e : edges) sum += inf.edge_influence[e];
            CHECK(bins[row].score == doctest::Approx(count / 3.0).epsilon(1e-12));
            CHECK(bins[row].mean_edge_influence ==
                  doctest::Approx(sum / edges.size()).epsilon(1e-12));
            CHECK(bins[row].edge_count == edges.size());
            ++row;
        }
    }
}

TEST_CASE("coverage curve is monotone in tau") {
    const Pipeline p = run_crossed(3);
    const auto curve = coverage_curve(p.report, p.graph);
    REQUIRE(curve.size() == p.views.size());
    CHECK(curve.front().tau == doctest::Approx(1.0 / p.views.size()).epsilon(1e-12));
    CHECK(curve.front().size == p.report.union_edges.size());
    CHECK(curve.front().ir ==
          doctest::Approx(influence_retained(p.graph, p.report.union_edges)).epsilon(1e-12));
    for (std::size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].size <= curve[i - 1].size);
        CHECK(curve[i].ir <= curve[i - 1].ir + 1e-12);
    }
    CHECK(curve.back().tau == 1.0);
}

TEST_CASE("stability-times-influence ranking") {
    const Pipeline p = run_crossed(4);
    const std::size_t u = p.report.union_edges.size();
    CHECK(aggregate_stability_times_influence(p.report, p.influence, u) == p.report.union_edges);

    // when every score is 1 the rule degenerates to union-pruned
    const AttributionGraph& g = p.graph;
    std::vector<View> same{oracles::make_view(g, {0, 1, 2, 3, 4, 5, 6, 7}),
                           oracles::make_view(g, {0, 1, 2, 3, 4, 5, 6, 7})};
    const StabilityReport degenerate = stability_scores(same);
    for (std::size_t k : {std::size_t{1}, std::size_t{4}, std::size_t{8}}) {
        CHECK(aggregate_stability_times_influence(degenerate, p.influence, k) ==
              union_pruned_baseline(degenerate, p.influence, g, k));
    }
}

TEST_CASE("tau-adaptive definitional behavior") {
    const AttributionGraph g = [] {
        SyntheticSpec spec;
        spec.seed = 23;
        return generate_synthetic(spec);
    }();

    SUBCASE("vacuous margin always returns 1") {
        const Pipeline p = run_crossed(23);
        CHECK(tau_adaptive(p.report, p.graph, p.views, 1.0) == 1.0);
    }
    SUBCASE("identical views return 1") {
        std::vector<View> views{oracles::make_view(g, {0, 1, 2}), oracles::make_view(g, {0, 1, 2})};
        const StabilityReport report = stability_scores(views);
        CHECK(tau_adaptive(report, g, views, 0.02) == 1.0);
    }
    SUBCASE("weak strict consensus forces tau below 1") {
        // views overlapping on a single low-weight edge
        const EdgeId weak = planted_edges(g, "noise").front();
        std::vector<EdgeId> heavy = planted_edges(g, "core");
        heavy.push_back(weak);
        std::vector<View> views{oracles::make_view(g, heavy),
                                oracles::make_view(g, std::vector<EdgeId>{weak})};
        const StabilityReport report = stability_scores(views);
        const std::vector<EdgeId> c1 = consensus(report, 1.0);
        const double ir_c1 = influence_retained(g, c1);
        double ir_star = 0.0;
        for (const View& v : views) {
            ir_star = std::max(ir_star, influence_retained(g, v.edges));
        }
        REQUIRE(ir_c1 < ir_star - 0.02);
        CHECK(tau_adaptive(report, g, views, 0.02) == 0.5);
    }
    SUBCASE("returns 1 iff strict consensus is within the margin") {
        for (std::uint64_t seed = 30; seed < 36; ++seed) {
            const Pipeline p = run_crossed(seed);
            const double ir_c1 = influence_retained(p.graph, consensus(p.report, 1.0));
            double ir_star = 0.0;
            for (const View& v : p.views) {
                ir_star = std::max(ir_star, influence_retained(p.graph, v.edges));
            }
            const double tau = tau_adaptive(p.report, p.graph, p.views, 0.02);
            CHECK((tau == 1.0) == (ir_c1 >= ir_star - 0.02));
        }
    }
}

TEST_CASE("oracle best config is the IR argmax") {
    const AttributionGraph g = [] {
        SyntheticSpec spec;
        spec.seed = 29;
        return generate_synthetic(spec);
    }();

    std::vector<View> single{oracles::make_view(g, {0, 1})};
    CHECK(oracle_best_config(single, g).index == 0);

    // construct views with known IR ordering 0.7 < 0.9 > 0.8 by edge counts
    std::vector<EdgeId> small, medium, large;
    for (EdgeId e = 0; e < 40; ++e) large.push_back(e);
    for (EdgeId e = 0; e < 30; ++e) medium.push_back(e);
    for (EdgeId e = 0; e < 10; ++e) small.push_back(e);
    std::vector<View> views{oracles::make_view(g, small), oracles::make_view(g, large),
                            oracles::make_view(g, medium)};
    const OracleBest best = oracle_best_config(views, g);
    CHECK(best.index == 1);
    for (const View& v : views) {
        CHECK(best.ir >= influence_retained(g, v.edges));
    }
}
