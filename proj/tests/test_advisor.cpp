#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgbench/advisor.hpp"
#include "kgbench/scale.hpp"
#include "test_support.hpp"

using namespace kgbench;
using namespace kgbench::test;

namespace {

MetricsReport faers_metrics() {
    MetricsReport m;
    m.node_count = 14000;
    m.edge_count = 11000;
    m.scale = 25000;
    m.connectivity_density = 11000.0 / 14000.0;  // 0.79
    m.type_diversity = 4.48;
    m.class_entropy = 1.39;
    m.reltype_entropy = 2.04;
    m.semantic_richness = 7.91;
    m.class_count = 8;
    m.reltype_count = 11;
    return m;
}

WorkloadProfile dominant(int tier) {
    WorkloadProfile p;
    p.tier_weights = {0.0, 0.0, 0.0, 0.0};
    p.tier_weights[tier - 1] = 1.0;
    return p;
}

bool ranking_valid(const Recommendation& rec) {
    std::set<std::string> seen(rec.ranking.begin(), rec.ranking.end());
    return rec.ranking.size() == 3 && seen.size() == 3 && seen.count("document") &&
           seen.count("graph") && seen.count("multimodel");
}

int rank_of(const Recommendation& rec, const std::string& paradigm) {
    for (std::size_t i = 0; i < rec.ranking.size(); ++i)
        if (rec.ranking[i] == paradigm) return static_cast<int>(i);
    return 3;
}

}  // namespace

TEST_CASE("the reference graph maps each dominant tier to its paradigm") {
    const MetricsReport m = faers_metrics();

    const Recommendation t1 = advise(m, dominant(1));
    CHECK(t1.ranking[0] == "document");
    CHECK(t1.fired[0].id == "R4");

    const Recommendation t2 = advise(m, dominant(2));
    CHECK(t2.ranking[0] == "multimodel");
    CHECK(t2.fired[0].id == "R3");

    const Recommendation t3 = advise(m, dominant(3));
    CHECK(t3.ranking[0] == "graph");
    CHECK(t3.fired[0].id == "R1");

    const Recommendation t4 = advise(m, dominant(4));
    CHECK(t4.ranking[0] == "graph");
    CHECK(t4.fired[0].id == "R1");
}

TEST_CASE("static thresholds trigger graph-native when no deep tier dominates") {
    MetricsReport m = faers_metrics();
    m.semantic_richness = 8.5;
    CHECK(advise(m, dominant(1)).fired[0].id == "R2");
    CHECK(advise(m, dominant(1)).ranking[0] == "graph");

    m = faers_metrics();
    m.connectivity_density = 0.9;
    CHECK(advise(m, dominant(2)).fired[0].id == "R2");
}

TEST_CASE("fallback fires when nothing specialized matches") {
    MetricsReport m = faers_metrics();
    m.semantic_richness = 3.0;  // below the mixed band
    const Recommendation rec = advise(m, dominant(2));
    CHECK(rec.fired[0].id == "R5");
    CHECK(rec.ranking[0] == "multimodel");
    CHECK(explain(rec).find("fallback") != std::string::npos);
}

TEST_CASE("every input yields a total, deterministic ranking") {
    for (double sr : {0.0, 4.9, 5.0, 7.91, 8.0, 8.01, 10.0, 10.1, 14.0})
        for (double cd : {0.0, 0.3, 0.6, 0.79, 0.8, 0.81, 0.85, 1.4})
            for (int tier = 1; tier <= 4; ++tier) {
                MetricsReport m = faers_metrics();
                m.semantic_richness = sr;
                m.connectivity_density = cd;
                const Recommendation a = advise(m, dominant(tier));
                const Recommendation b = advise(m, dominant(tier));
                CHECK(ranking_valid(a));
                REQUIRE(a.fired.size() == 1);
                CHECK(a.ranking == b.ranking);
                CHECK(a.fired[0].id == b.fired[0].id);
            }
}

TEST_CASE("raising SR past its threshold never demotes graph-native") {
    for (int tier : {1, 2}) {
        for (double cd : {0.3, 0.7, 0.79}) {
            MetricsReport m = faers_metrics();
            m.connectivity_density = cd;
            m.semantic_richness = 7.9;
            const int before = rank_of(advise(m, dominant(tier)), "graph");
            m.semantic_richness = 8.1;
            const int after = rank_of(advise(m, dominant(tier)), "graph");
            CHECK(after <= before);
        }
        MetricsReport m = faers_metrics();
        m.connectivity_density = 0.79;
        const int before = rank_of(advise(m, dominant(tier)), "graph");
        m.connectivity_density = 0.81;
        const int after = rank_of(advise(m, dominant(tier)), "graph");
        CHECK(after <= before);
    }
}

TEST_CASE("duplication never changes the recommendation") {
    const KnowledgeGraph base = generate_synthetic(small_faers_spec(700, 0.79, 4));
    const MetricsReport m0 = compute_all(base);
    const MetricsReport m3 = compute_all(duplicate_merge(base, 3));
    for (int tier = 1; tier <= 4; ++tier) {
        const Recommendation a = advise(m0, dominant(tier));
        const Recommendation b = advise(m3, dominant(tier));
        CHECK(a.ranking == b.ranking);
        CHECK(a.fired[0].id == b.fired[0].id);
    }
}

TEST_CASE("dominant tier resolves ties upward") {
    WorkloadProfile p;
    p.tier_weights = {0.25, 0.25, 0.25, 0.25};
    CHECK(p.dominant_tier() == 4);
    p.tier_weights = {0.4, 0.4, 0.1, 0.1};
    CHECK(p.dominant_tier() == 2);
    p.tier_weights = {0.6, 0.2, 0.1, 0.1};
    CHECK(p.dominant_tier() == 1);
}

TEST_CASE("profiles must be normalized and non-negative") {
    WorkloadProfile bad;
    bad.tier_weights = {0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad.tier_weights = {-0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), DataError);
    WorkloadProfile ok;
    ok.tier_weights = {0.1, 0.2, 0.3, 0.4};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("explain is deterministic and names the fired rule") {
    const Recommendation rec = advise(faers_metrics(), dominant(4));
    const std::string a = explain(rec);
    CHECK(a == explain(rec));
    CHECK(a.find("R1") != std::string::npos);
    CHECK(a.find("1. graph") != std::string::npos);
    CHECK(a.find("adjacency") != std::string::npos);
}

TEST_CASE("threshold bands come from the config") {
    AdvisorConfig cfg;
    cfg.sr_graph_threshold = 6.0;
    MetricsReport m = faers_metrics();  // SR 7.91 now exceeds the band
    CHECK(advise(m, dominant(1), cfg).fired[0].id == "R2");

    const AdvisorConfig parsed =
        AdvisorConfig::from_json(PropertyValue{{"sr_graph_threshold", 6.0}});
    CHECK(parsed.sr_graph_threshold == 6.0);
    CHECK(parsed.cd_graph_threshold == 0.8);
}

TEST_CASE("recommendation json carries ranking, rules and inputs") {
    const Recommendation rec = advise(faers_metrics(), dominant(2));
    const PropertyValue j = rec.to_json();
    CHECK(j["ranking"][0] == "multimodel");
    CHECK(j["fired_rules"][0]["id"] == "R3");
    CHECK(j["metrics"]["semantic_richness"] == 7.91);
    CHECK(j["profile"]["dominant_tier"] == 2);
}
