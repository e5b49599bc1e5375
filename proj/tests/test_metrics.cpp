#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "kgbench/metrics.hpp"
#include "kgbench/scale.hpp"
#include "test_support.hpp"

using namespace kgbench;
using namespace kgbench::test;

namespace {

KnowledgeGraph uniform_graph(int classes, int reltypes, int per_class, int per_type) {
    KnowledgeGraph kg;
    for (int c = 0; c < classes; ++c)
        for (int i = 0; i < per_class; ++i)
            kg.nodes.push_back(make_node("n" + std::to_string(c) + "_" + std::to_string(i),
                                         "C" + std::to_string(c)));
    for (int r = 0; r < reltypes; ++r)
        for (int i = 0; i < per_type; ++i)
            kg.edges.push_back(make_edge("e" + std::to_string(r) + "_" + std::to_string(i),
                                         "R" + std::to_string(r), kg.nodes[0].id,
                                         kg.nodes[1 % kg.nodes.size()].id));
    return kg;
}

}  // namespace

TEST_CASE("scale is |V| + |E|") {
    KnowledgeGraph kg;
    CHECK(scale_metric(kg) == 0);
    kg = uniform_graph(2, 1, 3, 4);
    CHECK(scale_metric(kg) == 6 + 4);
}

TEST_CASE("connectivity density") {
    KnowledgeGraph kg = uniform_graph(1, 0, 3, 0);
    CHECK(connectivity_density(kg) == 0.0);

    // complete directed triangle: 3 nodes, 6 edges
    KnowledgeGraph tri;
    for (int i = 0; i < 3; ++i) tri.nodes.push_back(make_node("n" + std::to_string(i), "N"));
    int e = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                tri.edges.push_back(
                    make_edge("e" + std::to_string(e++), "R", tri.nodes[i].id, tri.nodes[j].id));
    CHECK(connectivity_density(tri) == doctest::Approx(2.0));

    KnowledgeGraph empty;
    CHECK_THROWS_AS(connectivity_density(empty), UndefinedMetric);
}

TEST_CASE("type diversity fixtures") {
    CHECK(type_diversity(uniform_graph(8, 11, 2, 1)) ==
          doctest::Approx(4.477336814478207).epsilon(1e-12));
    CHECK(round2(type_diversity(uniform_graph(8, 11, 2, 1))) == doctest::Approx(4.48));
    CHECK(type_diversity(uniform_graph(1, 1, 2, 1)) == doctest::Approx(0.0));
    CHECK(type_diversity(uniform_graph(2, 2, 2, 1)) ==
          doctest::Approx(1.3862943611198906).epsilon(1e-12));

    KnowledgeGraph no_edges = uniform_graph(2, 0, 2, 0);
    CHECK_THROWS_AS(type_diversity(no_edges), UndefinedMetric);
    try {
        type_diversity(no_edges);
    } catch (const UndefinedMetric& e) {
        CHECK(std::string(e.what()).find("|R|") != std::string::npos);
    }
}

TEST_CASE("entropy fixtures") {
    CHECK(class_entropy(uniform_graph(1, 1, 5, 1)) == 0.0);
    CHECK(class_entropy(uniform_graph(8, 1, 10, 1)) ==
          doctest::Approx(std::log(8.0)).epsilon(1e-12));
    KnowledgeGraph empty;
    CHECK_THROWS_AS(class_entropy(empty), UndefinedMetric);
    CHECK_THROWS_AS(reltype_entropy(uniform_graph(2, 0, 2, 0)), UndefinedMetric);
}

TEST_CASE("semantic richness is the exact sum of its components") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        KnowledgeGraph kg = random_graph(seed);
        if (kg.edges.empty()) continue;
        const MetricsReport r = compute_all(kg);
        CHECK(r.semantic_richness == r.type_diversity + r.class_entropy + r.reltype_entropy);
        CHECK(r.scale == r.node_count + r.edge_count);
        CHECK(r.class_entropy >= 0.0);
        CHECK(r.class_entropy <= std::log(static_cast<double>(r.class_count)) + 1e-12);
        CHECK(r.reltype_entropy >= 0.0);
        CHECK(r.reltype_entropy <= std::log(static_cast<double>(r.reltype_count)) + 1e-12);
    }
}

TEST_CASE("metrics match an independent brute-force recomputation") {
    SyntheticSpec spec;
    spec.node_count = 600;
    spec.class_count = 5;
    spec.reltype_count = 7;
    spec.label_dist = SyntheticSpec::LabelDist::Zipf;
    spec.zipf_s = 1.1;
    spec.target_cd = 0.9;
    spec.seed = 99;
    const KnowledgeGraph kg = generate_synthetic(spec);
    const MetricsReport r = compute_all(kg);
    const BruteForceMetrics oracle = brute_force_metrics(kg);
    CHECK(r.type_diversity == doctest::Approx(oracle.d_types).epsilon(1e-12));
    CHECK(r.class_entropy == doctest::Approx(oracle.h_c).epsilon(1e-12));
    CHECK(r.reltype_entropy == doctest::Approx(oracle.h_r).epsilon(1e-12));
    CHECK(r.semantic_richness == doctest::Approx(oracle.sr).epsilon(1e-12));
    CHECK(r.connectivity_density == doctest::Approx(oracle.cd).epsilon(1e-12));

    for (std::uint64_t seed = 50; seed < 70; ++seed) {
        const KnowledgeGraph g = random_graph(seed);
        if (g.edges.empty()) continue;
        const MetricsReport m = compute_all(g);
        const BruteForceMetrics o = brute_force_metrics(g);
        CHECK(m.semantic_richness == doctest::Approx(o.sr).epsilon(1e-12));
    }
}

TEST_CASE("entropy is maximal iff the histogram is uniform") {
    const KnowledgeGraph uniform = uniform_graph(6, 1, 10, 5);
    CHECK(class_entropy(uniform) == doctest::Approx(std::log(6.0)).epsilon(1e-12));

    KnowledgeGraph skewed = uniform_graph(6, 1, 10, 5);
    skewed.nodes.push_back(make_node("extra", "C0"));
    CHECK(class_entropy(skewed) < std::log(6.0));
}

TEST_CASE("insertion order never changes a metric") {
    KnowledgeGraph kg = random_graph(11);
    if (kg.edges.empty()) {
        kg.edges.push_back(make_edge("e0", "R", kg.nodes[0].id, kg.nodes[0].id));
    }
    KnowledgeGraph permuted = kg;
    std::mt19937_64 rng(3);
    std::shuffle(permuted.nodes.begin(), permuted.nodes.end(), rng);
    std::shuffle(permuted.edges.begin(), permuted.edges.end(), rng);
    const MetricsReport a = compute_all(kg);
    const MetricsReport b = compute_all(permuted);
    CHECK(a.semantic_richness == b.semantic_richness);
    CHECK(a.class_entropy == b.class_entropy);
    CHECK(a.reltype_entropy == b.reltype_entropy);
    CHECK(a.connectivity_density == b.connectivity_density);
}

TEST_CASE("duplication leaves every ratio metric bit-identical") {
    SyntheticSpec spec = small_faers_spec(700, 0.79, 5);
    const KnowledgeGraph base = generate_synthetic(spec);
    const MetricsReport r0 = compute_all(base);
    for (unsigned n : {1u, 3u}) {
        const MetricsReport rn = compute_all(duplicate_merge(base, n));
        CHECK(rn.node_count == base.nodes.size() * (1ull << n));
        CHECK(rn.edge_count == base.edges.size() * (1ull << n));
        CHECK(rn.scale == r0.scale * (1ull << n));
        CHECK(std::memcmp(&rn.connectivity_density, &r0.connectivity_density, sizeof(double)) == 0);
        CHECK(std::memcmp(&rn.type_diversity, &r0.type_diversity, sizeof(double)) == 0);
        CHECK(std::memcmp(&rn.class_entropy, &r0.class_entropy, sizeof(double)) == 0);
        CHECK(std::memcmp(&rn.reltype_entropy, &r0.reltype_entropy, sizeof(double)) == 0);
        CHECK(std::memcmp(&rn.semantic_richness, &r0.semantic_richness, sizeof(double)) == 0);
    }
}

TEST_CASE("rounding is half-up at two decimals") {
    CHECK(round2(4.477) == doctest::Approx(4.48));
    CHECK(round2(0.785) == doctest::Approx(0.79));
    CHECK(round2(1.394999) == doctest::Approx(1.39));
    CHECK(round2(2.0) == doctest::Approx(2.0));
}

TEST_CASE("report json round-trips at full precision") {
    const KnowledgeGraph kg = uniform_graph(3, 2, 4, 5);
    const MetricsReport r = compute_all(kg);
    const MetricsReport back = MetricsReport::from_json(r.to_json());
    CHECK(back.semantic_richness == r.semantic_richness);
    CHECK(back.connectivity_density == r.connectivity_density);
    CHECK(back.node_count == r.node_count);
}

TEST_CASE("table output mirrors the report at two decimals") {
    const KnowledgeGraph kg = uniform_graph(8, 11, 10, 10);
    const std::string table = format_metrics_table({compute_all(kg)});
    CHECK(table.find("Dtypes") != std::string::npos);
    CHECK(table.find("4.48") != std::string::npos);
}
