#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "kgbench/convert.hpp"
#include "kgbench/metrics.hpp"
#include "kgbench/scale.hpp"
#include "test_support.hpp"

using namespace kgbench;
using namespace kgbench::test;

namespace {

std::string slurp_tree(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::ostringstream all;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        all << f.lexically_relative(dir).string() << "\n" << in.rdbuf() << "\n";
    }
    return all.str();
}

}  // namespace

TEST_CASE("n = 0 is the identity") {
    const KnowledgeGraph kg = random_graph(3);
    const KnowledgeGraph out = duplicate_merge(kg, 0);
    CHECK(structurally_equal(kg, out));
}

TEST_CASE("duplication hits the exact predicted counts") {
    SyntheticSpec spec = small_faers_spec(1400, 11.0 / 14.0, 7);
    const KnowledgeGraph base = generate_synthetic(spec);
    REQUIRE(base.nodes.size() == 1400);
    REQUIRE(base.edges.size() == 1100);

    const KnowledgeGraph eight = duplicate_merge(base, 3);
    CHECK(eight.nodes.size() == 11200);
    CHECK(eight.edges.size() == 8800);
    CHECK(validate(eight).ok());

    const ScalePlan plan = plan_scale(base, 7);
    CHECK(plan.factor() == 128);
    CHECK(plan.predicted_nodes() == 179200);
    CHECK(plan.predicted_edges() == 140800);
}

TEST_CASE("copies are disjoint and structurally isomorphic") {
    const KnowledgeGraph base = generate_synthetic(small_faers_spec(160, 0.75, 11));
    const KnowledgeGraph doubled = duplicate_merge(base, 1);
    REQUIRE(doubled.nodes.size() == 2 * base.nodes.size());

    std::set<std::string> ids;
    for (const auto& n : doubled.nodes) CHECK(ids.insert(n.id).second);

    // Every copy is the source with a per-copy id suffix and nothing else.
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        const Node& orig = base.nodes[i];
        CHECK(doubled.nodes[i].id == orig.id + "#0");
        CHECK(doubled.nodes[i + base.nodes.size()].id == orig.id + "#1");
        CHECK(doubled.nodes[i + base.nodes.size()].label == orig.label);
        CHECK(doubled.nodes[i + base.nodes.size()].properties == orig.properties);
    }
    for (std::size_t i = 0; i < base.edges.size(); ++i) {
        const Edge& orig = base.edges[i];
        const Edge& copy = doubled.edges[i + base.edges.size()];
        CHECK(copy.rel_type == orig.rel_type);
        CHECK(copy.from == orig.from + "#1");
        CHECK(copy.to == orig.to + "#1");
    }
}

TEST_CASE("repeated duplication never collides, suffixed base ids included") {
    KnowledgeGraph tricky;
    tricky.nodes.push_back(make_node("a", "X"));
    tricky.nodes.push_back(make_node("a#1", "X"));
    tricky.nodes.push_back(make_node("a#0#1", "X"));
    const KnowledgeGraph out = duplicate_merge(duplicate_merge(tricky, 2), 2);
    CHECK(out.nodes.size() == 3 * 16);
    CHECK(validate(out).ok());
}

TEST_CASE("budget refusal reports predicted counts") {
    const KnowledgeGraph base = generate_synthetic(small_faers_spec(160, 0.75, 11));
    try {
        duplicate_merge(base, 10, 1000);
        FAIL("expected refusal");
    } catch (const DataError& e) {
        const std::string what = e.what();
        CHECK(what.find(std::to_string(base.nodes.size() * 1024)) != std::string::npos);
        CHECK(what.find("1000") != std::string::npos);
    }
}

TEST_CASE("a + b duplications equal nested duplication up to id renaming") {
    const KnowledgeGraph base = generate_synthetic(small_faers_spec(120, 0.6, 13));
    const KnowledgeGraph direct = duplicate_merge(base, 3);
    const KnowledgeGraph nested = duplicate_merge(duplicate_merge(base, 1), 2);
    CHECK(direct.nodes.size() == nested.nodes.size());
    CHECK(direct.edges.size() == nested.edges.size());
    // multiset of labelled components: compare metric profiles, which are
    // invariant under id renaming
    const MetricsReport a = compute_all(direct);
    const MetricsReport b = compute_all(nested);
    CHECK(a.class_entropy == b.class_entropy);
    CHECK(a.reltype_entropy == b.reltype_entropy);
    CHECK(a.connectivity_density == b.connectivity_density);
    CHECK(label_histogram(direct) == label_histogram(nested));
    CHECK(reltype_histogram(direct) == reltype_histogram(nested));
}

TEST_CASE("generator honors exact class and reltype cardinalities") {
    SyntheticSpec spec;
    spec.node_count = 8000;
    spec.class_count = 8;
    spec.reltype_count = 11;
    spec.target_cd = 0.79;
    spec.seed = 42;
    const KnowledgeGraph kg = generate_synthetic(spec);
    CHECK(kg.nodes.size() == 8000);
    CHECK(kg.class_set().size() == 8);
    CHECK(kg.rel_type_set().size() == 11);
    CHECK(validate(kg).ok());
    const double realized = static_cast<double>(kg.edges.size()) / 8000.0;
    CHECK(std::abs(realized - 0.79) <= 0.01 * 0.79);

    const MetricsReport r = compute_all(kg);
    CHECK(r.type_diversity == doctest::Approx(4.477336814478207).epsilon(1e-9));
    CHECK(r.class_entropy == doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("one class and zero edges is allowed; reltypes then must be zero") {
    SyntheticSpec spec;
    spec.node_count = 10;
    spec.class_count = 1;
    spec.reltype_count = 0;
    spec.target_cd = 0.0;
    const KnowledgeGraph kg = generate_synthetic(spec);
    CHECK(kg.nodes.size() == 10);
    CHECK(kg.edges.empty());
    CHECK(scale_metric(kg) == 10);
    CHECK_THROWS_AS(semantic_richness(kg), UndefinedMetric);
}

TEST_CASE("infeasible targets are refused with the feasible bound") {
    SyntheticSpec spec;
    spec.node_count = 100;
    spec.class_count = 2;
    spec.reltype_count = 11;
    spec.target_cd = 0.05;  // 5 edges cannot realize 11 types
    CHECK_THROWS_WITH_AS(generate_synthetic(spec), doctest::Contains("smallest feasible"),
                         DataError);

    spec.reltype_count = 0;
    spec.target_cd = 0.5;
    CHECK_THROWS_AS(generate_synthetic(spec), DataError);

    spec.reltype_count = 3;
    spec.target_cd = 0.0;
    CHECK_THROWS_AS(generate_synthetic(spec), DataError);
}

TEST_CASE("same seed, byte-identical bundles; different seed differs") {
    const SyntheticSpec spec = small_faers_spec(500, 0.8, 2024);
    TempDir a("gen-a"), b("gen-b"), c("gen-c");
    write_csv_bundle(a.path, generate_synthetic(spec));
    write_csv_bundle(b.path, generate_synthetic(spec));
    CHECK(slurp_tree(a.path) == slurp_tree(b.path));

    SyntheticSpec other = spec;
    other.seed = 2025;
    write_csv_bundle(c.path, generate_synthetic(other));
    CHECK(slurp_tree(a.path) != slurp_tree(c.path));
}

TEST_CASE("schema rules constrain endpoint classes") {
    const KnowledgeGraph kg = generate_synthetic(small_faers_spec(800, 0.9, 31));
    std::map<std::string, std::string> label_of;
    for (const auto& n : kg.nodes) label_of[n.id] = n.label;
    for (const auto& e : kg.edges) {
        if (e.rel_type == "FALLS_UNDER") {
            CHECK(label_of[e.from] == "Case");
            CHECK(label_of[e.to] == "AgeGroup");
        }
        if (e.rel_type == "PRODUCED_BY") {
            CHECK(label_of[e.from] == "Drug");
            CHECK(label_of[e.to] == "Manufacturer");
        }
    }
}

TEST_CASE("spec json round-trips") {
    const SyntheticSpec spec = small_faers_spec(500, 0.8, 77);
    const SyntheticSpec back = SyntheticSpec::from_json(spec.to_json());
    CHECK(back.to_json() == spec.to_json());
    CHECK(structurally_equal(generate_synthetic(back), generate_synthetic(spec)));
}

TEST_CASE("metric invariance chain holds for any input graph") {
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
        KnowledgeGraph kg = random_graph(seed);
        if (kg.edges.empty() || !validate(kg).ok()) continue;
        const MetricsReport before = compute_all(kg);
        const MetricsReport after = compute_all(duplicate_merge(kg, 2));
        CHECK(before.connectivity_density == after.connectivity_density);
        CHECK(before.class_entropy == after.class_entropy);
        CHECK(before.reltype_entropy == after.reltype_entropy);
        CHECK(before.type_diversity == after.type_diversity);
        CHECK(before.semantic_richness == after.semantic_richness);
    }
}
