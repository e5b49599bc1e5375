#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgbench/graph.hpp"
#include "test_support.hpp"

using namespace kgbench;
using namespace kgbench::test;

TEST_CASE("empty graph validates cleanly") {
    KnowledgeGraph kg;
    CHECK(validate(kg).ok());
    CHECK(kg.class_set().empty());
    CHECK(kg.rel_type_set().empty());
}

TEST_CASE("dangling edge endpoint is reported with the edge id") {
    KnowledgeGraph kg;
    kg.nodes.push_back(make_node("a", "Case"));
    kg.edges.push_back(make_edge("e1", "REL", "a", "missing"));
    const auto report = validate(kg);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::DanglingEdge);
    CHECK(report.violations[0].message.find("e1") != std::string::npos);
    CHECK(report.violations[0].message.find("missing") != std::string::npos);
}

TEST_CASE("duplicate node ids are reported once per extra occurrence") {
    KnowledgeGraph kg;
    kg.nodes.push_back(make_node("c1", "Case"));
    kg.nodes.push_back(make_node("c1", "Drug"));
    const auto report = validate(kg);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::DuplicateNodeId);
    CHECK(report.violations[0].message.find("c1") != std::string::npos);
    CHECK(report.violations[0].message.find("Case") != std::string::npos);
    CHECK(report.violations[0].message.find("Drug") != std::string::npos);
}

TEST_CASE("unlabeled nodes and duplicate edge ids are violations") {
    KnowledgeGraph kg;
    kg.nodes.push_back(make_node("a", ""));
    kg.nodes.push_back(make_node("b", "Case"));
    kg.edges.push_back(make_edge("e", "R", "a", "b"));
    kg.edges.push_back(make_edge("e", "R", "b", "a"));
    const auto report = validate(kg);
    REQUIRE(report.violations.size() == 2);
    CHECK(report.violations[0].kind == Violation::Kind::UnlabeledNode);
    CHECK(report.violations[1].kind == Violation::Kind::DuplicateEdgeId);
}

TEST_CASE("label histogram counts per class") {
    KnowledgeGraph kg;
    kg.nodes.push_back(make_node("a1", "A"));
    kg.nodes.push_back(make_node("a2", "A"));
    kg.nodes.push_back(make_node("b1", "B"));
    const auto h = label_histogram(kg);
    CHECK(h.size() == 2);
    CHECK(h.at("A") == 2);
    CHECK(h.at("B") == 1);
}

TEST_CASE("uniform construction yields uniform histograms") {
    KnowledgeGraph kg;
    for (int c = 0; c < 8; ++c)
        for (int i = 0; i < 10; ++i)
            kg.nodes.push_back(make_node("n" + std::to_string(c) + "_" + std::to_string(i),
                                         "C" + std::to_string(c)));
    for (int r = 0; r < 11; ++r)
        for (int i = 0; i < 10; ++i)
            kg.edges.push_back(make_edge("e" + std::to_string(r) + "_" + std::to_string(i),
                                         "R" + std::to_string(r), kg.nodes[i].id,
                                         kg.nodes[i + 10].id));
    for (const auto& [label, count] : label_histogram(kg)) CHECK(count == 10);
    for (const auto& [rel, count] : reltype_histogram(kg)) CHECK(count == 10);
}

TEST_CASE("single edge type histogram") {
    KnowledgeGraph kg;
    kg.nodes.push_back(make_node("a", "A"));
    kg.edges.push_back(make_edge("e", "X", "a", "a"));
    const auto h = reltype_histogram(kg);
    CHECK(h.size() == 1);
    CHECK(h.at("X") == 1);
}

TEST_CASE("histogram totals equal element counts on random graphs") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const KnowledgeGraph kg = random_graph(seed);
        std::uint64_t nodes = 0, edges = 0;
        for (const auto& [label, c] : label_histogram(kg)) nodes += c;
        for (const auto& [rel, c] : reltype_histogram(kg)) edges += c;
        CHECK(nodes == kg.nodes.size());
        CHECK(edges == kg.edges.size());
        CHECK(label_histogram(kg).size() == kg.class_set().size());
        CHECK(reltype_histogram(kg).size() == kg.rel_type_set().size());
    }
}

TEST_CASE("validate is empty iff endpoints resolve and ids are unique") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        KnowledgeGraph kg = random_graph(seed);
        // brute-force cross reference
        bool ok = true;
        std::set<std::string> ids;
        for (const auto& n : kg.nodes) {
            if (!ids.insert(n.id).second || n.label.empty()) ok = false;
        }
        std::set<std::string> eids;
        for (const auto& e : kg.edges) {
            if (!eids.insert(e.id).second) ok = false;
            if (!ids.count(e.from) || !ids.count(e.to)) ok = false;
        }
        CHECK(validate(kg).ok() == ok);
    }
}

TEST_CASE("structural equality ignores order, catches differences") {
    KnowledgeGraph a = random_graph(7);
    KnowledgeGraph b = a;
    std::reverse(b.nodes.begin(), b.nodes.end());
    std::reverse(b.edges.begin(), b.edges.end());
    CHECK(structurally_equal(a, b));

    if (!b.nodes.empty()) {
        b.nodes[0].properties["mutation"] = 1;
        CHECK(!structurally_equal(a, b));
    }
}

TEST_CASE("property trees survive nesting untouched") {
    const PropertyValue tree = PropertyValue::parse(
        R"({"dates":{"start":"2004-01-01","spans":[1,2.5,{"deep":null}]},"flag":true})");
    KnowledgeGraph kg;
    kg.nodes.push_back(make_node("c1", "Case", tree));
    CHECK(kg.nodes[0].properties == tree);
    CHECK(kg.nodes[0].properties["dates"]["spans"][2]["deep"].is_null());
}
