#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgbench/property_value.hpp"

namespace kgbench {

// A node carries exactly one class label plus an attribute tree.
struct Node {
    std::string id;
    std::string label;
    PropertyValue properties = PropertyValue::object();
};

// Directed, typed edge between two node ids.
struct Edge {
    std::string id;
    std::string rel_type;
    std::string from;
    std::string to;
    PropertyValue properties = PropertyValue::object();
};

// In-memory labelled property graph. Immutable after load by convention:
// loaders and generators populate it once, everything downstream only reads.
// The class and relationship-type sets are derived from the elements
// actually present, never stored separately.
struct KnowledgeGraph {
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    std::set<std::string> class_set() const;
    std::set<std::string> rel_type_set() const;
};

struct Violation {
    enum class Kind { DuplicateNodeId, DuplicateEdgeId, DanglingEdge, UnlabeledNode };
    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Reports every duplicate id, dangling edge endpoint, and unlabeled node.
// An empty report means the graph satisfies all structural invariants.
ValidationReport validate(const KnowledgeGraph& kg);

// Node count per class label. Counts sum to |V|.
std::map<std::string, std::uint64_t> label_histogram(const KnowledgeGraph& kg);

// Edge count per relationship type. Counts sum to |E|.
std::map<std::string, std::uint64_t> reltype_histogram(const KnowledgeGraph& kg);

// Order-insensitive equality on id sets, labels, rel types and property trees.
bool structurally_equal(const KnowledgeGraph& a, const KnowledgeGraph& b);

}  // namespace kgbench
