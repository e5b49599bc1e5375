#include "kgbench/graph.hpp"

#include <unordered_map>
#include <unordered_set>

namespace kgbench {

std::set<std::string> KnowledgeGraph::class_set() const {
    std::set<std::string> out;
    for (const auto& n : nodes) out.insert(n.label);
    return out;
}

std::set<std::string> KnowledgeGraph::rel_type_set() const {
    std::set<std::string> out;
    for (const auto& e : edges) out.insert(e.rel_type);
    return out;
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "\n";
        out += v.message;
    }
    return out;
}

ValidationReport validate(const KnowledgeGraph& kg) {
    ValidationReport report;
    std::unordered_map<std::string, const Node*> by_id;
    by_id.reserve(kg.nodes.size());

    for (const auto& n : kg.nodes) {
        auto [it, inserted] = by_id.emplace(n.id, &n);
        if (!inserted) {
            std::string msg = "duplicate node id \"" + n.id + "\"";
            if (it->second->label != n.label)
                msg += " (labels \"" + it->second->label + "\" and \"" + n.label + "\")";
            report.violations.push_back({Violation::Kind::DuplicateNodeId, msg});
        }
        if (n.label.empty())
            report.violations.push_back(
                {Violation::Kind::UnlabeledNode, "node \"" + n.id + "\" has no class label"});
    }

    std::unordered_set<std::string> edge_ids;
    edge_ids.reserve(kg.edges.size());
    for (const auto& e : kg.edges) {
        if (!edge_ids.insert(e.id).second)
            report.violations.push_back(
                {Violation::Kind::DuplicateEdgeId, "duplicate edge id \"" + e.id + "\""});
        if (!by_id.count(e.from))
            report.violations.push_back(
                {Violation::Kind::DanglingEdge,
                 "edge \"" + e.id + "\": from-node \"" + e.from + "\" does not exist"});
        if (!by_id.count(e.to))
            report.violations.push_back(
                {Violation::Kind::DanglingEdge,
                 "edge \"" + e.id + "\": to-node \"" + e.to + "\" does not exist"});
    }
    return report;
}

std::map<std::string, std::uint64_t> label_histogram(const KnowledgeGraph& kg) {
    std::map<std::string, std::uint64_t> h;
    for (const auto& n : kg.nodes) ++h[n.label];
    return h;
}

std::map<std::string, std::uint64_t> reltype_histogram(const KnowledgeGraph& kg) {
    std::map<std::string, std::uint64_t> h;
    for (const auto& e : kg.edges) ++h[e.rel_type];
    return h;
}

bool structurally_equal(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;

    std::unordered_map<std::string, const Node*> an;
    an.reserve(a.nodes.size());
    for (const auto& n : a.nodes) an.emplace(n.id, &n);
    for (const auto& n : b.nodes) {
        auto it = an.find(n.id);
        if (it == an.end()) return false;
        if (it->second->label != n.label || it->second->properties != n.properties) return false;
    }

    std::unordered_map<std::string, const Edge*> ae;
    ae.reserve(a.edges.size());
    for (const auto& e : a.edges) ae.emplace(e.id, &e);
    for (const auto& e : b.edges) {
        auto it = ae.find(e.id);
        if (it == ae.end()) return false;
        const Edge& x = *it->second;
        if (x.rel_type != e.rel_type || x.from != e.from || x.to != e.to ||
            x.properties != e.properties)
            return false;
    }
    return true;
}

}  // namespace kgbench
