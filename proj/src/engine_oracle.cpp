#include <unordered_set>

#include "engine_support.hpp"
#include "kgbench/engines.hpp"

namespace kgbench {
namespace {

// Evaluates the logical query by brute force: every scan walks the full node
// vector, every hop walks the full edge vector, every endpoint resolution
// walks the node vector again. No indexes, no caches, nothing to clear.
class OracleEngine final : public Backend {
public:
    explicit OracleEngine(std::shared_ptr<const KnowledgeGraph> kg) : kg_(std::move(kg)) {
        paradigm_ = "oracle";
    }

    const std::string& paradigm() const override { return paradigm_; }

    std::uint64_t element_count() const override {
        return kg_->nodes.size() + kg_->edges.size();
    }

    std::vector<std::string> materialized_caches() const override { return {}; }

protected:
    void drop_caches() override {}

    ResultSet do_execute(const ExecutablePlan& plan) override {
        detail::check_plan(plan, paradigm_, kg_->class_set(), kg_->rel_type_set());
        const auto slots = detail::bind_slots(plan.spec);

        using Row = std::vector<const Node*>;
        std::vector<Row> rows;
        ResultSet result;

        for (const auto& stage : plan.spec.stages) {
            if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
                for (const auto& node : kg_->nodes)
                    if (node.label == scan->label && eval_predicates(scan->predicates, node.properties))
                        rows.push_back({&node});
            } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
                const std::size_t src = slots.at(expand->source);
                std::vector<Row> next;
                for (const auto& row : rows) {
                    const std::string& anchor = row[src]->id;
                    for (const auto& edge : kg_->edges) {
                        if (edge.rel_type != expand->rel_type) continue;
                        const bool out = expand->dir == ExpandStage::Dir::Out;
                        if ((out ? edge.from : edge.to) != anchor) continue;
                        const Node* target = find_node(out ? edge.to : edge.from);
                        if (!target) continue;
                        if (!expand->target_label.empty() && target->label != expand->target_label)
                            continue;
                        if (!eval_predicates(expand->predicates, target->properties)) continue;
                        Row extended = row;
                        extended.push_back(target);
                        next.push_back(std::move(extended));
                    }
                }
                rows = std::move(next);
            } else if (const auto* nbh = std::get_if<NeighborhoodStage>(&stage)) {
                const std::size_t src = slots.at(nbh->source);
                std::vector<Row> next;
                for (const auto& row : rows) {
                    for (const Node* reached : neighborhood(row[src]->id, nbh->max_depth)) {
                        Row extended = row;
                        extended.push_back(reached);
                        next.push_back(std::move(extended));
                    }
                }
                rows = std::move(next);
            } else if (const auto* project = std::get_if<ProjectStage>(&stage)) {
                for (const auto& col : project->columns) result.columns.push_back(col.name);
                result.rows.reserve(rows.size());
                for (const auto& row : rows) {
                    std::vector<PropertyValue> out;
                    out.reserve(project->columns.size());
                    for (const auto& col : project->columns) {
                        const Node* node = row[slots.at(col.source)];
                        switch (col.attr) {
                            case ProjectColumn::Attr::Id: out.emplace_back(node->id); break;
                            case ProjectColumn::Attr::Label: out.emplace_back(node->label); break;
                            case ProjectColumn::Attr::Property: {
                                const auto it = node->properties.find(col.field);
                                out.push_back(it == node->properties.end() ? PropertyValue()
                                                                           : *it);
                                break;
                            }
                        }
                    }
                    result.rows.push_back(std::move(out));
                }
            }
        }
        return result;
    }

private:
    const Node* find_node(const std::string& id) const {
        for (const auto& node : kg_->nodes)
            if (node.id == id) return &node;
        return nullptr;
    }

    // Distinct nodes within max_depth undirected hops, start excluded.
    std::vector<const Node*> neighborhood(const std::string& start, unsigned max_depth) const {
        std::unordered_set<std::string> visited{start};
        std::vector<std::string> frontier{start};
        std::vector<const Node*> reached;
        for (unsigned depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
            std::vector<std::string> next;
            for (const auto& id : frontier) {
                for (const auto& edge : kg_->edges) {
                    const std::string* other = nullptr;
                    if (edge.from == id) other = &edge.to;
                    else if (edge.to == id) other = &edge.from;
                    else continue;
                    if (visited.insert(*other).second) {
                        if (const Node* node = find_node(*other)) {
                            reached.push_back(node);
                            next.push_back(*other);
                        }
                    }
                }
            }
            frontier = std::move(next);
        }
        return reached;
    }

    std::shared_ptr<const KnowledgeGraph> kg_;
    std::string paradigm_;
};

}  // namespace

std::unique_ptr<Backend> make_oracle_engine(std::shared_ptr<const KnowledgeGraph> kg) {
    return std::make_unique<OracleEngine>(std::move(kg));
}

}  // namespace kgbench
