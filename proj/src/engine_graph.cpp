#include <optional>
#include <unordered_map>

#include "engine_support.hpp"
#include "kgbench/engines.hpp"

namespace kgbench {
namespace {

// Adjacency-optimized storage: per-node out/in lists carrying (rel, edge,
// other) triples are the primary representation, built once at ingest.
// The only lazy secondary structure is the label index.
class GraphEngine final : public Backend {
public:
    explicit GraphEngine(std::shared_ptr<const KnowledgeGraph> kg) : source_(std::move(kg)) {
        paradigm_ = "graph";
        nodes_.reserve(source_->nodes.size());
        node_by_id_.reserve(source_->nodes.size());
        for (const auto& n : source_->nodes) {
            const auto idx = static_cast<std::uint32_t>(nodes_.size());
            if (!node_by_id_.emplace(n.id, idx).second)
                throw IngestError("duplicate node id \"" + n.id + "\"");
            nodes_.push_back({&n, intern(label_ids_, label_names_, n.label)});
        }
        out_.resize(nodes_.size());
        in_.resize(nodes_.size());
        edges_.reserve(source_->edges.size());
        for (const auto& e : source_->edges) {
            const auto from = node_by_id_.find(e.from);
            const auto to = node_by_id_.find(e.to);
            if (from == node_by_id_.end() || to == node_by_id_.end())
                throw IngestError("edge \"" + e.id + "\" references a missing node");
            const auto rel = intern(rel_ids_, rel_names_, e.rel_type);
            const auto edge_idx = static_cast<std::uint32_t>(edges_.size());
            edges_.push_back({&e, rel, from->second, to->second});
            out_[from->second].push_back({rel, edge_idx, to->second});
            in_[to->second].push_back({rel, edge_idx, from->second});
        }
    }

    const std::string& paradigm() const override { return paradigm_; }

    std::uint64_t element_count() const override { return nodes_.size() + edges_.size(); }

    std::vector<std::string> materialized_caches() const override {
        std::vector<std::string> out;
        if (label_index_) out.push_back("label-index");
        return out;
    }

protected:
    void drop_caches() override { label_index_.reset(); }

    ResultSet do_execute(const ExecutablePlan& plan) override {
        detail::check_plan(plan, paradigm_, {label_names_.begin(), label_names_.end()},
                           {rel_names_.begin(), rel_names_.end()});
        const auto slots = detail::bind_slots(plan.spec);

        using Row = std::vector<std::uint32_t>;
        std::vector<Row> rows;
        ResultSet result;

        for (const auto& stage : plan.spec.stages) {
            if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
                const auto label = lookup(label_ids_, scan->label);
                if (!label) continue;  // empty dataset
                ensure_label_index();
                for (std::uint32_t idx : (*label_index_)[*label])
                    if (eval_predicates(scan->predicates, nodes_[idx].node->properties))
                        rows.push_back({idx});
            } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
                const auto rel = lookup(rel_ids_, expand->rel_type);
                const auto target_label = expand->target_label.empty()
                                              ? std::optional<std::uint32_t>{}
                                              : lookup(label_ids_, expand->target_label);
                std::vector<Row> next;
                if (rel && (expand->target_label.empty() || target_label)) {
                    const std::size_t src = slots.at(expand->source);
                    const bool outbound = expand->dir == ExpandStage::Dir::Out;
                    for (const auto& row : rows) {
                        const auto& adjacency = outbound ? out_[row[src]] : in_[row[src]];
                        for (const auto& step : adjacency) {
                            if (step.rel != *rel) continue;
                            if (target_label && nodes_[step.other].label != *target_label)
                                continue;
                            if (!eval_predicates(expand->predicates,
                                                 nodes_[step.other].node->properties))
                                continue;
                            Row extended = row;
                            extended.push_back(step.other);
                            next.push_back(std::move(extended));
                        }
                    }
                }
                rows = std::move(next);
            } else if (const auto* nbh = std::get_if<NeighborhoodStage>(&stage)) {
                const std::size_t src = slots.at(nbh->source);
                std::vector<Row> next;
                std::vector<std::uint32_t> reached;
                for (const auto& row : rows) {
                    reached.clear();
                    collect_neighborhood(row[src], nbh->max_depth, reached);
                    for (std::uint32_t other : reached) {
                        Row extended = row;
                        extended.push_back(other);
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
                        const auto& entry = nodes_[row[slots.at(col.source)]];
                        switch (col.attr) {
                            case ProjectColumn::Attr::Id: out.emplace_back(entry.node->id); break;
                            case ProjectColumn::Attr::Label:
                                out.emplace_back(label_names_[entry.label]);
                                break;
                            case ProjectColumn::Attr::Property: {
                                const auto it = entry.node->properties.find(col.field);
                                out.push_back(it == entry.node->properties.end() ? PropertyValue()
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
    struct NodeEntry {
        const Node* node;
        std::uint32_t label;
    };
    struct EdgeEntry {
        const Edge* edge;
        std::uint32_t rel;
        std::uint32_t from, to;
    };
    struct Adjacent {
        std::uint32_t rel;
        std::uint32_t edge;
        std::uint32_t other;
    };

    static std::uint32_t intern(std::map<std::string, std::uint32_t>& ids,
                                std::vector<std::string>& names, const std::string& name) {
        const auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(names.size());
        names.push_back(name);
        ids.emplace(name, id);
        return id;
    }

    static std::optional<std::uint32_t> lookup(const std::map<std::string, std::uint32_t>& ids,
                                               const std::string& name) {
        const auto it = ids.find(name);
        if (it == ids.end()) return std::nullopt;
        return it->second;
    }

    void ensure_label_index() {
        if (label_index_) return;
        label_index_.emplace(label_names_.size());
        for (std::uint32_t idx = 0; idx < nodes_.size(); ++idx)
            (*label_index_)[nodes_[idx].label].push_back(idx);
    }

    // Distinct nodes within max_depth undirected hops, start excluded.
    void collect_neighborhood(std::uint32_t start, unsigned max_depth,
                              std::vector<std::uint32_t>& reached) const {
        visited_.assign_if_needed(nodes_.size());
        visited_.begin_epoch();
        visited_.mark(start);
        std::vector<std::uint32_t> frontier{start}, next;
        for (unsigned depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
            next.clear();
            for (std::uint32_t idx : frontier) {
                for (const auto& step : out_[idx])
                    if (visited_.mark(step.other)) {
                        reached.push_back(step.other);
                        next.push_back(step.other);
                    }
                for (const auto& step : in_[idx])
                    if (visited_.mark(step.other)) {
                        reached.push_back(step.other);
                        next.push_back(step.other);
                    }
            }
            frontier.swap(next);
        }
    }

    // Epoch-stamped visited marks: reuse one array across BFS sources
    // without clearing it each time.
    struct VisitedMarks {
        std::vector<std::uint64_t> stamp;
        std::uint64_t epoch = 0;
        void assign_if_needed(std::size_t n) {
            if (stamp.size() != n) {
                stamp.assign(n, 0);
                epoch = 0;
            }
        }
        void begin_epoch() { ++epoch; }
        bool mark(std::uint32_t idx) {
            if (stamp[idx] == epoch) return false;
            stamp[idx] = epoch;
            return true;
        }
    };

    std::shared_ptr<const KnowledgeGraph> source_;
    std::string paradigm_;
    std::vector<NodeEntry> nodes_;
    std::vector<EdgeEntry> edges_;
    std::vector<std::vector<Adjacent>> out_, in_;
    std::vector<std::string> label_names_, rel_names_;
    std::map<std::string, std::uint32_t> label_ids_, rel_ids_;
    std::unordered_map<std::string, std::uint32_t> node_by_id_;
    std::optional<std::vector<std::vector<std::uint32_t>>> label_index_;
    mutable VisitedMarks visited_;
};

}  // namespace

std::unique_ptr<Backend> make_graph_engine(std::shared_ptr<const KnowledgeGraph> kg) {
    return std::make_unique<GraphEngine>(std::move(kg));
}

}  // namespace kgbench
