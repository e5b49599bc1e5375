#include <algorithm>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "engine_support.hpp"
#include "kgbench/engines.hpp"

namespace kgbench {
namespace {

const PropertyValue& vdoc_properties(const PropertyValue& doc) {
    static const PropertyValue kEmpty = PropertyValue::object();
    const auto it = doc.find("properties");
    return it == doc.end() ? kEmpty : *it;
}

// Heterogeneous lookup so handle parsing never materializes substrings.
struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};
template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// Vertex collections plus edge collections whose _from/_to handles carry the
// target collection, so every hop costs one _from/_to probe and one _key
// probe into the named collection. _key and endpoint hash indexes are the
// lazy cache layer.
class MultiModelEngine final : public Backend {
public:
    explicit MultiModelEngine(std::shared_ptr<const MultiModelDump> dump) : dump_(std::move(dump)) {
        paradigm_ = "multimodel";
        for (const auto& [label, docs] : dump_->vertex_collections) {
            vertex_coll_ids_.emplace(label, static_cast<std::uint32_t>(vertex_colls_.size()));
            vertex_colls_.push_back({label, &docs});
            class_names_.insert(label);
        }
        for (const auto& [rel, docs] : dump_->edge_collections) {
            edge_coll_ids_.emplace(rel, static_cast<std::uint32_t>(edge_colls_.size()));
            edge_colls_.push_back({rel, &docs});
            rel_names_.insert(rel);
        }
    }

    const std::string& paradigm() const override { return paradigm_; }

    std::uint64_t element_count() const override {
        std::uint64_t n = 0;
        for (const auto& [name, docs] : vertex_colls_) n += docs->size();
        for (const auto& [name, docs] : edge_colls_) n += docs->size();
        return n;
    }

    std::vector<std::string> materialized_caches() const override {
        std::vector<std::string> out;
        for (const auto& [coll, idx] : key_idx_) out.push_back("key:" + vertex_colls_[coll].name);
        for (const auto& [coll, idx] : from_idx_) out.push_back("from:" + edge_colls_[coll].name);
        for (const auto& [coll, idx] : to_idx_) out.push_back("to:" + edge_colls_[coll].name);
        std::sort(out.begin(), out.end());
        return out;
    }

protected:
    void drop_caches() override {
        key_idx_.clear();
        from_idx_.clear();
        to_idx_.clear();
    }

    ResultSet do_execute(const ExecutablePlan& plan) override {
        detail::check_plan(plan, paradigm_, class_names_, rel_names_);
        const auto slots = detail::bind_slots(plan.spec);

        std::vector<Row> rows;
        ResultSet result;

        for (const auto& stage : plan.spec.stages) {
            if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
                const auto coll = vertex_coll(scan->label);
                if (!coll) continue;
                const auto& docs = *vertex_colls_[*coll].docs;
                for (std::uint32_t pos = 0; pos < docs.size(); ++pos)
                    if (eval_predicates(scan->predicates, vdoc_properties(docs[pos])))
                        rows.push_back({Ref{*coll, pos}});
            } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
                run_expand(*expand, slots, rows);
            } else if (const auto* nbh = std::get_if<NeighborhoodStage>(&stage)) {
                run_neighborhood(*nbh, slots, rows);
            } else if (const auto* project = std::get_if<ProjectStage>(&stage)) {
                run_project(*project, slots, rows, result);
            }
        }
        return result;
    }

private:
    struct Collection {
        std::string name;
        const std::vector<PropertyValue>* docs;
    };
    struct Ref {
        std::uint32_t coll;
        std::uint32_t pos;
    };
    using Row = std::vector<Ref>;

    static const std::string& doc_key(const PropertyValue& doc) {
        return doc.at("_key").get_ref<const std::string&>();
    }

    const PropertyValue& vertex_doc(Ref ref) const {
        return (*vertex_colls_[ref.coll].docs)[ref.pos];
    }

    std::optional<std::uint32_t> vertex_coll(const std::string& label) const {
        const auto it = vertex_coll_ids_.find(label);
        if (it == vertex_coll_ids_.end()) return std::nullopt;
        return it->second;
    }

    std::string handle_of(Ref ref) const {
        return vertex_colls_[ref.coll].name + "/" + doc_key(vertex_doc(ref));
    }

    const StringMap<std::uint32_t>& ensure_key(std::uint32_t coll) {
        auto [it, inserted] = key_idx_.try_emplace(coll);
        if (inserted) {
            const auto& docs = *vertex_colls_[coll].docs;
            it->second.reserve(docs.size());
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos)
                it->second.emplace(doc_key(docs[pos]), pos);
        }
        return it->second;
    }

    const StringMap<std::vector<std::uint32_t>>& ensure_endpoint(std::uint32_t edge_coll,
                                                                 bool from_side) {
        auto& cache = from_side ? from_idx_ : to_idx_;
        auto [it, inserted] = cache.try_emplace(edge_coll);
        if (inserted) {
            const char* key = from_side ? "_from" : "_to";
            const auto& docs = *edge_colls_[edge_coll].docs;
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos)
                it->second[docs[pos].at(key).get_ref<const std::string&>()].push_back(pos);
        }
        return it->second;
    }

    // "<collection>/<_key>" -> vertex ref, one _key probe into the named
    // collection. Handles that do not resolve yield nothing.
    std::optional<Ref> resolve_handle(std::string_view handle) {
        const auto slash = handle.find('/');
        if (slash == std::string_view::npos) return std::nullopt;
        const auto coll_it = vertex_coll_ids_.find(handle.substr(0, slash));
        if (coll_it == vertex_coll_ids_.end()) return std::nullopt;
        const auto& idx = ensure_key(coll_it->second);
        const auto hit = idx.find(handle.substr(slash + 1));
        if (hit == idx.end()) return std::nullopt;
        return Ref{coll_it->second, hit->second};
    }

    void run_expand(const ExpandStage& expand, const std::map<std::string, std::size_t>& slots,
                    std::vector<Row>& rows) {
        const auto rel_it = edge_coll_ids_.find(expand.rel_type);
        if (rel_it == edge_coll_ids_.end()) {
            rows.clear();
            return;
        }
        const std::uint32_t edge_coll = rel_it->second;
        const bool outbound = expand.dir == ExpandStage::Dir::Out;
        const auto& endpoint_idx = ensure_endpoint(edge_coll, outbound);
        const auto& edge_docs = *edge_colls_[edge_coll].docs;
        const char* other_key = outbound ? "_to" : "_from";
        const std::size_t src = slots.at(expand.source);

        std::vector<Row> next;
        for (const auto& row : rows) {
            const auto hit = endpoint_idx.find(handle_of(row[src]));
            if (hit == endpoint_idx.end()) continue;
            for (std::uint32_t edge_pos : hit->second) {
                const std::string& other =
                    edge_docs[edge_pos].at(other_key).get_ref<const std::string&>();
                const auto ref = resolve_handle(other);
                if (!ref) continue;
                if (!expand.target_label.empty() &&
                    vertex_colls_[ref->coll].name != expand.target_label)
                    continue;
                if (!eval_predicates(expand.predicates, vdoc_properties(vertex_doc(*ref))))
                    continue;
                Row extended = row;
                extended.push_back(*ref);
                next.push_back(std::move(extended));
            }
        }
        rows = std::move(next);
    }

    void run_neighborhood(const NeighborhoodStage& nbh,
                          const std::map<std::string, std::size_t>& slots,
                          std::vector<Row>& rows) {
        const std::size_t src = slots.at(nbh.source);
        std::vector<Row> next;
        std::vector<Ref> reached, frontier, layer;
        std::unordered_set<std::uint64_t> visited;
        const auto pack = [](Ref r) {
            return (static_cast<std::uint64_t>(r.coll) << 32) | r.pos;
        };

        for (const auto& row : rows) {
            reached.clear();
            frontier.assign(1, row[src]);
            visited.clear();
            visited.insert(pack(row[src]));
            for (unsigned depth = 0; depth < nbh.max_depth && !frontier.empty(); ++depth) {
                layer.clear();
                for (const Ref ref : frontier) {
                    const std::string handle = handle_of(ref);
                    for (std::uint32_t edge_coll = 0; edge_coll < edge_colls_.size();
                         ++edge_coll) {
                        const auto& edge_docs = *edge_colls_[edge_coll].docs;
                        for (const bool from_side : {true, false}) {
                            const auto& idx = ensure_endpoint(edge_coll, from_side);
                            const auto hit = idx.find(handle);
                            if (hit == idx.end()) continue;
                            const char* other_key = from_side ? "_to" : "_from";
                            for (std::uint32_t edge_pos : hit->second) {
                                const auto other = resolve_handle(edge_docs[edge_pos]
                                                                      .at(other_key)
                                                                      .get_ref<const std::string&>());
                                if (!other) continue;
                                if (!visited.insert(pack(*other)).second) continue;
                                reached.push_back(*other);
                                layer.push_back(*other);
                            }
                        }
                    }
                }
                frontier.swap(layer);
            }
            for (const Ref ref : reached) {
                Row extended = row;
                extended.push_back(ref);
                next.push_back(std::move(extended));
            }
        }
        rows = std::move(next);
    }

    void run_project(const ProjectStage& project, const std::map<std::string, std::size_t>& slots,
                     const std::vector<Row>& rows, ResultSet& result) {
        for (const auto& col : project.columns) result.columns.push_back(col.name);
        result.rows.reserve(rows.size());
        for (const auto& row : rows) {
            std::vector<PropertyValue> out;
            out.reserve(project.columns.size());
            for (const auto& col : project.columns) {
                const Ref ref = row[slots.at(col.source)];
                const auto& doc = vertex_doc(ref);
                switch (col.attr) {
                    case ProjectColumn::Attr::Id:
                        out.emplace_back(unescape_key(doc_key(doc)));
                        break;
                    case ProjectColumn::Attr::Label:
                        out.emplace_back(vertex_colls_[ref.coll].name);
                        break;
                    case ProjectColumn::Attr::Property: {
                        const auto& props = vdoc_properties(doc);
                        const auto it = props.find(col.field);
                        out.push_back(it == props.end() ? PropertyValue() : *it);
                        break;
                    }
                }
            }
            result.rows.push_back(std::move(out));
        }
    }

    std::shared_ptr<const MultiModelDump> dump_;
    std::string paradigm_;
    std::vector<Collection> vertex_colls_, edge_colls_;
    std::map<std::string, std::uint32_t, std::less<>> vertex_coll_ids_, edge_coll_ids_;
    std::set<std::string> class_names_, rel_names_;

    std::unordered_map<std::uint32_t, StringMap<std::uint32_t>> key_idx_;
    std::unordered_map<std::uint32_t, StringMap<std::vector<std::uint32_t>>> from_idx_, to_idx_;
};

}  // namespace

std::unique_ptr<Backend> make_multimodel_engine(std::shared_ptr<const MultiModelDump> dump) {
    return std::make_unique<MultiModelEngine>(std::move(dump));
}

}  // namespace kgbench
