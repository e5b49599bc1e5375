#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "engine_support.hpp"
#include "kgbench/engines.hpp"

namespace kgbench {
namespace {

const PropertyValue& doc_properties(const PropertyValue& doc) {
    static const PropertyValue kEmpty = PropertyValue::object();
    const auto it = doc.find("properties");
    return it == doc.end() ? kEmpty : *it;
}

// Per-collection record arrays with lazily built secondary structures:
// field hash/ordered indexes, per-collection id indexes, and per-relationship
// from/to indexes. Hops re-probe an id index per step; when the target class
// is not named, candidate collections are probed in name order until the id
// resolves.
class DocumentEngine final : public Backend {
public:
    explicit DocumentEngine(std::shared_ptr<const DocumentDump> dump) : dump_(std::move(dump)) {
        paradigm_ = "document";
        for (const auto& [label, docs] : dump_->node_collections) {
            node_coll_ids_.emplace(label, static_cast<std::uint32_t>(node_colls_.size()));
            node_colls_.push_back({label, &docs});
            class_names_.insert(label);
        }
        for (const auto& [rel, docs] : dump_->relationship_collections) {
            rel_coll_ids_.emplace(rel, static_cast<std::uint32_t>(rel_colls_.size()));
            rel_colls_.push_back({rel, &docs});
            rel_names_.insert(rel);
        }
    }

    const std::string& paradigm() const override { return paradigm_; }

    std::uint64_t element_count() const override {
        std::uint64_t n = 0;
        for (const auto& [name, docs] : node_colls_) n += docs->size();
        for (const auto& [name, docs] : rel_colls_) n += docs->size();
        return n;
    }

    std::vector<std::string> materialized_caches() const override {
        std::vector<std::string> out;
        for (const auto& [key, idx] : eq_idx_)
            out.push_back("eq:" + node_colls_[key.first].name + "." + key.second);
        for (const auto& [key, idx] : range_idx_)
            out.push_back("range:" + node_colls_[key.first].name + "." + key.second);
        for (const auto& [coll, idx] : id_idx_) out.push_back("id:" + node_colls_[coll].name);
        for (const auto& [coll, idx] : from_idx_) out.push_back("from:" + rel_colls_[coll].name);
        for (const auto& [coll, idx] : to_idx_) out.push_back("to:" + rel_colls_[coll].name);
        std::sort(out.begin(), out.end());
        return out;
    }

protected:
    void drop_caches() override {
        eq_idx_.clear();
        range_idx_.clear();
        id_idx_.clear();
        from_idx_.clear();
        to_idx_.clear();
    }

    ResultSet do_execute(const ExecutablePlan& plan) override {
        detail::check_plan(plan, paradigm_, class_names_, rel_names_);
        const auto slots = detail::bind_slots(plan.spec);

        std::vector<Row> rows;
        ResultSet result;

        for (std::size_t stage_idx = 0; stage_idx < plan.spec.stages.size(); ++stage_idx) {
            const Stage& stage = plan.spec.stages[stage_idx];
            if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
                run_scan(*scan, plan, stage_idx, rows);
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
    using Postings = std::vector<std::uint32_t>;

    static const std::string& doc_id(const PropertyValue& doc) {
        return doc.at("_id").get_ref<const std::string&>();
    }

    const PropertyValue& node_doc(Ref ref) const { return (*node_colls_[ref.coll].docs)[ref.pos]; }

    std::optional<std::uint32_t> node_coll(const std::string& label) const {
        const auto it = node_coll_ids_.find(label);
        if (it == node_coll_ids_.end()) return std::nullopt;
        return it->second;
    }

    // --- lazy indexes ---

    const std::unordered_map<std::string, Postings>& ensure_eq(std::uint32_t coll,
                                                               const std::string& field) {
        auto [it, inserted] = eq_idx_.try_emplace({coll, field});
        if (inserted) {
            const auto& docs = *node_colls_[coll].docs;
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos) {
                const auto& props = doc_properties(docs[pos]);
                const auto v = props.find(field);
                if (v != props.end()) it->second[scalar_key(*v)].push_back(pos);
            }
        }
        return it->second;
    }

    const std::multimap<double, std::uint32_t>& ensure_range(std::uint32_t coll,
                                                             const std::string& field) {
        auto [it, inserted] = range_idx_.try_emplace({coll, field});
        if (inserted) {
            const auto& docs = *node_colls_[coll].docs;
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos) {
                const auto& props = doc_properties(docs[pos]);
                const auto v = props.find(field);
                if (v != props.end() && is_numeric(*v)) it->second.emplace(as_double(*v), pos);
            }
        }
        return it->second;
    }

    const std::unordered_map<std::string, std::uint32_t>& ensure_id(std::uint32_t coll) {
        auto [it, inserted] = id_idx_.try_emplace(coll);
        if (inserted) {
            const auto& docs = *node_colls_[coll].docs;
            it->second.reserve(docs.size());
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos)
                it->second.emplace(doc_id(docs[pos]), pos);
        }
        return it->second;
    }

    const std::unordered_map<std::string, Postings>& ensure_endpoint(std::uint32_t rel_coll,
                                                                     bool from_side) {
        auto& cache = from_side ? from_idx_ : to_idx_;
        auto [it, inserted] = cache.try_emplace(rel_coll);
        if (inserted) {
            const char* key = from_side ? "from" : "to";
            const auto& docs = *rel_colls_[rel_coll].docs;
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos)
                it->second[docs[pos].at(key).get_ref<const std::string&>()].push_back(pos);
        }
        return it->second;
    }

    // Resolve an id whose class is unknown by probing collections in name
    // order until one contains it.
    std::optional<Ref> resolve_any(const std::string& id) {
        for (std::uint32_t coll = 0; coll < node_colls_.size(); ++coll) {
            const auto& idx = ensure_id(coll);
            const auto hit = idx.find(id);
            if (hit != idx.end()) return Ref{coll, hit->second};
        }
        return std::nullopt;
    }

    // --- stages ---

    Postings seek_postings(std::uint32_t coll, const Predicate& pred) {
        switch (pred.cmp) {
            case Predicate::Cmp::Eq: {
                const auto& idx = ensure_eq(coll, pred.field);
                const auto hit = idx.find(scalar_key(pred.value));
                return hit == idx.end() ? Postings{} : hit->second;
            }
            case Predicate::Cmp::In: {
                const auto& idx = ensure_eq(coll, pred.field);
                Postings out;
                for (const auto& v : pred.values) {
                    const auto hit = idx.find(scalar_key(v));
                    if (hit != idx.end()) out.insert(out.end(), hit->second.begin(),
                                                     hit->second.end());
                }
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                return out;
            }
            case Predicate::Cmp::Range: {
                const auto& idx = ensure_range(coll, pred.field);
                Postings out;
                for (auto it = idx.lower_bound(pred.min); it != idx.end() && it->first <= pred.max;
                     ++it)
                    out.push_back(it->second);
                return out;
            }
        }
        return {};
    }

    void run_scan(const NodeScanStage& scan, const ExecutablePlan& plan, std::size_t stage_idx,
                  std::vector<Row>& rows) {
        const auto coll = node_coll(scan.label);
        if (!coll) return;  // empty dataset
        const auto& docs = *node_colls_[*coll].docs;

        const auto seeks_it = plan.seek_predicates.find(stage_idx);
        if (seeks_it == plan.seek_predicates.end()) {
            for (std::uint32_t pos = 0; pos < docs.size(); ++pos)
                if (eval_predicates(scan.predicates, doc_properties(docs[pos])))
                    rows.push_back({Ref{*coll, pos}});
            return;
        }

        const auto& seeks = seeks_it->second;
        std::vector<Postings> lists;
        lists.reserve(seeks.size());
        for (std::size_t p : seeks) lists.push_back(seek_postings(*coll, scan.predicates[p]));
        std::sort(lists.begin(), lists.end(),
                  [](const auto& a, const auto& b) { return a.size() < b.size(); });
        Postings candidates = std::move(lists.front());
        for (std::size_t i = 1; i < lists.size(); ++i) {
            std::unordered_set<std::uint32_t> keep(lists[i].begin(), lists[i].end());
            Postings next;
            next.reserve(candidates.size());
            for (std::uint32_t pos : candidates)
                if (keep.count(pos)) next.push_back(pos);
            candidates = std::move(next);
        }
        std::sort(candidates.begin(), candidates.end());

        std::vector<std::size_t> residual;
        for (std::size_t p = 0; p < scan.predicates.size(); ++p)
            if (std::find(seeks.begin(), seeks.end(), p) == seeks.end()) residual.push_back(p);

        for (std::uint32_t pos : candidates) {
            const auto& props = doc_properties(docs[pos]);
            bool pass = true;
            for (std::size_t p : residual)
                if (!eval_predicate(scan.predicates[p], props)) {
                    pass = false;
                    break;
                }
            if (pass) rows.push_back({Ref{*coll, pos}});
        }
    }

    void run_expand(const ExpandStage& expand, const std::map<std::string, std::size_t>& slots,
                    std::vector<Row>& rows) {
        std::vector<Row> next;
        const auto rel_it = rel_coll_ids_.find(expand.rel_type);
        std::optional<std::uint32_t> target;
        if (!expand.target_label.empty()) {
            target = node_coll(expand.target_label);
            if (!target) {
                rows.clear();
                return;
            }
        }
        if (rel_it == rel_coll_ids_.end()) {
            rows.clear();
            return;
        }
        const std::uint32_t rel_coll = rel_it->second;
        const bool outbound = expand.dir == ExpandStage::Dir::Out;
        const auto& endpoint_idx = ensure_endpoint(rel_coll, outbound);
        const auto& rel_docs = *rel_colls_[rel_coll].docs;
        const char* other_key = outbound ? "to" : "from";
        const std::size_t src = slots.at(expand.source);

        for (const auto& row : rows) {
            const auto hit = endpoint_idx.find(doc_id(node_doc(row[src])));
            if (hit == endpoint_idx.end()) continue;
            for (std::uint32_t edge_pos : hit->second) {
                const std::string& other_id =
                    rel_docs[edge_pos].at(other_key).get_ref<const std::string&>();
                std::optional<Ref> ref;
                if (target) {
                    const auto& idx = ensure_id(*target);
                    const auto found = idx.find(other_id);
                    if (found != idx.end()) ref = Ref{*target, found->second};
                } else {
                    ref = resolve_any(other_id);
                }
                if (!ref) continue;
                if (!eval_predicates(expand.predicates, doc_properties(node_doc(*ref)))) continue;
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
                    const std::string& id = doc_id(node_doc(ref));
                    for (std::uint32_t rel_coll = 0; rel_coll < rel_colls_.size(); ++rel_coll) {
                        const auto& rel_docs = *rel_colls_[rel_coll].docs;
                        for (const bool from_side : {true, false}) {
                            const auto& idx = ensure_endpoint(rel_coll, from_side);
                            const auto hit = idx.find(id);
                            if (hit == idx.end()) continue;
                            const char* other_key = from_side ? "to" : "from";
                            for (std::uint32_t edge_pos : hit->second) {
                                const std::string& other_id = rel_docs[edge_pos]
                                                                  .at(other_key)
                                                                  .get_ref<const std::string&>();
                                const auto other = resolve_any(other_id);
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
                const auto& doc = node_doc(ref);
                switch (col.attr) {
                    case ProjectColumn::Attr::Id: out.emplace_back(doc_id(doc)); break;
                    case ProjectColumn::Attr::Label:
                        out.emplace_back(node_colls_[ref.coll].name);
                        break;
                    case ProjectColumn::Attr::Property: {
                        const auto& props = doc_properties(doc);
                        const auto it = props.find(col.field);
                        out.push_back(it == props.end() ? PropertyValue() : *it);
                        break;
                    }
                }
            }
            result.rows.push_back(std::move(out));
        }
    }

    std::shared_ptr<const DocumentDump> dump_;
    std::string paradigm_;
    std::vector<Collection> node_colls_, rel_colls_;
    std::map<std::string, std::uint32_t> node_coll_ids_, rel_coll_ids_;
    std::set<std::string> class_names_, rel_names_;

    std::map<std::pair<std::uint32_t, std::string>, std::unordered_map<std::string, Postings>>
        eq_idx_;
    std::map<std::pair<std::uint32_t, std::string>, std::multimap<double, std::uint32_t>>
        range_idx_;
    std::unordered_map<std::uint32_t, std::unordered_map<std::string, std::uint32_t>> id_idx_;
    std::unordered_map<std::uint32_t, std::unordered_map<std::string, Postings>> from_idx_,
        to_idx_;
};

}  // namespace

std::unique_ptr<Backend> make_document_engine(std::shared_ptr<const DocumentDump> dump) {
    return std::make_unique<DocumentEngine>(std::move(dump));
}

}  // namespace kgbench
