#include <algorithm>

#include "kgbench/engines.hpp"

namespace kgbench {

void ResultSet::canonicalize() {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return a.size() < b.size();
    });
}

bool multiset_equal(const ResultSet& a, const ResultSet& b) {
    if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
    ResultSet sa = a, sb = b;
    sa.canonicalize();
    sb.canonicalize();
    return sa.rows == sb.rows;
}

const std::vector<std::string>& known_paradigms() {
    static const std::vector<std::string> kParadigms{"document", "graph", "multimodel", "oracle"};
    return kParadigms;
}

bool eval_predicate(const Predicate& p, const PropertyValue& properties) {
    const auto it = properties.find(p.field);
    if (it == properties.end()) return false;
    switch (p.cmp) {
        case Predicate::Cmp::Eq:
            return scalar_equal(*it, p.value);
        case Predicate::Cmp::In:
            for (const auto& candidate : p.values)
                if (scalar_equal(*it, candidate)) return true;
            return false;
        case Predicate::Cmp::Range:
            if (!is_numeric(*it)) return false;
            return as_double(*it) >= p.min && as_double(*it) <= p.max;
    }
    return false;
}

bool eval_predicates(const std::vector<Predicate>& ps, const PropertyValue& properties) {
    for (const auto& p : ps)
        if (!eval_predicate(p, properties)) return false;
    return true;
}

namespace {

void compile_document(const QuerySpec& spec, ExecutablePlan& plan) {
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const Stage& stage = spec.stages[i];
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
            // Seek every equality predicate; without one, fall back to a
            // single 'in' multi-seek, then a single ordered range seek.
            std::vector<std::size_t> seeks;
            for (std::size_t p = 0; p < scan->predicates.size(); ++p)
                if (scan->predicates[p].cmp == Predicate::Cmp::Eq) seeks.push_back(p);
            if (seeks.empty())
                for (std::size_t p = 0; p < scan->predicates.size(); ++p)
                    if (scan->predicates[p].cmp == Predicate::Cmp::In) {
                        seeks.push_back(p);
                        break;
                    }
            if (seeks.empty())
                for (std::size_t p = 0; p < scan->predicates.size(); ++p)
                    if (scan->predicates[p].cmp == Predicate::Cmp::Range) {
                        seeks.push_back(p);
                        break;
                    }
            if (seeks.empty()) {
                plan.steps.push_back({"collection-scan", i, scan->label});
            } else {
                for (std::size_t p : seeks)
                    plan.steps.push_back(
                        {"index-seek", i, scan->label + "." + scan->predicates[p].field});
                if (seeks.size() < scan->predicates.size())
                    plan.steps.push_back({"residual-filter", i, scan->label});
                plan.seek_predicates[i] = std::move(seeks);
            }
        } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
            plan.steps.push_back({"hop-lookup", i, expand->rel_type});
        } else if (std::holds_alternative<NeighborhoodStage>(stage)) {
            plan.steps.push_back({"neighborhood-lookup", i, ""});
        } else {
            plan.steps.push_back({"project", i, ""});
        }
    }
}

void compile_graph(const QuerySpec& spec, ExecutablePlan& plan) {
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const Stage& stage = spec.stages[i];
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
            plan.steps.push_back({"label-scan", i, scan->label});
        } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
            plan.steps.push_back({"adjacency-walk", i, expand->rel_type});
        } else if (std::holds_alternative<NeighborhoodStage>(stage)) {
            plan.steps.push_back({"neighborhood-walk", i, ""});
        } else {
            plan.steps.push_back({"project", i, ""});
        }
    }
}

void compile_multimodel(const QuerySpec& spec, ExecutablePlan& plan) {
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const Stage& stage = spec.stages[i];
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
            plan.steps.push_back({"vertex-scan", i, scan->label});
        } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
            plan.steps.push_back({"edge-index-hop", i, expand->rel_type});
        } else if (std::holds_alternative<NeighborhoodStage>(stage)) {
            plan.steps.push_back({"neighborhood-edge-hop", i, ""});
        } else {
            plan.steps.push_back({"project", i, ""});
        }
    }
}

void compile_oracle(const QuerySpec& spec, ExecutablePlan& plan) {
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const Stage& stage = spec.stages[i];
        if (std::holds_alternative<NodeScanStage>(stage)) {
            plan.steps.push_back({"nested-loop-scan", i, ""});
        } else if (std::holds_alternative<ExpandStage>(stage)) {
            plan.steps.push_back({"nested-loop-expand", i, ""});
        } else if (std::holds_alternative<NeighborhoodStage>(stage)) {
            plan.steps.push_back({"nested-loop-neighborhood", i, ""});
        } else {
            plan.steps.push_back({"project", i, ""});
        }
    }
}

}  // namespace

ExecutablePlan compile(const QuerySpec& spec, const std::string& paradigm) {
    validate_spec(spec);
    ExecutablePlan plan;
    plan.paradigm = paradigm;
    plan.spec = spec;
    if (paradigm == "document") compile_document(spec, plan);
    else if (paradigm == "graph") compile_graph(spec, plan);
    else if (paradigm == "multimodel") compile_multimodel(spec, plan);
    else if (paradigm == "oracle") compile_oracle(spec, plan);
    else throw CompileError("unknown paradigm \"" + paradigm + "\"");
    return plan;
}

std::unique_ptr<Backend> ingest(const std::string& paradigm, const IngestSource& source) {
    const auto* kg = std::get_if<std::shared_ptr<const KnowledgeGraph>>(&source);
    if (paradigm == "document") {
        if (kg) return make_document_engine(std::make_shared<DocumentDump>(to_document_dump(**kg)));
        if (const auto* dump = std::get_if<std::shared_ptr<const DocumentDump>>(&source))
            return make_document_engine(*dump);
        throw IngestError("document engine ingests a document dump (or a graph via conversion); "
                          "got a multi-model dump");
    }
    if (paradigm == "multimodel") {
        if (kg)
            return make_multimodel_engine(
                std::make_shared<MultiModelDump>(to_multimodel_dump(**kg)));
        if (const auto* dump = std::get_if<std::shared_ptr<const MultiModelDump>>(&source))
            return make_multimodel_engine(*dump);
        throw IngestError("multi-model engine ingests a multi-model dump (or a graph via "
                          "conversion); got a document dump");
    }
    if (paradigm == "graph" || paradigm == "oracle") {
        if (!kg)
            throw IngestError(paradigm + " engine ingests the native graph format; got a "
                                         "paradigm dump");
        return paradigm == "graph" ? make_graph_engine(*kg) : make_oracle_engine(*kg);
    }
    throw IngestError("unknown paradigm \"" + paradigm + "\"");
}

}  // namespace kgbench
