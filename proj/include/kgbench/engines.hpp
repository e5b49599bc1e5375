#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kgbench/convert.hpp"
#include "kgbench/errors.hpp"
#include "kgbench/graph.hpp"
#include "kgbench/workload.hpp"

namespace kgbench {

// Query output: named columns, one value row per result. Bag semantics;
// canonicalize() imposes the lexicographic row order that makes multiset
// comparison decidable.
struct ResultSet {
    std::vector<std::string> columns;
    std::vector<std::vector<PropertyValue>> rows;

    std::size_t size() const { return rows.size(); }
    void canonicalize();
};

bool multiset_equal(const ResultSet& a, const ResultSet& b);

struct PlanStep {
    std::string op;         // paradigm-specific physical operator name
    std::size_t stage = 0;  // index into spec.stages
    std::string detail;
};

// A query lowered to one paradigm's physical operators. `seek_predicates`
// records, per scan stage, which predicate indices are served by index seeks
// (document/multi-model planners); everything else is a residual filter.
struct ExecutablePlan {
    std::string paradigm;
    QuerySpec spec;
    std::vector<PlanStep> steps;
    std::map<std::size_t, std::vector<std::size_t>> seek_predicates;
};

const std::vector<std::string>& known_paradigms();  // document, graph, multimodel, oracle

ExecutablePlan compile(const QuerySpec& spec, const std::string& paradigm);

// Shared predicate semantics; every engine must agree with these exactly.
bool eval_predicate(const Predicate& p, const PropertyValue& properties);
bool eval_predicates(const std::vector<Predicate>& ps, const PropertyValue& properties);

struct BackendStats {
    std::uint64_t clear_count = 0;
    std::uint64_t execute_count = 0;
};

// One ingested dataset inside one paradigm engine. Primary storage is fixed
// at ingest; the only mutable state is the set of lazily materialized
// secondary structures ("caches"), which clear_caches() discards. Caches
// affect timing only, never results. Not safe for concurrent execute calls.
class Backend {
public:
    virtual ~Backend() = default;

    virtual const std::string& paradigm() const = 0;
    virtual std::uint64_t element_count() const = 0;
    virtual std::vector<std::string> materialized_caches() const = 0;

    ResultSet execute(const ExecutablePlan& plan) {
        ++stats_.execute_count;
        return do_execute(plan);
    }

    void clear_caches() {
        ++stats_.clear_count;
        drop_caches();
    }

    const BackendStats& stats() const { return stats_; }
    void reset_stats() { stats_ = {}; }

protected:
    virtual ResultSet do_execute(const ExecutablePlan& plan) = 0;
    virtual void drop_caches() = 0;

private:
    BackendStats stats_;
};

// Per-class/per-type record collections; field, id and from/to hash indexes
// plus ordered numeric indexes form the lazy cache layer. Hops re-probe an
// id index per step.
std::unique_ptr<Backend> make_document_engine(std::shared_ptr<const DocumentDump> dump);

// Adjacency lists per node per relationship type built at ingest as primary
// storage; the label index is the lazy cache layer. Traversals walk
// adjacency directly with no per-hop index probes.
std::unique_ptr<Backend> make_graph_engine(std::shared_ptr<const KnowledgeGraph> kg);

// Vertex and edge collections; _key and _from/_to hash indexes (lazy) give
// one-probe-per-hop expansion with collection-qualified handles.
std::unique_ptr<Backend> make_multimodel_engine(std::shared_ptr<const MultiModelDump> dump);

// Index-free nested-loop evaluation of the logical query; ground truth for
// result equivalence.
std::unique_ptr<Backend> make_oracle_engine(std::shared_ptr<const KnowledgeGraph> kg);

using IngestSource = std::variant<std::shared_ptr<const KnowledgeGraph>,
                                  std::shared_ptr<const DocumentDump>,
                                  std::shared_ptr<const MultiModelDump>>;

// Builds the engine for `paradigm` from its native format. A KnowledgeGraph
// is accepted by every paradigm (document and multi-model run the two-phase
// conversion internally); handing an engine the wrong dump type raises
// IngestError naming the expected format.
std::unique_ptr<Backend> ingest(const std::string& paradigm, const IngestSource& source);

}  // namespace kgbench
