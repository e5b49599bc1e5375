#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kgbench/errors.hpp"
#include "kgbench/graph.hpp"

namespace kgbench {

// Predicted size of an n-fold duplication: every count grows by 2^n.
struct ScalePlan {
    std::uint64_t base_nodes = 0;
    std::uint64_t base_edges = 0;
    unsigned duplications = 0;

    std::uint64_t factor() const { return std::uint64_t{1} << duplications; }
    std::uint64_t predicted_nodes() const { return base_nodes * factor(); }
    std::uint64_t predicted_edges() const { return base_edges * factor(); }
    std::uint64_t predicted_elements() const { return predicted_nodes() + predicted_edges(); }
};

ScalePlan plan_scale(const KnowledgeGraph& kg, unsigned duplications);

inline constexpr std::uint64_t kDefaultElementBudget = 200'000'000;

// Disjoint self-merge: the result holds 2^n structurally identical copies of
// the input, copy k carrying a "#k" suffix on every node and edge id, so
// copies share no ids and no cross-copy edges exist. n = 0 returns the input
// unchanged. Refuses (DataError, stating the predicted counts) when the
// predicted element count exceeds the budget.
KnowledgeGraph duplicate_merge(const KnowledgeGraph& kg, unsigned duplications,
                               std::uint64_t element_budget = kDefaultElementBudget);

// --- synthetic graphs for desk-scale testing ---

struct FieldRecipe {
    enum class Kind { IntUniform, Choice, Cycle, Const };
    std::string field;
    Kind kind = Kind::Const;
    std::int64_t min = 0, max = 0;           // IntUniform, inclusive
    std::vector<PropertyValue> values;       // Choice / Cycle
    std::vector<std::uint64_t> weights;      // Choice; empty = uniform
    PropertyValue value;                     // Const
};

// Allowed (from_class, to_class) endpoint pairs for one relationship type.
struct SchemaRule {
    std::string rel_type;
    std::string from_class;
    std::string to_class;
};

struct SyntheticSpec {
    std::uint64_t node_count = 0;
    std::vector<std::string> class_names;      // defaults to C1..Ck
    std::vector<std::string> reltype_names;    // defaults to R1..Rk
    unsigned class_count = 0;                  // used when class_names empty
    unsigned reltype_count = 0;                // used when reltype_names empty

    enum class LabelDist { Uniform, Zipf, Counts };
    LabelDist label_dist = LabelDist::Uniform;
    double zipf_s = 1.0;
    std::map<std::string, std::uint64_t> class_counts;  // LabelDist::Counts

    double target_cd = 0.0;
    std::uint64_t seed = 0;

    std::vector<SchemaRule> schema;                              // empty = unconstrained
    std::map<std::string, std::vector<FieldRecipe>> properties;  // per class

    PropertyValue to_json() const;
    static SyntheticSpec from_json(const PropertyValue& j);
};

// Deterministic for a fixed seed: two calls with the same spec produce
// identical graphs (and therefore byte-identical bundles). Realized class
// and relationship-type counts match the spec exactly; realized CD is the
// nearest achievable to the target and must fall within 1%.
KnowledgeGraph generate_synthetic(const SyntheticSpec& spec);

}  // namespace kgbench
