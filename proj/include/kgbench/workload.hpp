#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "kgbench/errors.hpp"
#include "kgbench/graph.hpp"

namespace kgbench {

// Field predicate on a node's property tree. Numeric comparisons coerce
// integers to floats; a missing field never matches.
struct Predicate {
    enum class Cmp { Eq, In, Range };
    std::string field;
    Cmp cmp = Cmp::Eq;
    PropertyValue value;                 // Eq
    std::vector<PropertyValue> values;   // In
    double min = 0.0, max = 0.0;         // Range, inclusive on both ends
};

struct NodeScanStage {
    std::string label;
    std::vector<Predicate> predicates;
    std::string bind;
};

// One typed hop from an already-bound node. Rows multiply per matching edge
// (bag semantics); rows without a match are dropped.
struct ExpandStage {
    enum class Dir { Out, In };
    std::string source;
    std::string rel_type;
    Dir dir = Dir::Out;
    std::string target_label;  // empty = any label
    std::vector<Predicate> predicates;
    std::string bind;
};

// All distinct entities within max_depth undirected hops of the source,
// over every relationship type, excluding the source itself. One row per
// (source row, reached entity).
struct NeighborhoodStage {
    std::string source;
    unsigned max_depth = 1;
    std::string bind;
};

struct ProjectColumn {
    enum class Attr { Id, Label, Property };
    std::string name;
    std::string source;
    Attr attr = Attr::Id;
    std::string field;  // Attr::Property
};

struct ProjectStage {
    std::vector<ProjectColumn> columns;
};

using Stage = std::variant<NodeScanStage, ExpandStage, NeighborhoodStage, ProjectStage>;

// Declarative query: a scan, zero or more expansions, one final projection.
// Tier shape rules: tier 1 has no expansion of either kind, tier 2 exactly
// one Expand, tier 3 two or more Expands, tier 4 a NeighborhoodStage.
struct QuerySpec {
    std::string id;
    int tier = 0;
    std::vector<Stage> stages;

    PropertyValue to_json() const;
    static QuerySpec from_json(const PropertyValue& j);
};

bool operator==(const QuerySpec& a, const QuerySpec& b);

// Throws CompileError when the spec is structurally invalid or violates its
// tier's shape rule.
void validate_spec(const QuerySpec& spec);

// Concrete names the tier templates are instantiated with. All of it is
// data, not code: swap the file to target a dataset with other encodings.
struct SchemaBinding {
    std::string case_label = "Case";
    std::string age_field = "age";
    double age_min = 60.0, age_max = 90.0;
    std::string gender_field = "gender";
    std::vector<std::string> gender_values{"F", "M"};
    std::string occupation_field = "occupation";
    std::string hospital_staff_value = "HP";

    std::string age_group_label = "AgeGroup";
    std::string age_group_name_field = "name";
    std::vector<std::string> age_group_values{"Child", "Adult"};

    std::string drug_label = "Drug";
    std::string manufacturer_label = "Manufacturer";
    std::string reaction_label = "Reaction";
    std::string outcome_label = "Outcome";
    std::string report_source_label = "ReportSource";
    std::string therapy_label = "Therapy";

    std::string case_age_group_rel = "FALLS_UNDER";
    std::string case_drug_rel = "IS_PRIMARY_SUSPECT";
    std::string drug_manufacturer_rel = "PRODUCED_BY";

    unsigned tier4_depth = 1;

    PropertyValue to_json() const;
    static SchemaBinding from_json(const PropertyValue& j);
};

// Checks that every class and relationship type the four templates reference
// exists in the graph. Vacuous on an empty graph.
void validate_binding(const SchemaBinding& binding, const KnowledgeGraph& kg);

// The four tier queries. Throw BindingError on an unresolved role.
QuerySpec tier1_template(const SchemaBinding& b);
QuerySpec tier2_template(const SchemaBinding& b);
QuerySpec tier3_template(const SchemaBinding& b);
QuerySpec tier4_template(const SchemaBinding& b);

struct Workload {
    SchemaBinding binding;
    std::vector<QuerySpec> queries;

    PropertyValue to_json() const;
    static Workload from_json(const PropertyValue& j);
};

// The four templates instantiated for one binding.
Workload default_workload(const SchemaBinding& binding);

Workload load_workload(const std::filesystem::path& path);
void save_workload(const std::filesystem::path& path, const Workload& workload);

}  // namespace kgbench
