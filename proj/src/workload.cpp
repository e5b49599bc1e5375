#include "kgbench/workload.hpp"

#include <fstream>
#include <set>

namespace kgbench {
namespace {

PropertyValue predicate_to_json(const Predicate& p) {
    PropertyValue j{{"field", p.field}};
    switch (p.cmp) {
        case Predicate::Cmp::Eq:
            j["cmp"] = "eq";
            j["value"] = p.value;
            break;
        case Predicate::Cmp::In:
            j["cmp"] = "in";
            j["values"] = p.values;
            break;
        case Predicate::Cmp::Range:
            j["cmp"] = "range";
            j["min"] = p.min;
            j["max"] = p.max;
            break;
    }
    return j;
}

Predicate predicate_from_json(const PropertyValue& j) {
    Predicate p;
    p.field = j.at("field").get<std::string>();
    const std::string cmp = j.at("cmp").get<std::string>();
    if (cmp == "eq") {
        p.cmp = Predicate::Cmp::Eq;
        p.value = j.at("value");
    } else if (cmp == "in") {
        p.cmp = Predicate::Cmp::In;
        p.values = j.at("values").get<std::vector<PropertyValue>>();
    } else if (cmp == "range") {
        p.cmp = Predicate::Cmp::Range;
        p.min = j.at("min").get<double>();
        p.max = j.at("max").get<double>();
    } else {
        throw DataError("unknown comparator \"" + cmp + "\"");
    }
    return p;
}

PropertyValue predicates_to_json(const std::vector<Predicate>& preds) {
    PropertyValue arr = PropertyValue::array();
    for (const auto& p : preds) arr.push_back(predicate_to_json(p));
    return arr;
}

std::vector<Predicate> predicates_from_json(const PropertyValue& j) {
    std::vector<Predicate> out;
    for (const auto& p : j) out.push_back(predicate_from_json(p));
    return out;
}

PropertyValue stage_to_json(const Stage& stage) {
    PropertyValue j;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, NodeScanStage>) {
                j["op"] = "scan";
                j["label"] = s.label;
                j["bind"] = s.bind;
                if (!s.predicates.empty()) j["predicates"] = predicates_to_json(s.predicates);
            } else if constexpr (std::is_same_v<T, ExpandStage>) {
                j["op"] = "expand";
                j["source"] = s.source;
                j["rel"] = s.rel_type;
                j["dir"] = s.dir == ExpandStage::Dir::Out ? "out" : "in";
                if (!s.target_label.empty()) j["target_label"] = s.target_label;
                j["bind"] = s.bind;
                if (!s.predicates.empty()) j["predicates"] = predicates_to_json(s.predicates);
            } else if constexpr (std::is_same_v<T, NeighborhoodStage>) {
                j["op"] = "neighborhood";
                j["source"] = s.source;
                j["depth"] = s.max_depth;
                j["bind"] = s.bind;
            } else {
                j["op"] = "project";
                PropertyValue cols = PropertyValue::array();
                for (const auto& c : s.columns) {
                    PropertyValue col{{"as", c.name}, {"from", c.source}};
                    switch (c.attr) {
                        case ProjectColumn::Attr::Id: col["attr"] = "id"; break;
                        case ProjectColumn::Attr::Label: col["attr"] = "label"; break;
                        case ProjectColumn::Attr::Property:
                            col["attr"] = "property";
                            col["field"] = c.field;
                            break;
                    }
                    cols.push_back(col);
                }
                j["columns"] = cols;
            }
        },
        stage);
    return j;
}

Stage stage_from_json(const PropertyValue& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "scan") {
        NodeScanStage s;
        s.label = j.at("label").get<std::string>();
        s.bind = j.at("bind").get<std::string>();
        if (j.contains("predicates")) s.predicates = predicates_from_json(j.at("predicates"));
        return s;
    }
    if (op == "expand") {
        ExpandStage s;
        s.source = j.at("source").get<std::string>();
        s.rel_type = j.at("rel").get<std::string>();
        const std::string dir = j.value("dir", "out");
        if (dir == "out") s.dir = ExpandStage::Dir::Out;
        else if (dir == "in") s.dir = ExpandStage::Dir::In;
        else throw DataError("unknown expand direction \"" + dir + "\"");
        s.target_label = j.value("target_label", "");
        s.bind = j.at("bind").get<std::string>();
        if (j.contains("predicates")) s.predicates = predicates_from_json(j.at("predicates"));
        return s;
    }
    if (op == "neighborhood") {
        NeighborhoodStage s;
        s.source = j.at("source").get<std::string>();
        s.max_depth = j.value("depth", 1u);
        s.bind = j.at("bind").get<std::string>();
        return s;
    }
    if (op == "project") {
        ProjectStage s;
        for (const auto& col : j.at("columns")) {
            ProjectColumn c;
            c.name = col.at("as").get<std::string>();
            c.source = col.at("from").get<std::string>();
            const std::string attr = col.at("attr").get<std::string>();
            if (attr == "id") c.attr = ProjectColumn::Attr::Id;
            else if (attr == "label") c.attr = ProjectColumn::Attr::Label;
            else if (attr == "property") {
                c.attr = ProjectColumn::Attr::Property;
                c.field = col.at("field").get<std::string>();
            } else {
                throw DataError("unknown projection attribute \"" + attr + "\"");
            }
            s.columns.push_back(std::move(c));
        }
        return s;
    }
    throw DataError("unknown stage op \"" + op + "\"");
}

void require(bool ok, const std::string& what) {
    if (!ok) throw CompileError(what);
}

}  // namespace

PropertyValue QuerySpec::to_json() const {
    PropertyValue stages_json = PropertyValue::array();
    for (const auto& s : stages) stages_json.push_back(stage_to_json(s));
    return PropertyValue{{"id", id}, {"tier", tier}, {"stages", stages_json}};
}

QuerySpec QuerySpec::from_json(const PropertyValue& j) {
    QuerySpec spec;
    spec.id = j.at("id").get<std::string>();
    spec.tier = j.at("tier").get<int>();
    for (const auto& s : j.at("stages")) spec.stages.push_back(stage_from_json(s));
    return spec;
}

bool operator==(const QuerySpec& a, const QuerySpec& b) {
    return a.to_json() == b.to_json();
}

void validate_spec(const QuerySpec& spec) {
    require(!spec.id.empty(), "query id may not be empty");
    require(spec.tier >= 1 && spec.tier <= 4, "query \"" + spec.id + "\": tier must be 1..4");
    require(!spec.stages.empty(), "query \"" + spec.id + "\": no stages");
    require(std::holds_alternative<NodeScanStage>(spec.stages.front()),
            "query \"" + spec.id + "\": first stage must be a scan");
    require(std::holds_alternative<ProjectStage>(spec.stages.back()),
            "query \"" + spec.id + "\": last stage must be a projection");

    std::set<std::string> bound;
    std::size_t expands = 0, neighborhoods = 0;
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const Stage& stage = spec.stages[i];
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
            require(i == 0, "query \"" + spec.id + "\": scan must be the first stage");
            require(!scan->bind.empty() && !scan->label.empty(),
                    "query \"" + spec.id + "\": scan needs a label and a binding");
            bound.insert(scan->bind);
        } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
            ++expands;
            require(bound.count(expand->source),
                    "query \"" + spec.id + "\": expand source \"" + expand->source +
                        "\" is not bound");
            require(!expand->bind.empty() && !bound.count(expand->bind),
                    "query \"" + spec.id + "\": expand binding missing or reused");
            require(!expand->rel_type.empty(),
                    "query \"" + spec.id + "\": expand needs a relationship type");
            bound.insert(expand->bind);
        } else if (const auto* nbh = std::get_if<NeighborhoodStage>(&stage)) {
            ++neighborhoods;
            require(bound.count(nbh->source),
                    "query \"" + spec.id + "\": neighborhood source \"" + nbh->source +
                        "\" is not bound");
            require(!nbh->bind.empty() && !bound.count(nbh->bind),
                    "query \"" + spec.id + "\": neighborhood binding missing or reused");
            require(nbh->max_depth >= 1, "query \"" + spec.id + "\": depth must be >= 1");
            bound.insert(nbh->bind);
        } else if (const auto* project = std::get_if<ProjectStage>(&stage)) {
            require(i + 1 == spec.stages.size(),
                    "query \"" + spec.id + "\": projection must be the final stage");
            require(!project->columns.empty(), "query \"" + spec.id + "\": empty projection");
            for (const auto& col : project->columns)
                require(bound.count(col.source), "query \"" + spec.id + "\": projection reads \"" +
                                                     col.source + "\" which is not bound");
        }
    }

    // Predicate sanity, any stage.
    for (const auto& stage : spec.stages) {
        const std::vector<Predicate>* preds = nullptr;
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) preds = &scan->predicates;
        if (const auto* expand = std::get_if<ExpandStage>(&stage)) preds = &expand->predicates;
        if (!preds) continue;
        for (const auto& p : *preds) {
            require(!p.field.empty(), "query \"" + spec.id + "\": predicate without a field");
            if (p.cmp == Predicate::Cmp::In)
                require(!p.values.empty(),
                        "query \"" + spec.id + "\": 'in' predicate with no values");
            if (p.cmp == Predicate::Cmp::Range)
                require(p.min <= p.max, "query \"" + spec.id + "\": range with min > max");
        }
    }

    switch (spec.tier) {
        case 1:
            require(expands == 0 && neighborhoods == 0,
                    "query \"" + spec.id + "\": tier 1 allows no expansion stages");
            break;
        case 2:
            require(expands == 1 && neighborhoods == 0,
                    "query \"" + spec.id + "\": tier 2 requires exactly one expand");
            break;
        case 3:
            require(expands >= 2 && neighborhoods == 0,
                    "query \"" + spec.id + "\": tier 3 requires two or more expands");
            break;
        case 4:
            require(neighborhoods >= 1,
                    "query \"" + spec.id + "\": tier 4 requires a neighborhood expansion");
            break;
    }
}

// --- schema binding ---

namespace {
void need(const std::string& value, const char* role) {
    if (value.empty()) throw BindingError(std::string("schema binding: role \"") + role +
                                          "\" is not resolved");
}
}  // namespace

PropertyValue SchemaBinding::to_json() const {
    return PropertyValue{{"case_label", case_label},
                         {"age_field", age_field},
                         {"age_min", age_min},
                         {"age_max", age_max},
                         {"gender_field", gender_field},
                         {"gender_values", gender_values},
                         {"occupation_field", occupation_field},
                         {"hospital_staff_value", hospital_staff_value},
                         {"age_group_label", age_group_label},
                         {"age_group_name_field", age_group_name_field},
                         {"age_group_values", age_group_values},
                         {"drug_label", drug_label},
                         {"manufacturer_label", manufacturer_label},
                         {"reaction_label", reaction_label},
                         {"outcome_label", outcome_label},
                         {"report_source_label", report_source_label},
                         {"therapy_label", therapy_label},
                         {"case_age_group_rel", case_age_group_rel},
                         {"case_drug_rel", case_drug_rel},
                         {"drug_manufacturer_rel", drug_manufacturer_rel},
                         {"tier4_depth", tier4_depth}};
}

SchemaBinding SchemaBinding::from_json(const PropertyValue& j) {
    SchemaBinding b;
    b.case_label = j.value("case_label", b.case_label);
    b.age_field = j.value("age_field", b.age_field);
    b.age_min = j.value("age_min", b.age_min);
    b.age_max = j.value("age_max", b.age_max);
    b.gender_field = j.value("gender_field", b.gender_field);
    if (j.contains("gender_values"))
        b.gender_values = j.at("gender_values").get<std::vector<std::string>>();
    b.occupation_field = j.value("occupation_field", b.occupation_field);
    b.hospital_staff_value = j.value("hospital_staff_value", b.hospital_staff_value);
    b.age_group_label = j.value("age_group_label", b.age_group_label);
    b.age_group_name_field = j.value("age_group_name_field", b.age_group_name_field);
    if (j.contains("age_group_values"))
        b.age_group_values = j.at("age_group_values").get<std::vector<std::string>>();
    b.drug_label = j.value("drug_label", b.drug_label);
    b.manufacturer_label = j.value("manufacturer_label", b.manufacturer_label);
    b.reaction_label = j.value("reaction_label", b.reaction_label);
    b.outcome_label = j.value("outcome_label", b.outcome_label);
    b.report_source_label = j.value("report_source_label", b.report_source_label);
    b.therapy_label = j.value("therapy_label", b.therapy_label);
    b.case_age_group_rel = j.value("case_age_group_rel", b.case_age_group_rel);
    b.case_drug_rel = j.value("case_drug_rel", b.case_drug_rel);
    b.drug_manufacturer_rel = j.value("drug_manufacturer_rel", b.drug_manufacturer_rel);
    b.tier4_depth = j.value("tier4_depth", b.tier4_depth);
    return b;
}

void validate_binding(const SchemaBinding& b, const KnowledgeGraph& kg) {
    if (kg.nodes.empty()) return;
    const auto classes = kg.class_set();
    const auto rels = kg.rel_type_set();
    auto check_class = [&](const std::string& name, const char* role) {
        if (!classes.count(name))
            throw BindingError("binding role \"" + std::string(role) + "\" = \"" + name +
                               "\" names a class absent from the dataset");
    };
    auto check_rel = [&](const std::string& name, const char* role) {
        if (!rels.empty() && !rels.count(name))
            throw BindingError("binding role \"" + std::string(role) + "\" = \"" + name +
                               "\" names a relationship type absent from the dataset");
    };
    check_class(b.case_label, "case_label");
    check_class(b.age_group_label, "age_group_label");
    check_class(b.drug_label, "drug_label");
    check_class(b.manufacturer_label, "manufacturer_label");
    check_rel(b.case_age_group_rel, "case_age_group_rel");
    check_rel(b.case_drug_rel, "case_drug_rel");
    check_rel(b.drug_manufacturer_rel, "drug_manufacturer_rel");
}

// --- tier templates ---

QuerySpec tier1_template(const SchemaBinding& b) {
    need(b.case_label, "case_label");
    need(b.age_field, "age_field");
    need(b.occupation_field, "occupation_field");
    need(b.gender_field, "gender_field");
    if (b.gender_values.empty()) throw BindingError("schema binding: gender_values is empty");

    Predicate age{b.age_field, Predicate::Cmp::Range, nullptr, {}, b.age_min, b.age_max};
    Predicate occupation{b.occupation_field, Predicate::Cmp::Eq,
                         PropertyValue(b.hospital_staff_value), {}, 0, 0};
    Predicate gender{b.gender_field, Predicate::Cmp::In, nullptr, {}, 0, 0};
    for (const auto& v : b.gender_values) gender.values.push_back(v);

    QuerySpec q;
    q.id = "tier1-attribute-filter";
    q.tier = 1;
    q.stages.push_back(NodeScanStage{b.case_label, {age, occupation, gender}, "case"});
    q.stages.push_back(ProjectStage{{
        {"case_id", "case", ProjectColumn::Attr::Id, ""},
        {"age", "case", ProjectColumn::Attr::Property, b.age_field},
        {"gender", "case", ProjectColumn::Attr::Property, b.gender_field},
    }});
    validate_spec(q);
    return q;
}

QuerySpec tier2_template(const SchemaBinding& b) {
    need(b.case_label, "case_label");
    need(b.occupation_field, "occupation_field");
    need(b.age_group_label, "age_group_label");
    need(b.age_group_name_field, "age_group_name_field");
    need(b.case_age_group_rel, "case_age_group_rel");
    if (b.age_group_values.empty()) throw BindingError("schema binding: age_group_values is empty");

    Predicate occupation{b.occupation_field, Predicate::Cmp::Eq,
                         PropertyValue(b.hospital_staff_value), {}, 0, 0};
    Predicate group{b.age_group_name_field, Predicate::Cmp::In, nullptr, {}, 0, 0};
    for (const auto& v : b.age_group_values) group.values.push_back(v);

    QuerySpec q;
    q.id = "tier2-filter-hop";
    q.tier = 2;
    q.stages.push_back(NodeScanStage{b.case_label, {occupation}, "case"});
    q.stages.push_back(ExpandStage{"case", b.case_age_group_rel, ExpandStage::Dir::Out,
                                   b.age_group_label, {group}, "grp"});
    q.stages.push_back(ProjectStage{{
        {"case_id", "case", ProjectColumn::Attr::Id, ""},
        {"age_group", "grp", ProjectColumn::Attr::Property, b.age_group_name_field},
    }});
    validate_spec(q);
    return q;
}

QuerySpec tier3_template(const SchemaBinding& b) {
    need(b.case_label, "case_label");
    need(b.drug_label, "drug_label");
    need(b.manufacturer_label, "manufacturer_label");
    need(b.age_group_label, "age_group_label");
    need(b.case_drug_rel, "case_drug_rel");
    need(b.drug_manufacturer_rel, "drug_manufacturer_rel");
    need(b.case_age_group_rel, "case_age_group_rel");

    QuerySpec q;
    q.id = "tier3-multi-join";
    q.tier = 3;
    q.stages.push_back(NodeScanStage{b.case_label, {}, "case"});
    q.stages.push_back(
        ExpandStage{"case", b.case_drug_rel, ExpandStage::Dir::Out, b.drug_label, {}, "drug"});
    q.stages.push_back(ExpandStage{"drug", b.drug_manufacturer_rel, ExpandStage::Dir::Out,
                                   b.manufacturer_label, {}, "mfr"});
    q.stages.push_back(ExpandStage{"case", b.case_age_group_rel, ExpandStage::Dir::Out,
                                   b.age_group_label, {}, "grp"});
    q.stages.push_back(ProjectStage{{
        {"case_id", "case", ProjectColumn::Attr::Id, ""},
        {"drug_id", "drug", ProjectColumn::Attr::Id, ""},
        {"manufacturer_id", "mfr", ProjectColumn::Attr::Id, ""},
        {"age_group_id", "grp", ProjectColumn::Attr::Id, ""},
    }});
    validate_spec(q);
    return q;
}

QuerySpec tier4_template(const SchemaBinding& b) {
    need(b.case_label, "case_label");
    if (b.tier4_depth < 1) throw BindingError("schema binding: tier4_depth must be >= 1");

    QuerySpec q;
    q.id = b.tier4_depth == 1 ? "tier4-neighborhood" : "tier4-deep-traversal";
    q.tier = 4;
    q.stages.push_back(NodeScanStage{b.case_label, {}, "case"});
    q.stages.push_back(NeighborhoodStage{"case", b.tier4_depth, "nbr"});
    q.stages.push_back(ProjectStage{{
        {"case_id", "case", ProjectColumn::Attr::Id, ""},
        {"neighbor_label", "nbr", ProjectColumn::Attr::Label, ""},
        {"neighbor_id", "nbr", ProjectColumn::Attr::Id, ""},
    }});
    validate_spec(q);
    return q;
}

Workload default_workload(const SchemaBinding& binding) {
    return Workload{binding,
                    {tier1_template(binding), tier2_template(binding), tier3_template(binding),
                     tier4_template(binding)}};
}

PropertyValue Workload::to_json() const {
    PropertyValue queries_json = PropertyValue::array();
    for (const auto& q : queries) queries_json.push_back(q.to_json());
    return PropertyValue{{"binding", binding.to_json()}, {"queries", queries_json}};
}

Workload Workload::from_json(const PropertyValue& j) {
    Workload w;
    if (j.contains("binding")) w.binding = SchemaBinding::from_json(j.at("binding"));
    if (j.contains("queries")) {
        for (const auto& q : j.at("queries")) {
            QuerySpec spec = QuerySpec::from_json(q);
            validate_spec(spec);
            w.queries.push_back(std::move(spec));
        }
    } else {
        w.queries = default_workload(w.binding).queries;
    }
    return w;
}

Workload load_workload(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open workload file " + path.string());
    PropertyValue j = PropertyValue::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError(path.string() + ": invalid JSON");
    return Workload::from_json(j);
}

void save_workload(const std::filesystem::path& path, const Workload& workload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write workload file " + path.string());
    out << workload.to_json().dump(2) << '\n';
}

}  // namespace kgbench
