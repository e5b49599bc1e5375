#include "kgbench/scale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace kgbench {
namespace {

// Deterministic bounded draw (Lemire reduction); avoids the
// implementation-defined behaviour of std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::string pick_suffix(std::uint64_t copy) { return "#" + std::to_string(copy); }

// Largest-remainder allocation of `total` across positive weights, with a
// floor of one per bucket.
std::vector<std::uint64_t> allocate(std::uint64_t total, const std::vector<double>& weights) {
    const std::size_t k = weights.size();
    if (total < k) throw DataError("cannot allocate " + std::to_string(total) +
                                   " nodes across " + std::to_string(k) + " classes");
    const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    const std::uint64_t spare = total - k;
    std::vector<std::uint64_t> counts(k, 1);
    std::vector<std::pair<double, std::size_t>> remainders(k);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double quota = spare * weights[i] / weight_sum;
        const auto whole = static_cast<std::uint64_t>(quota);
        counts[i] += whole;
        assigned += whole;
        remainders[i] = {quota - static_cast<double>(whole), i};
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::uint64_t i = 0; i < spare - assigned; ++i) ++counts[remainders[i].second];
    return counts;
}

PropertyValue run_recipe(const FieldRecipe& r, std::mt19937_64& rng, std::uint64_t ordinal) {
    switch (r.kind) {
        case FieldRecipe::Kind::IntUniform:
            return static_cast<std::int64_t>(
                r.min + static_cast<std::int64_t>(bounded(rng, r.max - r.min + 1)));
        case FieldRecipe::Kind::Choice: {
            if (r.weights.empty()) return r.values[bounded(rng, r.values.size())];
            const std::uint64_t total =
                std::accumulate(r.weights.begin(), r.weights.end(), std::uint64_t{0});
            std::uint64_t draw = bounded(rng, total);
            for (std::size_t i = 0; i < r.weights.size(); ++i) {
                if (draw < r.weights[i]) return r.values[i];
                draw -= r.weights[i];
            }
            return r.values.back();
        }
        case FieldRecipe::Kind::Cycle:
            return r.values[ordinal % r.values.size()];
        case FieldRecipe::Kind::Const:
            return r.value;
    }
    return nullptr;
}

}  // namespace

ScalePlan plan_scale(const KnowledgeGraph& kg, unsigned duplications) {
    if (duplications >= 40) throw DataError("duplication count " + std::to_string(duplications) +
                                            " is past any realistic memory budget");
    return ScalePlan{kg.nodes.size(), kg.edges.size(), duplications};
}

KnowledgeGraph duplicate_merge(const KnowledgeGraph& kg, unsigned duplications,
                               std::uint64_t element_budget) {
    const ScalePlan plan = plan_scale(kg, duplications);
    if (plan.predicted_elements() > element_budget)
        throw DataError("refusing to duplicate: predicted " +
                        std::to_string(plan.predicted_nodes()) + " nodes + " +
                        std::to_string(plan.predicted_edges()) + " edges exceeds the budget of " +
                        std::to_string(element_budget) + " elements");

    if (duplications == 0) return kg;

    // Every copy, the zeroth included, gets a "#<copy>" id suffix. Appending
    // a '#' plus a decimal to unique base ids can never collide (the text
    // after the final '#' always spells the copy index), which keeps repeated
    // duplication safe even when base ids already carry suffixes.
    const std::uint64_t factor = plan.factor();
    KnowledgeGraph out;
    out.nodes.reserve(plan.predicted_nodes());
    out.edges.reserve(plan.predicted_edges());
    for (std::uint64_t copy = 0; copy < factor; ++copy) {
        const std::string suffix = pick_suffix(copy);
        for (const auto& n : kg.nodes)
            out.nodes.push_back({n.id + suffix, n.label, n.properties});
        for (const auto& e : kg.edges)
            out.edges.push_back(
                {e.id + suffix, e.rel_type, e.from + suffix, e.to + suffix, e.properties});
    }
    return out;
}

KnowledgeGraph generate_synthetic(const SyntheticSpec& spec) {
    // Resolve names.
    std::vector<std::string> classes = spec.class_names;
    if (classes.empty())
        for (unsigned i = 1; i <= spec.class_count; ++i) classes.push_back("C" + std::to_string(i));
    std::vector<std::string> rels = spec.reltype_names;
    if (rels.empty())
        for (unsigned i = 1; i <= spec.reltype_count; ++i) rels.push_back("R" + std::to_string(i));

    if (classes.empty()) throw DataError("synthetic spec needs at least one class");
    if (spec.node_count == 0) throw DataError("synthetic spec needs node_count > 0");
    if (spec.target_cd < 0.0) throw DataError("target CD must be non-negative");

    // Per-class node counts.
    std::vector<std::uint64_t> counts;
    switch (spec.label_dist) {
        case SyntheticSpec::LabelDist::Uniform:
            counts = allocate(spec.node_count, std::vector<double>(classes.size(), 1.0));
            break;
        case SyntheticSpec::LabelDist::Zipf: {
            std::vector<double> w(classes.size());
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] = std::pow(static_cast<double>(i + 1), -spec.zipf_s);
            counts = allocate(spec.node_count, w);
            break;
        }
        case SyntheticSpec::LabelDist::Counts: {
            std::uint64_t total = 0;
            for (const auto& name : classes) {
                auto it = spec.class_counts.find(name);
                if (it == spec.class_counts.end() || it->second == 0)
                    throw DataError("class_counts must give a positive count for class \"" +
                                    name + "\"");
                counts.push_back(it->second);
                total += it->second;
            }
            if (total != spec.node_count)
                throw DataError("class_counts sum to " + std::to_string(total) +
                                ", expected node_count = " + std::to_string(spec.node_count));
            break;
        }
    }

    // Edge feasibility.
    const auto edge_count =
        static_cast<std::uint64_t>(std::llround(spec.target_cd * static_cast<double>(spec.node_count)));
    if (edge_count > 0 && rels.empty())
        throw DataError("target CD > 0 requires at least one relationship type");
    if (edge_count == 0 && !rels.empty())
        throw DataError("target CD " + std::to_string(spec.target_cd) + " yields zero edges: "
                        "cannot realize " + std::to_string(rels.size()) +
                        " relationship types; maximum achievable with these settings is CD = 0");
    if (edge_count > 0 && edge_count < rels.size())
        throw DataError("target CD yields " + std::to_string(edge_count) +
                        " edges, fewer than the " + std::to_string(rels.size()) +
                        " relationship types to realize; smallest feasible CD is " +
                        std::to_string(static_cast<double>(rels.size()) /
                                       static_cast<double>(spec.node_count)));
    if (!rels.empty() &&
        static_cast<double>(edge_count) > static_cast<double>(spec.node_count) *
                                              static_cast<double>(spec.node_count) *
                                              static_cast<double>(rels.size()))
        throw DataError("target CD exceeds the distinct-triple capacity; maximum achievable is " +
                        std::to_string(static_cast<double>(spec.node_count) *
                                       static_cast<double>(rels.size())));
    if (spec.target_cd > 0.0) {
        const double realized = static_cast<double>(edge_count) / static_cast<double>(spec.node_count);
        if (std::abs(realized - spec.target_cd) > 0.01 * spec.target_cd)
            throw DataError("target CD " + std::to_string(spec.target_cd) +
                            " not achievable within 1% at " + std::to_string(spec.node_count) +
                            " nodes; nearest achievable is " + std::to_string(realized));
    }

    // Schema rules grouped per relationship type, validated against names.
    std::map<std::string, std::size_t> class_index;
    for (std::size_t i = 0; i < classes.size(); ++i) class_index.emplace(classes[i], i);
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> rules;
    for (const auto& rule : spec.schema) {
        if (std::find(rels.begin(), rels.end(), rule.rel_type) == rels.end())
            throw DataError("schema rule references unknown relationship type \"" +
                            rule.rel_type + "\"");
        auto f = class_index.find(rule.from_class);
        auto t = class_index.find(rule.to_class);
        if (f == class_index.end() || t == class_index.end())
            throw DataError("schema rule for \"" + rule.rel_type +
                            "\" references an unknown class");
        rules[rule.rel_type].emplace_back(f->second, t->second);
    }

    std::mt19937_64 rng(spec.seed);
    KnowledgeGraph kg;
    kg.nodes.reserve(spec.node_count);
    kg.edges.reserve(edge_count);

    // Nodes, class by class in declared order.
    std::vector<std::vector<std::uint32_t>> members(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto recipes = spec.properties.find(classes[c]);
        for (std::uint64_t i = 0; i < counts[c]; ++i) {
            Node n;
            n.id = classes[c] + "_" + std::to_string(i);
            n.label = classes[c];
            if (recipes != spec.properties.end())
                for (const auto& recipe : recipes->second)
                    n.properties[recipe.field] = run_recipe(recipe, rng, i);
            members[c].push_back(static_cast<std::uint32_t>(kg.nodes.size()));
            kg.nodes.push_back(std::move(n));
        }
    }

    // Edges round-robin over relationship types so the type histogram stays
    // as uniform as the count allows.
    std::vector<std::uint64_t> per_rel_ordinal(rels.size(), 0);
    for (std::uint64_t j = 0; j < edge_count; ++j) {
        const std::size_t r = j % rels.size();
        std::uint32_t from, to;
        const auto rule_it = rules.find(rels[r]);
        if (rule_it != rules.end()) {
            const auto& pair = rule_it->second[bounded(rng, rule_it->second.size())];
            from = members[pair.first][bounded(rng, members[pair.first].size())];
            to = members[pair.second][bounded(rng, members[pair.second].size())];
        } else {
            from = static_cast<std::uint32_t>(bounded(rng, kg.nodes.size()));
            to = static_cast<std::uint32_t>(bounded(rng, kg.nodes.size()));
        }
        Edge e;
        e.id = rels[r] + "_" + std::to_string(per_rel_ordinal[r]++);
        e.rel_type = rels[r];
        e.from = kg.nodes[from].id;
        e.to = kg.nodes[to].id;
        kg.edges.push_back(std::move(e));
    }
    return kg;
}

// --- spec (de)serialization ---

static FieldRecipe recipe_from_json(const PropertyValue& j) {
    FieldRecipe r;
    r.field = j.at("field").get<std::string>();
    const std::string gen = j.at("gen").get<std::string>();
    if (gen == "int_uniform") {
        r.kind = FieldRecipe::Kind::IntUniform;
        r.min = j.at("min").get<std::int64_t>();
        r.max = j.at("max").get<std::int64_t>();
        if (r.max < r.min) throw DataError("int_uniform: max < min for field " + r.field);
    } else if (gen == "choice" || gen == "cycle") {
        r.kind = gen == "choice" ? FieldRecipe::Kind::Choice : FieldRecipe::Kind::Cycle;
        r.values = j.at("values").get<std::vector<PropertyValue>>();
        if (r.values.empty()) throw DataError(gen + ": values may not be empty");
        if (j.contains("weights")) {
            r.weights = j.at("weights").get<std::vector<std::uint64_t>>();
            if (r.weights.size() != r.values.size())
                throw DataError("choice: weights and values differ in length");
        }
    } else if (gen == "const") {
        r.kind = FieldRecipe::Kind::Const;
        r.value = j.at("value");
    } else {
        throw DataError("unknown field generator \"" + gen + "\"");
    }
    return r;
}

static PropertyValue recipe_to_json(const FieldRecipe& r) {
    PropertyValue j{{"field", r.field}};
    switch (r.kind) {
        case FieldRecipe::Kind::IntUniform:
            j["gen"] = "int_uniform";
            j["min"] = r.min;
            j["max"] = r.max;
            break;
        case FieldRecipe::Kind::Choice:
            j["gen"] = "choice";
            j["values"] = r.values;
            if (!r.weights.empty()) j["weights"] = r.weights;
            break;
        case FieldRecipe::Kind::Cycle:
            j["gen"] = "cycle";
            j["values"] = r.values;
            break;
        case FieldRecipe::Kind::Const:
            j["gen"] = "const";
            j["value"] = r.value;
            break;
    }
    return j;
}

PropertyValue SyntheticSpec::to_json() const {
    PropertyValue j;
    j["node_count"] = node_count;
    if (!class_names.empty()) j["classes"] = class_names;
    else j["class_count"] = class_count;
    if (!reltype_names.empty()) j["reltypes"] = reltype_names;
    else j["reltype_count"] = reltype_count;
    switch (label_dist) {
        case LabelDist::Uniform: j["label_distribution"] = {{"kind", "uniform"}}; break;
        case LabelDist::Zipf: j["label_distribution"] = {{"kind", "zipf"}, {"s", zipf_s}}; break;
        case LabelDist::Counts:
            j["label_distribution"] = {{"kind", "counts"}, {"counts", class_counts}};
            break;
    }
    j["target_cd"] = target_cd;
    j["seed"] = seed;
    if (!schema.empty()) {
        PropertyValue arr = PropertyValue::array();
        for (const auto& rule : schema)
            arr.push_back({{"rel", rule.rel_type}, {"from", rule.from_class}, {"to", rule.to_class}});
        j["schema"] = arr;
    }
    if (!properties.empty()) {
        PropertyValue obj = PropertyValue::object();
        for (const auto& [cls, recipes] : properties) {
            PropertyValue arr = PropertyValue::array();
            for (const auto& r : recipes) arr.push_back(recipe_to_json(r));
            obj[cls] = arr;
        }
        j["properties"] = obj;
    }
    return j;
}

SyntheticSpec SyntheticSpec::from_json(const PropertyValue& j) {
    SyntheticSpec s;
    s.node_count = j.at("node_count").get<std::uint64_t>();
    if (j.contains("classes")) s.class_names = j.at("classes").get<std::vector<std::string>>();
    else s.class_count = j.at("class_count").get<unsigned>();
    if (j.contains("reltypes")) s.reltype_names = j.at("reltypes").get<std::vector<std::string>>();
    else if (j.contains("reltype_count")) s.reltype_count = j.at("reltype_count").get<unsigned>();
    if (j.contains("label_distribution")) {
        const auto& dist = j.at("label_distribution");
        const std::string kind = dist.at("kind").get<std::string>();
        if (kind == "uniform") {
            s.label_dist = LabelDist::Uniform;
        } else if (kind == "zipf") {
            s.label_dist = LabelDist::Zipf;
            s.zipf_s = dist.value("s", 1.0);
        } else if (kind == "counts") {
            s.label_dist = LabelDist::Counts;
            for (const auto& [name, count] : dist.at("counts").items())
                s.class_counts.emplace(name, count.get<std::uint64_t>());
        } else {
            throw DataError("unknown label distribution \"" + kind + "\"");
        }
    }
    s.target_cd = j.value("target_cd", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("schema"))
        for (const auto& rule : j.at("schema"))
            s.schema.push_back({rule.at("rel").get<std::string>(),
                                rule.at("from").get<std::string>(),
                                rule.at("to").get<std::string>()});
    if (j.contains("properties"))
        for (const auto& [cls, arr] : j.at("properties").items()) {
            std::vector<FieldRecipe> recipes;
            for (const auto& r : arr) recipes.push_back(recipe_from_json(r));
            s.properties.emplace(cls, std::move(recipes));
        }
    return s;
}

}  // namespace kgbench
