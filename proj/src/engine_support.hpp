#pragma once

#include <set>
#include <string>
#include <variant>

#include "kgbench/engines.hpp"

namespace kgbench::detail {

// Catalog check shared by all engines. Unknown labels and relationship types
// are rejected before execution; an empty catalog (empty dataset) validates
// vacuously so queries over empty data return empty results.
inline void check_plan(const ExecutablePlan& plan, const std::string& engine_paradigm,
                       const std::set<std::string>& classes,
                       const std::set<std::string>& rel_types) {
    if (plan.paradigm != engine_paradigm)
        throw PlanValidationError("plan compiled for paradigm \"" + plan.paradigm +
                                  "\" handed to a \"" + engine_paradigm + "\" engine");
    auto check_class = [&](const std::string& label) {
        if (!classes.empty() && !classes.count(label))
            throw PlanValidationError("plan references unknown class label \"" + label + "\"");
    };
    auto check_rel = [&](const std::string& rel) {
        if (!rel_types.empty() && !rel_types.count(rel))
            throw PlanValidationError("plan references unknown relationship type \"" + rel + "\"");
    };
    for (const auto& stage : plan.spec.stages) {
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) {
            check_class(scan->label);
        } else if (const auto* expand = std::get_if<ExpandStage>(&stage)) {
            check_rel(expand->rel_type);
            if (!expand->target_label.empty()) check_class(expand->target_label);
        }
    }
}

// Bind-name -> row-slot assignment in stage order.
inline std::map<std::string, std::size_t> bind_slots(const QuerySpec& spec) {
    std::map<std::string, std::size_t> slots;
    for (const auto& stage : spec.stages) {
        const std::string* bind = nullptr;
        if (const auto* scan = std::get_if<NodeScanStage>(&stage)) bind = &scan->bind;
        if (const auto* expand = std::get_if<ExpandStage>(&stage)) bind = &expand->bind;
        if (const auto* nbh = std::get_if<NeighborhoodStage>(&stage)) bind = &nbh->bind;
        if (bind) slots.emplace(*bind, slots.size());
    }
    return slots;
}

}  // namespace kgbench::detail
