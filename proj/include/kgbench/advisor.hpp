#pragma once

#include <array>
#include <string>
#include <vector>

#include "kgbench/errors.hpp"
#include "kgbench/metrics.hpp"

namespace kgbench {

// Expected query mix as tier weights. Ties on the argmax resolve to the
// higher (deeper) tier.
struct WorkloadProfile {
    std::array<double, 4> tier_weights{0.25, 0.25, 0.25, 0.25};

    void validate() const;         // weights >= 0, sum = 1 (within 1e-9)
    int dominant_tier() const;     // 1..4
    PropertyValue to_json() const;
};

// Threshold bands behind the selection rules; overridable from a rules file.
struct AdvisorConfig {
    double sr_graph_threshold = 8.0;    // SR above this favors graph-native
    double cd_graph_threshold = 0.8;    // CD above this favors graph-native
    double sr_mixed_low = 5.0;          // SR band with mixed connectivity
    double sr_mixed_high = 10.0;        //   favors multi-model on 1-hop joins
    double cd_mixed_low = 0.6;
    double cd_mixed_high = 0.85;
    double cd_sparse = 0.6;             // below this, edges count as sparse

    static AdvisorConfig from_json(const PropertyValue& j);
};

struct FiredRule {
    std::string id;         // R1..R5
    std::string condition;  // the predicate that matched, with its inputs
    std::string rationale;  // why the winning paradigm fits that condition
};

struct Recommendation {
    std::vector<std::string> ranking;  // all three paradigms, best first
    std::vector<FiredRule> fired;
    MetricsReport metrics;
    WorkloadProfile profile;

    PropertyValue to_json() const;
};

// Total and deterministic over valid inputs: exactly one rule decides first
// place. Workload shape takes precedence over the static metric bands.
Recommendation advise(const MetricsReport& metrics, const WorkloadProfile& profile,
                      const AdvisorConfig& config = {});

// Human-readable report: inputs, fired rules, rationale per rule.
std::string explain(const Recommendation& rec);

}  // namespace kgbench
