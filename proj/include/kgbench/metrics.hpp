#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kgbench/errors.hpp"
#include "kgbench/graph.hpp"

namespace kgbench {

// The three complexity dimensions of one graph: volumetric scale,
// connectivity density, and semantic richness with its type-diversity
// and entropy components. All entropies in nats.
struct MetricsReport {
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
    std::uint64_t scale = 0;              // |V| + |E|
    double connectivity_density = 0.0;    // |E| / |V|
    double type_diversity = 0.0;          // ln|C| + ln|R|
    double class_entropy = 0.0;           // H over the label distribution
    double reltype_entropy = 0.0;         // H over the rel-type distribution
    double semantic_richness = 0.0;       // type_diversity + both entropies
    std::uint64_t class_count = 0;
    std::uint64_t reltype_count = 0;

    PropertyValue to_json() const;
    static MetricsReport from_json(const PropertyValue& j);
};

std::uint64_t scale_metric(const KnowledgeGraph& kg);

// Throws UndefinedMetric when |V| = 0.
double connectivity_density(const KnowledgeGraph& kg);

// Throws UndefinedMetric when |C| = 0 or |R| = 0.
double type_diversity(const KnowledgeGraph& kg);

// Shannon entropy of the label / rel-type frequency distribution,
// with the 0 * log 0 = 0 convention. Throw on empty support.
double class_entropy(const KnowledgeGraph& kg);
double reltype_entropy(const KnowledgeGraph& kg);

double semantic_richness(const KnowledgeGraph& kg);

// Fills every field consistently; semantic_richness is the exact sum of the
// three components computed here (not an independent recomputation).
MetricsReport compute_all(const KnowledgeGraph& kg);

// Entropy in nats of a frequency histogram. Iteration follows the map's
// key order, so equal histograms always sum in the same order.
double entropy_nats(const std::map<std::string, std::uint64_t>& histogram,
                    std::uint64_t total);

// Half-up rounding to two decimals, for human-readable output only.
double round2(double v);

// Aligned text table, one row per report: S, |V|, |E|, Dtypes, HC, HR, SR, CD.
std::string format_metrics_table(const std::vector<MetricsReport>& rows);

}  // namespace kgbench
