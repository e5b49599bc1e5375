#include "kgbench/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace kgbench {

std::uint64_t scale_metric(const KnowledgeGraph& kg) {
    return static_cast<std::uint64_t>(kg.nodes.size()) +
           static_cast<std::uint64_t>(kg.edges.size());
}

double connectivity_density(const KnowledgeGraph& kg) {
    if (kg.nodes.empty())
        throw UndefinedMetric("connectivity_density", "|V| = 0, |E|/|V| has no value");
    return static_cast<double>(kg.edges.size()) / static_cast<double>(kg.nodes.size());
}

double type_diversity(const KnowledgeGraph& kg) {
    const auto classes = label_histogram(kg);
    const auto rels = reltype_histogram(kg);
    if (classes.empty())
        throw UndefinedMetric("type_diversity", "|C| = 0, ln|C| has no value");
    if (rels.empty())
        throw UndefinedMetric("type_diversity", "|R| = 0, ln|R| has no value");
    return std::log(static_cast<double>(classes.size())) +
           std::log(static_cast<double>(rels.size()));
}

double entropy_nats(const std::map<std::string, std::uint64_t>& histogram,
                    std::uint64_t total) {
    double h = 0.0;
    for (const auto& [name, count] : histogram) {
        if (count == 0) continue;  // 0 * log 0 := 0
        const double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h < 0.0 ? 0.0 : h;  // clamp -0.0 from the single-class case
}

double class_entropy(const KnowledgeGraph& kg) {
    if (kg.nodes.empty())
        throw UndefinedMetric("class_entropy", "|V| = 0, label distribution is empty");
    return entropy_nats(label_histogram(kg), kg.nodes.size());
}

double reltype_entropy(const KnowledgeGraph& kg) {
    if (kg.edges.empty())
        throw UndefinedMetric("reltype_entropy", "|E| = 0, rel-type distribution is empty");
    return entropy_nats(reltype_histogram(kg), kg.edges.size());
}

double semantic_richness(const KnowledgeGraph& kg) {
    return type_diversity(kg) + class_entropy(kg) + reltype_entropy(kg);
}

MetricsReport compute_all(const KnowledgeGraph& kg) {
    MetricsReport r;
    r.node_count = kg.nodes.size();
    r.edge_count = kg.edges.size();
    r.scale = scale_metric(kg);
    r.connectivity_density = connectivity_density(kg);
    r.type_diversity = type_diversity(kg);
    r.class_entropy = class_entropy(kg);
    r.reltype_entropy = reltype_entropy(kg);
    r.semantic_richness = r.type_diversity + r.class_entropy + r.reltype_entropy;
    r.class_count = label_histogram(kg).size();
    r.reltype_count = reltype_histogram(kg).size();
    return r;
}

PropertyValue MetricsReport::to_json() const {
    return PropertyValue{{"node_count", node_count},
                         {"edge_count", edge_count},
                         {"scale", scale},
                         {"connectivity_density", connectivity_density},
                         {"type_diversity", type_diversity},
                         {"class_entropy", class_entropy},
                         {"reltype_entropy", reltype_entropy},
                         {"semantic_richness", semantic_richness},
                         {"class_count", class_count},
                         {"reltype_count", reltype_count}};
}

MetricsReport MetricsReport::from_json(const PropertyValue& j) {
    MetricsReport r;
    r.node_count = j.at("node_count").get<std::uint64_t>();
    r.edge_count = j.at("edge_count").get<std::uint64_t>();
    r.scale = j.at("scale").get<std::uint64_t>();
    r.connectivity_density = j.at("connectivity_density").get<double>();
    r.type_diversity = j.at("type_diversity").get<double>();
    r.class_entropy = j.at("class_entropy").get<double>();
    r.reltype_entropy = j.at("reltype_entropy").get<double>();
    r.semantic_richness = j.at("semantic_richness").get<double>();
    r.class_count = j.at("class_count").get<std::uint64_t>();
    r.reltype_count = j.at("reltype_count").get<std::uint64_t>();
    return r;
}

double round2(double v) {
    return std::floor(v * 100.0 + 0.5) / 100.0;
}

static std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", round2(v));
    return buf;
}

std::string format_metrics_table(const std::vector<MetricsReport>& rows) {
    std::ostringstream out;
    const char* hdr = "Scale      Nodes      Relationships  Dtypes  HC     HR     SR     CD";
    out << hdr << "\n";
    for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-10llu %-10llu %-14llu %-7s %-6s %-6s %-6s %s",
                      static_cast<unsigned long long>(r.scale),
                      static_cast<unsigned long long>(r.node_count),
                      static_cast<unsigned long long>(r.edge_count),
                      fmt2(r.type_diversity).c_str(), fmt2(r.class_entropy).c_str(),
                      fmt2(r.reltype_entropy).c_str(), fmt2(r.semantic_richness).c_str(),
                      fmt2(r.connectivity_density).c_str());
        out << line << "\n";
    }
    return out.str();
}

}  // namespace kgbench
