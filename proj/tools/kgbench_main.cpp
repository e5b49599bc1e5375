#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "kgbench/advisor.hpp"
#include "kgbench/convert.hpp"
#include "kgbench/engines.hpp"
#include "kgbench/harness.hpp"
#include "kgbench/metrics.hpp"
#include "kgbench/scale.hpp"
#include "kgbench/stats.hpp"
#include "kgbench/version.hpp"
#include "kgbench/workload.hpp"

namespace fs = std::filesystem;
using namespace kgbench;

namespace {

bool g_verbose = false;

void note(const std::string& msg) {
    if (g_verbose) std::cerr << "[kgbench] " << msg << "\n";
}

PropertyValue read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    PropertyValue j = PropertyValue::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError(path.string() + ": invalid JSON");
    return j;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

struct BenchConfig {
    std::string dataset;
    std::string workload_file;
    std::string out_dir = "bench-out";
    std::vector<std::uint64_t> scales{1, 8, 128};
    std::vector<std::string> backends{"document", "graph", "multimodel"};
    int runs = kDefaultRuns;
    std::uint64_t seed = 0;
    bool verify = false;
    bool shuffle = false;
    std::string timestamp;
    std::uint64_t max_elements = kDefaultElementBudget;

    PropertyValue to_json() const {
        return PropertyValue{{"dataset", dataset},     {"workload", workload_file},
                             {"out", out_dir},         {"scales", scales},
                             {"backends", backends},   {"runs", runs},
                             {"seed", seed},           {"verify", verify},
                             {"shuffle", shuffle},     {"max_elements", max_elements}};
    }

    void apply_json(const PropertyValue& j) {
        dataset = j.value("dataset", dataset);
        workload_file = j.value("workload", workload_file);
        out_dir = j.value("out", out_dir);
        if (j.contains("scales")) scales = j.at("scales").get<std::vector<std::uint64_t>>();
        if (j.contains("backends")) backends = j.at("backends").get<std::vector<std::string>>();
        runs = j.value("runs", runs);
        seed = j.value("seed", seed);
        verify = j.value("verify", verify);
        shuffle = j.value("shuffle", shuffle);
        timestamp = j.value("timestamp", timestamp);
        max_elements = j.value("max_elements", max_elements);
    }
};

unsigned duplications_for(std::uint64_t factor) {
    if (factor == 0 || (factor & (factor - 1)) != 0)
        throw DataError("scale factor " + std::to_string(factor) + " is not a power of two");
    unsigned n = 0;
    while ((std::uint64_t{1} << n) < factor) ++n;
    return n;
}

int cmd_convert(const std::string& in, const std::string& out, const std::string& target) {
    const KnowledgeGraph kg = load_csv_bundle(in);
    note("loaded " + std::to_string(kg.nodes.size()) + " nodes, " +
         std::to_string(kg.edges.size()) + " edges");
    if (target == "document" || target == "both")
        write_document_dump(fs::path(out) / "document", to_document_dump(kg));
    if (target == "multimodel" || target == "both")
        write_multimodel_dump(fs::path(out) / "multimodel", to_multimodel_dump(kg));
    return 0;
}

int cmd_metrics(const std::string& in, const std::string& json_out) {
    const KnowledgeGraph kg = load_csv_bundle(in);
    const MetricsReport report = compute_all(kg);
    if (json_out == "-") {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        std::cout << format_metrics_table({report});
        if (!json_out.empty()) write_text_file(json_out, report.to_json().dump(2) + "\n");
    }
    return 0;
}

int cmd_scale(const std::string& in, const std::string& out, unsigned n,
              std::uint64_t max_elements) {
    const KnowledgeGraph kg = load_csv_bundle(in);
    const KnowledgeGraph scaled = duplicate_merge(kg, n, max_elements);
    write_csv_bundle(out, scaled);
    std::cerr << "wrote " << scaled.nodes.size() << " nodes, " << scaled.edges.size()
              << " edges to " << out << "\n";
    return 0;
}

int cmd_gen(const std::string& spec_path, const std::string& out) {
    const SyntheticSpec spec = SyntheticSpec::from_json(read_json_file(spec_path));
    const KnowledgeGraph kg = generate_synthetic(spec);
    write_csv_bundle(out, kg);
    std::cerr << "generated " << kg.nodes.size() << " nodes, " << kg.edges.size() << " edges to "
              << out << "\n";
    return 0;
}

int cmd_advise(const std::string& metrics_path, const std::vector<double>& weights,
               const std::string& rules_path, const std::string& json_out) {
    const MetricsReport metrics = MetricsReport::from_json(read_json_file(metrics_path));
    WorkloadProfile profile;
    if (weights.size() != 4) throw DataError("--tier-weights needs exactly 4 values");
    std::copy(weights.begin(), weights.end(), profile.tier_weights.begin());
    AdvisorConfig config;
    if (!rules_path.empty()) config = AdvisorConfig::from_json(read_json_file(rules_path));
    const Recommendation rec = advise(metrics, profile, config);
    if (json_out == "-") std::cout << rec.to_json().dump(2) << "\n";
    else std::cout << explain(rec);
    if (!json_out.empty() && json_out != "-")
        write_text_file(json_out, rec.to_json().dump(2) + "\n");
    return 0;
}

int cmd_report(const std::string& runs_path, const std::string& out,
               const std::string& timestamp) {
    const std::vector<RunRecord> records = read_runs_csv(runs_path);
    const std::vector<AggregateRow> rows = aggregate(records);
    const EnvSnapshot snapshot = EnvSnapshot::capture(timestamp);
    for (const auto& f : emit_report(rows, records, out, snapshot)) note("wrote " + f);
    return 0;
}

int cmd_bench(const BenchConfig& cfg) {
    if (cfg.runs < 2) throw DataError("bench needs runs >= 2 for confidence intervals");
    for (std::uint64_t f : cfg.scales) duplications_for(f);
    for (const auto& b : cfg.backends)
        if (std::find(known_paradigms().begin(), known_paradigms().end(), b) ==
            known_paradigms().end())
            throw DataError("unknown backend \"" + b + "\"");

    const auto base = std::make_shared<const KnowledgeGraph>(load_csv_bundle(cfg.dataset));
    const Workload workload = load_workload(cfg.workload_file);
    if (workload.queries.empty()) throw DataError("workload has no queries");
    validate_binding(workload.binding, *base);
    const EnvSnapshot snapshot = EnvSnapshot::capture(cfg.timestamp);

    std::vector<RunRecord> records;
    PropertyValue metrics_rows = PropertyValue::array();
    PropertyValue manifest_cells = PropertyValue::array();
    std::mt19937_64 shuffle_rng(cfg.seed);

    std::vector<std::uint64_t> scales = cfg.scales;
    std::sort(scales.begin(), scales.end());

    for (std::uint64_t factor : scales) {
        const unsigned n = duplications_for(factor);
        note("scale " + std::to_string(factor) + "x: preparing data");
        const auto graph =
            factor == 1 ? base
                        : std::make_shared<const KnowledgeGraph>(
                              duplicate_merge(*base, n, cfg.max_elements));

        // Metric computation runs on the ingested data, once per scale.
        const MetricsReport metrics = compute_all(*graph);
        PropertyValue row = metrics.to_json();
        row["scale_factor"] = factor;
        metrics_rows.push_back(row);

        std::map<std::string, std::unique_ptr<Backend>> engines;
        for (const auto& name : cfg.backends) {
            note("scale " + std::to_string(factor) + "x: ingesting into " + name);
            engines.emplace(name, ingest(name, IngestSource(graph)));
        }

        std::unique_ptr<Backend> oracle;
        if (cfg.verify) oracle = make_oracle_engine(graph);

        for (const auto& query : workload.queries) {
            if (cfg.verify) {
                const ResultSet truth = oracle->execute(compile(query, "oracle"));
                for (const auto& name : cfg.backends) {
                    if (name == "oracle") continue;
                    const ResultSet got =
                        engines.at(name)->execute(compile(query, name));
                    if (!multiset_equal(truth, got))
                        throw ProtocolError("verification failed: " + name + " disagrees with "
                                            "the oracle on query \"" + query.id + "\" at scale " +
                                            std::to_string(factor));
                }
                for (auto& [name, engine] : engines) engine->clear_caches();
                note("scale " + std::to_string(factor) + "x: " + query.id + " verified");
            }

            struct Cell {
                std::string mode;
                std::string backend;
            };
            std::vector<Cell> cells;
            for (const std::string mode : {"cold", "hot"})
                for (const auto& name : cfg.backends) cells.push_back({mode, name});
            if (cfg.shuffle) std::shuffle(cells.begin(), cells.end(), shuffle_rng);

            for (const auto& cell : cells) {
                note("scale " + std::to_string(factor) + "x: " + query.id + " " + cell.backend +
                     " " + cell.mode);
                Backend& engine = *engines.at(cell.backend);
                const ExecutablePlan plan = compile(query, cell.backend);
                const auto cell_records = run_cell(engine, plan, cell.mode, cfg.runs, factor);
                manifest_cells.push_back({{"backend", cell.backend},
                                          {"query_id", query.id},
                                          {"scale", factor},
                                          {"mode", cell.mode},
                                          {"runs", cell_records.size()},
                                          {"result_count", cell_records.front().result_count}});
                records.insert(records.end(), cell_records.begin(), cell_records.end());
            }
        }
    }

    const std::vector<AggregateRow> rows = aggregate(records);
    std::vector<std::string> files = emit_report(rows, records, cfg.out_dir, snapshot);

    write_text_file(fs::path(cfg.out_dir) / "metrics.json", metrics_rows.dump(2) + "\n");
    files.push_back("metrics.json");

    PropertyValue manifest{{"config", cfg.to_json()},
                           {"environment", snapshot.to_json()},
                           {"cells", manifest_cells},
                           {"files", files}};
    write_text_file(fs::path(cfg.out_dir) / "manifest.json", manifest.dump(2) + "\n");

    std::vector<MetricsReport> table;
    for (const auto& row : metrics_rows) table.push_back(MetricsReport::from_json(row));
    std::cout << format_metrics_table(table);
    std::cout << "cells: " << manifest_cells.size() << ", report in " << cfg.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph storage paradigm benchmark"};
    app.set_version_flag("--version", kVersion);
    app.add_flag("--verbose", g_verbose, "diagnostics on stderr");
    app.require_subcommand(1);

    // convert
    std::string conv_in, conv_out = ".", conv_to = "both";
    auto* convert_cmd =
        app.add_subcommand("convert", "CSV bundle -> document / multi-model dumps");
    convert_cmd->add_option("--in", conv_in, "CSV bundle directory")->required();
    convert_cmd->add_option("--out", conv_out, "output directory");
    convert_cmd->add_option("--to", conv_to, "document | multimodel | both")
        ->check(CLI::IsMember({"document", "multimodel", "both"}));

    // metrics
    std::string met_in, met_json;
    auto* metrics_cmd = app.add_subcommand("metrics", "complexity metrics of a CSV bundle");
    metrics_cmd->add_option("--in", met_in, "CSV bundle directory")->required();
    metrics_cmd->add_option("--json", met_json, "write JSON here ('-' for stdout)");

    // scale
    std::string scale_in, scale_out;
    unsigned scale_n = 0;
    std::uint64_t scale_budget = kDefaultElementBudget;
    auto* scale_cmd = app.add_subcommand("scale", "duplicate a CSV bundle 2^n times");
    scale_cmd->add_option("--in", scale_in, "CSV bundle directory")->required();
    scale_cmd->add_option("--out", scale_out, "output bundle directory")->required();
    scale_cmd->add_option("--n", scale_n, "number of duplications")->required();
    scale_cmd->add_option("--max-elements", scale_budget, "element budget");

    // gen
    std::string gen_spec, gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic CSV bundle");
    gen_cmd->add_option("--spec", gen_spec, "synthetic spec JSON")->required();
    gen_cmd->add_option("--out", gen_out, "output bundle directory")->required();

    // bench
    BenchConfig bench;
    std::string bench_config_path;
    auto* bench_cmd = app.add_subcommand("bench", "run the full measurement pipeline");
    bench_cmd->add_option("--config", bench_config_path, "config JSON (flags override it)");
    auto* opt_in = bench_cmd->add_option("--in", bench.dataset, "CSV bundle directory");
    auto* opt_wl = bench_cmd->add_option("--workload", bench.workload_file, "workload JSON");
    auto* opt_out = bench_cmd->add_option("--out", bench.out_dir, "report directory");
    auto* opt_scales = bench_cmd->add_option("--scales", bench.scales, "scale factors (powers of 2)")->delimiter(',');
    auto* opt_backends = bench_cmd->add_option("--backends", bench.backends, "backends to run")->delimiter(',');
    auto* opt_runs = bench_cmd->add_option("--runs", bench.runs, "timed runs per cell");
    auto* opt_seed = bench_cmd->add_option("--seed", bench.seed, "shuffle seed");
    auto* opt_verify = bench_cmd->add_flag("--verify", bench.verify,
                                           "check engines against the oracle before timing");
    auto* opt_shuffle = bench_cmd->add_flag("--shuffle", bench.shuffle, "shuffle cell order");
    auto* opt_ts = bench_cmd->add_option("--timestamp", bench.timestamp,
                                         "fixed report timestamp (reproducible runs)");
    auto* opt_budget = bench_cmd->add_option("--max-elements", bench.max_elements,
                                             "duplication element budget");

    // report
    std::string rep_runs, rep_out, rep_ts;
    auto* report_cmd = app.add_subcommand("report", "re-aggregate a per-run CSV");
    report_cmd->add_option("--runs", rep_runs, "per-run CSV")->required();
    report_cmd->add_option("--out", rep_out, "report directory")->required();
    report_cmd->add_option("--timestamp", rep_ts, "fixed report timestamp");

    // advise
    std::string adv_metrics, adv_rules, adv_json;
    std::vector<double> adv_weights;
    auto* advise_cmd = app.add_subcommand("advise", "paradigm recommendation from metrics");
    advise_cmd->add_option("--metrics", adv_metrics, "metrics JSON (from `metrics --json`)")
        ->required();
    advise_cmd->add_option("--tier-weights", adv_weights, "four tier weights, e.g. 0.1,0.2,0.3,0.4")
        ->delimiter(',')
        ->expected(4)
        ->required();
    advise_cmd->add_option("--rules", adv_rules, "threshold bands JSON");
    advise_cmd->add_option("--json", adv_json, "write recommendation JSON ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (convert_cmd->parsed()) return cmd_convert(conv_in, conv_out, conv_to);
        if (metrics_cmd->parsed()) return cmd_metrics(met_in, met_json);
        if (scale_cmd->parsed()) return cmd_scale(scale_in, scale_out, scale_n, scale_budget);
        if (gen_cmd->parsed()) return cmd_gen(gen_spec, gen_out);
        if (report_cmd->parsed()) return cmd_report(rep_runs, rep_out, rep_ts);
        if (advise_cmd->parsed()) return cmd_advise(adv_metrics, adv_weights, adv_rules, adv_json);
        if (bench_cmd->parsed()) {
            if (!bench_config_path.empty()) {
                BenchConfig from_file;
                from_file.apply_json(read_json_file(bench_config_path));
                // Explicit flags win over the config file.
                if (opt_in->count() == 0) bench.dataset = from_file.dataset;
                if (opt_wl->count() == 0) bench.workload_file = from_file.workload_file;
                if (opt_out->count() == 0) bench.out_dir = from_file.out_dir;
                if (opt_scales->count() == 0) bench.scales = from_file.scales;
                if (opt_backends->count() == 0) bench.backends = from_file.backends;
                if (opt_runs->count() == 0) bench.runs = from_file.runs;
                if (opt_seed->count() == 0) bench.seed = from_file.seed;
                if (opt_verify->count() == 0) bench.verify = from_file.verify;
                if (opt_shuffle->count() == 0) bench.shuffle = from_file.shuffle;
                if (opt_ts->count() == 0) bench.timestamp = from_file.timestamp;
                if (opt_budget->count() == 0) bench.max_elements = from_file.max_elements;
            }
            if (bench.dataset.empty()) throw DataError("bench needs --in (or a config file)");
            if (bench.workload_file.empty())
                throw DataError("bench needs --workload (or a config file)");
            return cmd_bench(bench);
        }
    } catch (const ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
