#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kgbench/engines.hpp"
#include "kgbench/errors.hpp"

namespace kgbench {

inline constexpr int kDefaultRuns = 31;

// One timed execution inside one measurement cell.
struct RunRecord {
    std::string backend;
    std::string query_id;
    std::uint64_t scale = 1;
    std::string mode;  // "cold" | "hot"
    int run_index = 0;
    double elapsed_ms = 0.0;  // monotonic clock, microsecond resolution
    std::uint64_t result_count = 0;
    std::uint64_t start_ns = 0;  // monotonic timestamps, not serialized
    std::uint64_t end_ns = 0;
};

// Mean and 95% confidence interval of one (backend, query, scale, mode) cell.
struct AggregateRow {
    std::string backend;
    std::string query_id;
    std::uint64_t scale = 1;
    std::string mode;
    std::uint64_t n = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double ci_low_ms = 0.0;
    double ci_high_ms = 0.0;
};

// Runs one measurement cell. Cold mode clears caches before every one of the
// timed executions; hot mode runs one untimed warm-up, then keeps caches
// across all timed executions. Only execute() sits inside the timed window.
// Result counts must agree across runs (ProtocolError otherwise).
std::vector<RunRecord> run_cell(Backend& backend, const ExecutablePlan& plan,
                                const std::string& mode, int runs = kDefaultRuns,
                                std::uint64_t scale = 1);

// Groups records by cell, sorted by cell key. Each cell needs n >= 2.
// CI per Student-t with n-1 degrees of freedom.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

// Captured once per harness invocation and embedded in reports, so re-running
// emission over the same rows reproduces files byte for byte.
struct EnvSnapshot {
    std::string host;
    std::string version;
    std::string timestamp;

    PropertyValue to_json() const;
    static EnvSnapshot capture(const std::string& timestamp_override = "");
};

// Writes runs.csv, aggregate.csv and one chart JSON per query (series per
// backend and mode, points over scale). Returns the file names written.
std::vector<std::string> emit_report(const std::vector<AggregateRow>& rows,
                                     const std::vector<RunRecord>& records,
                                     const std::filesystem::path& out_dir,
                                     const EnvSnapshot& snapshot);

// Per-run CSV round trip, used by the standalone report command.
void write_runs_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path);

}  // namespace kgbench
