#include "kgbench/harness.hpp"

#include <sys/utsname.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "kgbench/stats.hpp"
#include "kgbench/version.hpp"

namespace kgbench {
namespace {

std::uint64_t now_ns() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

// Shortest round-trip decimal representation, stable across re-emissions.
std::string num(double v) { return PropertyValue(v).dump(); }

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

}  // namespace

std::vector<RunRecord> run_cell(Backend& backend, const ExecutablePlan& plan,
                                const std::string& mode, int runs, std::uint64_t scale) {
    if (runs < 1) throw ProtocolError("run_cell needs runs >= 1");
    if (mode != "cold" && mode != "hot")
        throw ProtocolError("unknown mode \"" + mode + "\", expected cold or hot");

    std::vector<RunRecord> records;
    records.reserve(runs);
    std::uint64_t expected_count = 0;

    auto timed_run = [&](int run_index) {
        const std::uint64_t t0 = now_ns();
        const ResultSet result = backend.execute(plan);
        const std::uint64_t t1 = now_ns();
        const auto count = static_cast<std::uint64_t>(result.size());
        if (run_index > 1 && count != expected_count)
            throw ProtocolError("result count diverged across runs for query \"" + plan.spec.id +
                                "\" on backend " + backend.paradigm() + ": " +
                                std::to_string(expected_count) + " then " + std::to_string(count));
        expected_count = count;
        RunRecord rec;
        rec.backend = backend.paradigm();
        rec.query_id = plan.spec.id;
        rec.scale = scale;
        rec.mode = mode;
        rec.run_index = run_index;
        rec.elapsed_ms = static_cast<double>(t1 - t0) / 1e6;
        rec.result_count = count;
        rec.start_ns = t0;
        rec.end_ns = t1;
        records.push_back(std::move(rec));
    };

    if (mode == "cold") {
        for (int i = 1; i <= runs; ++i) {
            backend.clear_caches();
            timed_run(i);
        }
    } else {
        (void)backend.execute(plan);  // warm-up, untimed
        for (int i = 1; i <= runs; ++i) timed_run(i);
    }
    return records;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
    using CellKey = std::tuple<std::string, std::string, std::uint64_t, std::string>;
    std::map<CellKey, std::vector<double>> cells;
    for (const auto& r : records)
        cells[{r.backend, r.query_id, r.scale, r.mode}].push_back(r.elapsed_ms);

    std::vector<AggregateRow> rows;
    rows.reserve(cells.size());
    for (const auto& [key, samples] : cells) {
        if (samples.size() < 2)
            throw ProtocolError("cell " + std::get<0>(key) + "/" + std::get<1>(key) +
                                " has fewer than 2 runs, no confidence interval");
        AggregateRow row;
        std::tie(row.backend, row.query_id, row.scale, row.mode) = key;
        row.n = samples.size();
        row.mean_ms = mean(samples);
        row.stddev_ms = sample_stddev(samples);
        const double hw = ci_half_width(row.stddev_ms, samples.size());
        row.ci_low_ms = row.mean_ms - hw;
        row.ci_high_ms = row.mean_ms + hw;
        rows.push_back(std::move(row));
    }
    return rows;
}

PropertyValue EnvSnapshot::to_json() const {
    return PropertyValue{{"host", host}, {"version", version}, {"timestamp", timestamp}};
}

EnvSnapshot EnvSnapshot::capture(const std::string& timestamp_override) {
    EnvSnapshot snap;
    utsname uts{};
    if (uname(&uts) == 0)
        snap.host = std::string(uts.sysname) + " " + uts.release + " " + uts.machine;
    else
        snap.host = "unknown";
    snap.version = kVersion;
    if (!timestamp_override.empty()) {
        snap.timestamp = timestamp_override;
    } else {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        snap.timestamp = buf;
    }
    return snap;
}

void write_runs_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
    auto out = open_out(path);
    out << "backend,query_id,scale,mode,run_index,elapsed_ms,result_count\n";
    for (const auto& r : records)
        out << csv_escape(r.backend) << ',' << csv_escape(r.query_id) << ',' << r.scale << ','
            << r.mode << ',' << r.run_index << ',' << num(r.elapsed_ms) << ',' << r.result_count
            << '\n';
}

std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<RunRecord> records;
    std::string line;
    if (!std::getline(in, line) ||
        line != "backend,query_id,scale,mode,run_index,elapsed_ms,result_count")
        throw DataError(path.string() + ": unexpected per-run CSV header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 7 fields");
        RunRecord r;
        r.backend = fields[0];
        r.query_id = fields[1];
        r.scale = std::stoull(fields[2]);
        r.mode = fields[3];
        r.run_index = std::stoi(fields[4]);
        r.elapsed_ms = std::stod(fields[5]);
        r.result_count = std::stoull(fields[6]);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<std::string> emit_report(const std::vector<AggregateRow>& rows,
                                     const std::vector<RunRecord>& records,
                                     const std::filesystem::path& out_dir,
                                     const EnvSnapshot& snapshot) {
    if (rows.empty()) throw DataError("emit_report: no aggregate rows");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::string> files;

    if (!records.empty()) {
        write_runs_csv(out_dir / "runs.csv", records);
        files.push_back("runs.csv");
    }

    {
        auto out = open_out(out_dir / "aggregate.csv");
        out << "backend,query_id,scale,mode,n,mean_ms,stddev_ms,ci_low_ms,ci_high_ms\n";
        for (const auto& r : rows)
            out << csv_escape(r.backend) << ',' << csv_escape(r.query_id) << ',' << r.scale << ','
                << r.mode << ',' << r.n << ',' << num(r.mean_ms) << ',' << num(r.stddev_ms) << ','
                << num(r.ci_low_ms) << ',' << num(r.ci_high_ms) << '\n';
        files.push_back("aggregate.csv");
    }

    // Chart data, one file per query: series per (backend, mode), x = scale.
    std::map<std::string, std::map<std::pair<std::string, std::string>, std::vector<const AggregateRow*>>>
        charts;
    for (const auto& r : rows) charts[r.query_id][{r.backend, r.mode}].push_back(&r);

    for (const auto& [query, series_map] : charts) {
        PropertyValue chart;
        chart["query"] = query;
        chart["environment"] = snapshot.to_json();
        PropertyValue series = PropertyValue::array();
        for (const auto& [key, cell_rows] : series_map) {
            PropertyValue s;
            s["backend"] = key.first;
            s["mode"] = key.second;
            PropertyValue points = PropertyValue::array();
            auto sorted = cell_rows;
            std::sort(sorted.begin(), sorted.end(),
                      [](const AggregateRow* a, const AggregateRow* b) { return a->scale < b->scale; });
            for (const AggregateRow* r : sorted)
                points.push_back({{"scale", r->scale},
                                  {"n", r->n},
                                  {"mean_ms", r->mean_ms},
                                  {"ci_low_ms", r->ci_low_ms},
                                  {"ci_high_ms", r->ci_high_ms}});
            s["points"] = points;
            series.push_back(s);
        }
        chart["series"] = series;
        const std::string name = "chart_" + sanitize(query) + ".json";
        auto out = open_out(out_dir / name);
        out << chart.dump(2) << '\n';
        files.push_back(name);
    }
    return files;
}

}  // namespace kgbench
