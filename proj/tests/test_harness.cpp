#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "kgbench/harness.hpp"
#include "kgbench/scale.hpp"
#include "kgbench/stats.hpp"
#include "test_support.hpp"

using namespace kgbench;
using namespace kgbench::test;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct Rig {
    std::shared_ptr<const KnowledgeGraph> kg;
    std::unique_ptr<Backend> engine;
    ExecutablePlan plan;

    explicit Rig(const char* paradigm, std::uint64_t nodes = 300) {
        kg = std::make_shared<const KnowledgeGraph>(
            generate_synthetic(small_faers_spec(nodes, 0.8, 17)));
        engine = ingest(paradigm, kg);
        plan = compile(tier1_template(SchemaBinding{}), paradigm);
    }
};

}  // namespace

TEST_CASE("t quantile fixtures") {
    CHECK(t_quantile(0.975, 30) == doctest::Approx(2.0422724563012373).epsilon(1e-9));
    CHECK(std::round(t_quantile(0.975, 30) * 1000) / 1000 == doctest::Approx(2.042));
    CHECK(t_quantile(0.975, 2) == doctest::Approx(4.302652729696142).epsilon(1e-9));
    CHECK(t_quantile(0.975, 1) == doctest::Approx(12.706204736432095).epsilon(1e-9));
    CHECK(t_quantile(0.975, 100) == doctest::Approx(1.9839715184496334).epsilon(1e-9));
    CHECK(t_quantile(0.5, 7) == 0.0);
    CHECK(t_quantile(0.025, 30) == doctest::Approx(-2.0422724563012373).epsilon(1e-9));
}

TEST_CASE("t quantile agrees with quadrature-based reference across df") {
    for (double df : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 60.0, 200.0}) {
        const double expected = ref_t_quantile(0.975, df);
        CHECK(t_quantile(0.975, df) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("the {10, 12, 14} sample reproduces the reference half width") {
    const std::vector<double> sample{10.0, 12.0, 14.0};
    CHECK(mean(sample) == doctest::Approx(12.0));
    CHECK(sample_stddev(sample) == doctest::Approx(2.0));
    const double hw = ci_half_width(sample_stddev(sample), sample.size());
    CHECK(hw == doctest::Approx(4.968275423439091).epsilon(1e-9));
    CHECK(std::fabs(hw - 4.969) < 2e-3);
}

TEST_CASE("identical samples aggregate to a zero-width interval") {
    std::vector<RunRecord> records;
    for (int i = 1; i <= 31; ++i) {
        RunRecord r;
        r.backend = "graph";
        r.query_id = "q";
        r.mode = "hot";
        r.run_index = i;
        r.elapsed_ms = 7.5;
        records.push_back(r);
    }
    const auto rows = aggregate(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == 31);
    CHECK(rows[0].mean_ms == doctest::Approx(7.5));
    CHECK(rows[0].stddev_ms == doctest::Approx(0.0));
    CHECK(rows[0].ci_low_ms == doctest::Approx(7.5));
    CHECK(rows[0].ci_high_ms == doctest::Approx(7.5));
}

TEST_CASE("aggregation matches an independent recomputation to 1e-9 relative") {
    std::mt19937_64 rng(5);
    std::vector<RunRecord> records;
    for (int i = 1; i <= 31; ++i) {
        RunRecord r;
        r.backend = "document";
        r.query_id = "q1";
        r.scale = 8;
        r.mode = "cold";
        r.run_index = i;
        r.elapsed_ms = 5.0 + static_cast<double>(rng() % 10000) / 997.0;
        records.push_back(r);
    }
    const auto rows = aggregate(records);
    REQUIRE(rows.size() == 1);

    long double sum = 0.0L;
    for (const auto& r : records) sum += r.elapsed_ms;
    const double ref_mean = static_cast<double>(sum / records.size());
    long double sq = 0.0L;
    for (const auto& r : records) sq += (r.elapsed_ms - ref_mean) * (r.elapsed_ms - ref_mean);
    const double ref_sd = std::sqrt(static_cast<double>(sq / (records.size() - 1)));
    const double ref_hw = ref_t_quantile(0.975, 30.0) * ref_sd / std::sqrt(31.0);

    CHECK(rows[0].mean_ms == doctest::Approx(ref_mean).epsilon(1e-12));
    CHECK(rows[0].stddev_ms == doctest::Approx(ref_sd).epsilon(1e-10));
    CHECK(rows[0].ci_low_ms == doctest::Approx(ref_mean - ref_hw).epsilon(1e-9));
    CHECK(rows[0].ci_high_ms == doctest::Approx(ref_mean + ref_hw).epsilon(1e-9));
    CHECK(rows[0].ci_low_ms <= rows[0].mean_ms);
    CHECK(rows[0].mean_ms <= rows[0].ci_high_ms);
}

TEST_CASE("aggregate refuses single-run cells") {
    RunRecord r;
    r.backend = "graph";
    r.query_id = "q";
    r.mode = "hot";
    r.run_index = 1;
    r.elapsed_ms = 1.0;
    CHECK_THROWS_AS(aggregate({r}), ProtocolError);
}

TEST_CASE("cold mode clears before every timed run") {
    Rig rig("document");
    rig.engine->reset_stats();
    const auto records = run_cell(*rig.engine, rig.plan, "cold", 31, 1);
    CHECK(records.size() == 31);
    CHECK(rig.engine->stats().clear_count == 31);
    CHECK(rig.engine->stats().execute_count == 31);
    for (int i = 0; i < 31; ++i) {
        CHECK(records[i].run_index == i + 1);
        CHECK(records[i].elapsed_ms > 0.0);
        CHECK(records[i].mode == "cold");
    }
}

TEST_CASE("hot mode warms up once and never clears") {
    Rig rig("document");
    rig.engine->reset_stats();
    const auto records = run_cell(*rig.engine, rig.plan, "hot", 31, 1);
    CHECK(records.size() == 31);
    CHECK(rig.engine->stats().clear_count == 0);
    CHECK(rig.engine->stats().execute_count == 32);  // 1 warm-up + 31 timed
    CHECK(!rig.engine->materialized_caches().empty());
}

TEST_CASE("single-run cell produces one positive record") {
    Rig rig("oracle", 120);
    const auto records = run_cell(*rig.engine, rig.plan, "hot", 1, 1);
    REQUIRE(records.size() == 1);
    CHECK(records[0].elapsed_ms > 0.0);
    CHECK(records[0].result_count == records[0].result_count);
}

TEST_CASE("result counts agree across runs within a cell") {
    Rig rig("graph");
    const auto cold = run_cell(*rig.engine, rig.plan, "cold", 5, 1);
    const auto hot = run_cell(*rig.engine, rig.plan, "hot", 5, 1);
    for (const auto& r : cold) CHECK(r.result_count == cold[0].result_count);
    CHECK(hot[0].result_count == cold[0].result_count);
}

TEST_CASE("timed executions never overlap") {
    Rig rig("multimodel");
    std::vector<RunRecord> all = run_cell(*rig.engine, rig.plan, "cold", 7, 1);
    const auto hot = run_cell(*rig.engine, rig.plan, "hot", 7, 1);
    all.insert(all.end(), hot.begin(), hot.end());
    for (std::size_t i = 1; i < all.size(); ++i) {
        CHECK(all[i - 1].end_ns <= all[i].start_ns);
        CHECK(all[i].start_ns < all[i].end_ns);
    }
}

TEST_CASE("unknown modes and zero runs are protocol errors") {
    Rig rig("graph", 120);
    CHECK_THROWS_AS(run_cell(*rig.engine, rig.plan, "warm", 3, 1), ProtocolError);
    CHECK_THROWS_AS(run_cell(*rig.engine, rig.plan, "cold", 0, 1), ProtocolError);
}

TEST_CASE("hot runs do not exceed cold runs on a lazily indexed engine") {
    Rig rig("document", 3000);
    const auto cold = run_cell(*rig.engine, rig.plan, "cold", 9, 1);
    const auto hot = run_cell(*rig.engine, rig.plan, "hot", 9, 1);
    std::vector<double> cold_ms, hot_ms;
    for (const auto& r : cold) cold_ms.push_back(r.elapsed_ms);
    for (const auto& r : hot) hot_ms.push_back(r.elapsed_ms);
    CHECK(mean(hot_ms) <= mean(cold_ms));
}

TEST_CASE("report files are deterministic and carry the pinned headers") {
    std::vector<RunRecord> records;
    std::mt19937_64 rng(11);
    for (const std::string backend : {"document", "graph"})
        for (const std::uint64_t scale : {1, 8})
            for (const std::string mode : {"cold", "hot"})
                for (int i = 1; i <= 3; ++i) {
                    RunRecord r;
                    r.backend = backend;
                    r.query_id = "tier1-attribute-filter";
                    r.scale = scale;
                    r.mode = mode;
                    r.run_index = i;
                    r.elapsed_ms = 1.0 + static_cast<double>(rng() % 1000) / 64.0;
                    r.result_count = 42;
                    records.push_back(r);
                }
    const auto rows = aggregate(records);
    CHECK(rows.size() == 8);

    const EnvSnapshot snap{"testhost", "0.0", "2026-01-01T00:00:00Z"};
    TempDir a("report-a"), b("report-b");
    const auto files_a = emit_report(rows, records, a.path, snap);
    const auto files_b = emit_report(rows, records, b.path, snap);
    CHECK(files_a == files_b);
    for (const auto& f : files_a) CHECK(slurp(a.path / f) == slurp(b.path / f));

    const std::string runs_csv = slurp(a.path / "runs.csv");
    CHECK(runs_csv.rfind("backend,query_id,scale,mode,run_index,elapsed_ms,result_count\n", 0) ==
          0);
    const std::string agg_csv = slurp(a.path / "aggregate.csv");
    CHECK(agg_csv.rfind("backend,query_id,scale,mode,n,mean_ms,stddev_ms,ci_low_ms,ci_high_ms\n",
                        0) == 0);
    // row count = header + one line per cell
    CHECK(std::count(agg_csv.begin(), agg_csv.end(), '\n') == 1 + 8);

    const std::string chart = slurp(a.path / "chart_tier1_attribute_filter.json");
    const PropertyValue j = PropertyValue::parse(chart);
    CHECK(j["query"] == "tier1-attribute-filter");
    CHECK(j["environment"]["host"] == "testhost");
    CHECK(j["series"].size() == 4);  // 2 backends x 2 modes
    for (const auto& series : j["series"]) CHECK(series["points"].size() == 2);
}

TEST_CASE("per-run csv round-trips") {
    Rig rig("graph", 150);
    const auto records = run_cell(*rig.engine, rig.plan, "cold", 3, 2);
    TempDir dir("runcsv");
    write_runs_csv(dir.path / "runs.csv", records);
    const auto back = read_runs_csv(dir.path / "runs.csv");
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].backend == records[i].backend);
        CHECK(back[i].query_id == records[i].query_id);
        CHECK(back[i].scale == records[i].scale);
        CHECK(back[i].mode == records[i].mode);
        CHECK(back[i].run_index == records[i].run_index);
        CHECK(back[i].elapsed_ms == records[i].elapsed_ms);
        CHECK(back[i].result_count == records[i].result_count);
    }
}
