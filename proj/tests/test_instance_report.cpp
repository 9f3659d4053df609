#include <doctest.h>

#include <cmath>
#include <string>

#include "qpr/instance.hpp"
#include "qpr/report_json.hpp"
#include "qpr/sweep.hpp"
#include "test_helpers.hpp"

using namespace qpr;

TEST_CASE("parse_instance accepts the worked example") {
    const Instance inst = qpr_test::worked_instance();
    CHECK(inst.database.size() == 8);
    CHECK(inst.database.target_count == 3);
    CHECK(inst.database.spurious_count == 3);
    CHECK(inst.database.virtual_count == 2);
    CHECK(inst.alpha == 0);
    CHECK(inst.mode == FeatureMode::Idealized);
    REQUIRE(inst.codebook.entries.size() == 2);
    CHECK(inst.codebook.entries[0].feature == 5);
    CHECK(inst.codebook.entries[1].feature == 12);
}

TEST_CASE("parse_instance rejects constraint violations by name") {
    const std::string base = R"({"payload_bits":4,"feature_bits":4,"distance_bits":4,
        "alpha":ALPHA,"mode":"idealized",
        "patterns":[{"payload":PAYLOAD,"class":"target"}],
        "codebook":[{"feature":FEATURE}]})";
    const auto with = [&](const std::string& alpha, const std::string& payload,
                          const std::string& feature) {
        std::string text = base;
        text.replace(text.find("ALPHA"), 5, alpha);
        text.replace(text.find("PAYLOAD"), 7, payload);
        text.replace(text.find("FEATURE"), 7, feature);
        return text;
    };
    CHECK_THROWS_WITH_AS(parse_instance(with("15", "5", "5")),
                         doctest::Contains("alpha < d_max"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_instance(with("0", "99", "5")),
                         doctest::Contains("exceeds payload_bits"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_instance(with("0", "5", "15")),
                         doctest::Contains("no sentinel in codebook"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_instance(with("0", "5", "21")),
                         doctest::Contains("exceeds feature_bits"), std::runtime_error);
}

TEST_CASE("parse_instance reports malformed documents") {
    CHECK_THROWS_AS(parse_instance("{not json", "broken.json"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_instance(R"({"payload_bits":4})"),
                         doctest::Contains("missing field"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_instance(
            R"({"payload_bits":4,"feature_bits":4,"distance_bits":4,"alpha":0,
                "mode":"idealized","patterns":[{"payload":1,"class":"virtual"}],"codebook":[]})"),
        doctest::Contains("derived padding"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_instance(
            R"({"payload_bits":4,"feature_bits":4,"distance_bits":4,"alpha":0,
                "mode":"other","patterns":[{"payload":1,"class":"target"}],"codebook":[]})"),
        doctest::Contains("idealized"), std::runtime_error);
}

TEST_CASE("the instance digest tracks content, not formatting") {
    const Instance a = qpr_test::worked_instance();
    const Instance b = parse_instance(instance_to_json(a).dump(2));
    CHECK(instance_digest(a) == instance_digest(b));
    CHECK(instance_digest(a).size() == 16);

    Instance c = a;
    c.alpha = 1;
    CHECK(instance_digest(c) != instance_digest(a));
}

TEST_CASE("synthesize_sweep_instance pins the marked count exactly") {
    for (std::uint64_t n : {2ull, 8ull, 64ull}) {
        for (std::uint64_t m : {0ull, 1ull, 2ull}) {
            if (m > n) continue;
            const Instance inst = synthesize_sweep_instance(n, m);
            CHECK(inst.database.size() == n);
            CHECK(marked_set(inst.database, 0, 0, FeatureMode::Idealized).size() == m);
        }
    }
    CHECK_THROWS_AS(synthesize_sweep_instance(12, 1), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_sweep_instance(8, 9), std::invalid_argument);
}

TEST_CASE("a sweep row with no matches spends the cap on every trial") {
    SearchConfig cfg;
    cfg.seed = 31;
    const SweepRow row = run_sweep_row(16, 0, 20, cfg);
    CHECK(row.found_rate == 0.0);
    CHECK(row.mean_gpr == 32.0);  // ceil(8 * sqrt(16))
    CHECK(row.ratio == 0.0);
}

TEST_CASE("sweep rows are deterministic and job-count independent") {
    SearchConfig cfg;
    cfg.seed = 17;
    const SweepRow serial = run_sweep_row(64, 1, 50, cfg, 1);
    const SweepRow parallel = run_sweep_row(64, 1, 50, cfg, 4);
    CHECK(serial.mean_gpr == parallel.mean_gpr);
    CHECK(serial.found_rate == parallel.found_rate);
    CHECK(serial.ratio == parallel.ratio);
    CHECK(run_sweep_row(64, 1, 50, cfg, 1).mean_gpr == serial.mean_gpr);
}

TEST_CASE("sweep rejects the full engine") {
    SearchConfig cfg;
    cfg.engine = EngineKind::Full;
    CHECK_THROWS_AS(run_sweep_row(8, 1, 5, cfg), std::invalid_argument);
}

TEST_CASE("report records are byte-identical for identical inputs") {
    const Instance inst = qpr_test::worked_instance();
    const QueryContext ctx = make_query_context(inst.database, 5, 0, inst.mode);
    SearchConfig cfg;
    cfg.seed = 42;
    const SearchReport a = run_search(inst.database, ctx, cfg);
    const SearchReport b = run_search(inst.database, ctx, cfg);
    const ReportStamp stamp = make_stamp(instance_digest(inst), cfg, a.query_cap);
    CHECK(search_record(a, stamp, 5, 0).dump() == search_record(b, stamp, 5, 0).dump());
}

TEST_CASE("every report record carries the rerun fields") {
    const Instance inst = qpr_test::worked_instance();
    SearchConfig cfg;
    cfg.seed = 42;
    const QueryContext ctx = make_query_context(inst.database, 5, 0, inst.mode);
    const SearchReport search = run_search(inst.database, ctx, cfg);
    const ReportStamp stamp = make_stamp(instance_digest(inst), cfg, search.query_cap);

    const RecognitionReport rec =
        recognize_all(inst.database, inst.codebook, inst.alpha, inst.mode, cfg);
    const std::vector<BruteForceEntry> classical =
        brute_force_recognize(inst.database, inst.codebook, inst.alpha, inst.mode);

    SearchConfig sweep_cfg;
    const SweepRow row = run_sweep_row(8, 1, 5, sweep_cfg);

    const nlohmann::json records[] = {
        search_record(search, stamp, 5, 0),
        recognition_record(rec.entries[0], stamp, inst.alpha),
        diff_record(diff_reports(rec, classical), stamp),
        sweep_record(row, stamp),
        selftest_record(CheckResult{"unitarity", true, "ok"}, stamp),
    };
    for (const nlohmann::json& r : records) {
        CHECK(r.contains("type"));
        CHECK(r.contains("seed"));
        CHECK(r.contains("engine"));
        CHECK(r.contains("cap"));
        CHECK(r.contains("lambda"));
        CHECK(r.contains("cap_factor"));
        CHECK(r.contains("instance_digest"));
    }
    CHECK(records[0]["result"] == "found");
    CHECK(records[0]["index"] == 0);
    CHECK(records[2]["match"] == true);
}

TEST_CASE("simulate twice with one seed produces identical reports end to end") {
    const Instance inst = qpr_test::worked_instance();
    const auto render = [&](std::uint64_t seed) {
        SearchConfig cfg;
        cfg.seed = seed;
        const QueryContext ctx = make_query_context(inst.database, 5, 0, inst.mode);
        const SearchReport r = run_search(inst.database, ctx, cfg);
        return search_record(r, make_stamp(instance_digest(inst), cfg, r.query_cap), 5, 0).dump();
    };
    CHECK(render(42) == render(42));
    CHECK(render(42) != render(43));
}
