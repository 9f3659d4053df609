#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "qpr/recognizer.hpp"
#include "test_helpers.hpp"

using namespace qpr;

namespace {

SearchConfig reduced_config(std::uint64_t seed) {
    SearchConfig cfg;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::uint64_t> sorted(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("recognize_feature finds every match in exhaustive mode") {
    const PatternDatabase db = qpr_test::worked_database();
    const FeatureRecognition r =
        recognize_feature(db, 5, 4, FeatureMode::Idealized, reduced_config(9), true);
    CHECK(sorted(r.indices) == std::vector<std::uint64_t>{0, 1});
    CHECK_FALSE(r.searches.back().found_index.has_value());  // terminating miss
}

TEST_CASE("recognize_feature with an absent feature reports one empty search") {
    const PatternDatabase db = qpr_test::worked_database();
    const FeatureRecognition r =
        recognize_feature(db, 2, 0, FeatureMode::Idealized, reduced_config(9), true);
    CHECK(r.indices.empty());
    CHECK(r.searches.size() == 1);
    CHECK_FALSE(r.searches.front().found_index.has_value());
}

TEST_CASE("recognize_feature non-exhaustive returns at most one index") {
    const PatternDatabase db = qpr_test::worked_database();
    const FeatureRecognition r =
        recognize_feature(db, 5, 0, FeatureMode::Idealized, reduced_config(9), false);
    CHECK(r.searches.size() == 1);
    CHECK(r.indices == std::vector<std::uint64_t>{0});
}

TEST_CASE("recognize_feature rejects sentinel queries") {
    const PatternDatabase db = qpr_test::worked_database();
    CHECK_THROWS_AS(recognize_feature(db, 15, 0, FeatureMode::Idealized, reduced_config(0), true),
                    std::invalid_argument);
}

TEST_CASE("recognize_all covers the codebook in order") {
    const Instance inst = qpr_test::worked_instance();
    const RecognitionReport report =
        recognize_all(inst.database, inst.codebook, inst.alpha, inst.mode, reduced_config(4));
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].feature == 5);
    CHECK(report.entries[0].indices == std::vector<std::uint64_t>{0});
    CHECK(report.entries[1].feature == 12);
    CHECK(report.entries[1].indices == std::vector<std::uint64_t>{2});
    std::uint64_t gpr = 0;
    for (const FeatureRecognition& e : report.entries)
        for (const SearchReport& s : e.searches) gpr += s.total_gpr;
    CHECK(report.total_gpr == gpr);
}

TEST_CASE("recognize_all with an empty codebook does no work") {
    const PatternDatabase db = qpr_test::worked_database();
    const RecognitionReport report =
        recognize_all(db, Codebook{}, 0, FeatureMode::Idealized, reduced_config(4));
    CHECK(report.entries.empty());
    CHECK(report.total_gpr == 0);
}

TEST_CASE("recognize_all is independent of the job count") {
    const Instance inst = qpr_test::worked_instance();
    const RecognitionReport serial =
        recognize_all(inst.database, inst.codebook, 4, inst.mode, reduced_config(4), 1);
    const RecognitionReport parallel =
        recognize_all(inst.database, inst.codebook, 4, inst.mode, reduced_config(4), 4);
    REQUIRE(serial.entries.size() == parallel.entries.size());
    CHECK(serial.total_gpr == parallel.total_gpr);
    for (std::size_t k = 0; k < serial.entries.size(); ++k)
        CHECK(serial.entries[k].indices == parallel.entries[k].indices);
}

TEST_CASE("brute_force_recognize scans every entry") {
    const Instance inst = qpr_test::worked_instance();
    const std::vector<BruteForceEntry> r =
        brute_force_recognize(inst.database, inst.codebook, 0, inst.mode);
    REQUIRE(r.size() == 2);
    CHECK(r[0].indices == std::vector<std::uint64_t>{0});
    CHECK(r[1].indices == std::vector<std::uint64_t>{2});

    Codebook wide;
    wide.entries.push_back({5, std::nullopt});
    const std::vector<BruteForceEntry> near =
        brute_force_recognize(inst.database, wide, 14, inst.mode);
    CHECK(near[0].indices == std::vector<std::uint64_t>{0, 1, 2});  // all targets within 14

    CHECK(brute_force_recognize(inst.database, Codebook{}, 0, inst.mode).empty());
}

TEST_CASE("diff_reports flags missing and extra indices") {
    RecognitionReport quantum;
    quantum.entries.push_back({5, {0}, {}});
    std::vector<BruteForceEntry> classical{{5, {0}}};
    CHECK(diff_reports(quantum, classical).empty());

    classical[0].indices = {0, 1};
    const std::vector<Discrepancy> missing = diff_reports(quantum, classical);
    REQUIRE(missing.size() == 1);
    CHECK(missing[0].feature == 5);
    CHECK(missing[0].kind == DiffKind::Missing);
    CHECK(missing[0].index == 1);

    quantum.entries[0].indices = {0, 1, 2};
    const std::vector<Discrepancy> extra = diff_reports(quantum, classical);
    REQUIRE(extra.size() == 1);
    CHECK(extra[0].kind == DiffKind::Extra);
    CHECK(extra[0].index == 2);

    quantum.entries[0].feature = 7;
    CHECK_THROWS_AS(diff_reports(quantum, classical), std::invalid_argument);
}

TEST_CASE("exclusion shrinks the marked set by one per hit") {
    const PatternDatabase db = build_database({5, 5, 5, 5}, {1, 2, 3}, 4, 4, 4);
    const FeatureRecognition r =
        recognize_feature(db, 5, 0, FeatureMode::Idealized, reduced_config(6), true);
    CHECK(sorted(r.indices) == std::vector<std::uint64_t>{0, 1, 2, 3});
    std::set<std::uint64_t> excluded;
    for (std::size_t k = 0; k < r.searches.size(); ++k) {
        ReducedState st = build_reduced(
            db, make_query_context(db, 5, 0, FeatureMode::Idealized), excluded);
        CHECK(st.marked.size() == 4 - k);
        if (r.searches[k].found_index) excluded.insert(*r.searches[k].found_index);
    }
}

TEST_CASE("random instances agree with the brute-force oracle") {
    const qpr_test::RecognizerCampaign campaign = qpr_test::run_recognizer_campaign(2024, 40);
    CHECK(campaign.all_equal);
    if (!campaign.all_equal) MESSAGE(campaign.first_failure);
    CHECK_FALSE(campaign.false_positive);
    CHECK(campaign.empty_entries > 0);
    CHECK(campaign.multi_entries > 0);
}
