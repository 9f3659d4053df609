#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "qpr/bbht_search.hpp"
#include "qpr/recognizer.hpp"
#include "qpr/selftest.hpp"
#include "qpr/sweep.hpp"

namespace qpr {

/// Fields carried by every report line so any row can be re-run on its own.
struct ReportStamp {
    std::string instance_digest;
    EngineKind engine = EngineKind::Reduced;
    double lambda = 1.2;
    double cap_factor = 8.0;
    double cap = 0.0;  // resolved query cap; non-finite emits null
    std::uint64_t seed = 0;
};

inline ReportStamp make_stamp(const std::string& digest, const SearchConfig& cfg, double cap) {
    return {digest, cfg.engine, cfg.lambda, cfg.cap_factor, cap, cfg.seed};
}

inline void stamp_record(nlohmann::json& j, const ReportStamp& s) {
    j["seed"] = s.seed;
    j["engine"] = to_string(s.engine);
    j["lambda"] = s.lambda;
    j["cap_factor"] = s.cap_factor;
    if (std::isfinite(s.cap))
        j["cap"] = static_cast<std::uint64_t>(s.cap);
    else
        j["cap"] = nullptr;
    j["instance_digest"] = s.instance_digest;
}

inline nlohmann::json search_record(const SearchReport& r, const ReportStamp& stamp,
                                    std::uint64_t feature, std::uint64_t alpha) {
    nlohmann::json j;
    j["type"] = "search";
    stamp_record(j, stamp);
    j["feature"] = feature;
    j["alpha"] = alpha;
    j["result"] = r.found_index ? "found" : "not_found";
    if (r.found_index) j["index"] = *r.found_index;
    j["total_gpr"] = r.total_gpr;
    nlohmann::json rounds = nlohmann::json::array();
    for (const SearchRound& rd : r.rounds)
        rounds.push_back(nlohmann::json{{"m", rd.m},
                                        {"j", rd.iterations},
                                        {"outcome", rd.outcome_index},
                                        {"verified", rd.verified}});
    j["rounds"] = rounds;
    return j;
}

inline nlohmann::json recognition_record(const FeatureRecognition& e, const ReportStamp& stamp,
                                         std::uint64_t alpha) {
    nlohmann::json j;
    j["type"] = "recognition";
    stamp_record(j, stamp);
    j["feature"] = e.feature;
    j["alpha"] = alpha;
    j["indices"] = e.indices;
    std::uint64_t gpr = 0;
    nlohmann::json searches = nlohmann::json::array();
    for (const SearchReport& s : e.searches) {
        gpr += s.total_gpr;
        nlohmann::json rec{{"result", s.found_index ? "found" : "not_found"},
                           {"total_gpr", s.total_gpr},
                           {"rounds", s.rounds.size()}};
        if (s.found_index) rec["index"] = *s.found_index;
        searches.push_back(rec);
    }
    j["searches"] = searches;
    j["total_gpr"] = gpr;
    return j;
}

inline nlohmann::json diff_record(const std::vector<Discrepancy>& diffs,
                                  const ReportStamp& stamp) {
    nlohmann::json j;
    j["type"] = "diff";
    stamp_record(j, stamp);
    j["match"] = diffs.empty();
    nlohmann::json list = nlohmann::json::array();
    for (const Discrepancy& d : diffs)
        list.push_back(nlohmann::json{
            {"feature", d.feature}, {"kind", to_string(d.kind)}, {"index", d.index}});
    j["discrepancies"] = list;
    return j;
}

inline nlohmann::json sweep_record(const SweepRow& row, const ReportStamp& stamp) {
    nlohmann::json j;
    j["type"] = "sweep_row";
    stamp_record(j, stamp);
    j["n"] = row.pattern_count;
    j["m"] = row.marked_count;
    j["trials"] = row.trials;
    j["mean_gpr"] = row.mean_gpr;
    j["found_rate"] = row.found_rate;
    j["ratio"] = row.ratio;
    return j;
}

inline nlohmann::json selftest_record(const CheckResult& c, const ReportStamp& stamp) {
    nlohmann::json j;
    j["type"] = "selftest";
    stamp_record(j, stamp);
    j["suite"] = c.name;
    j["passed"] = c.passed;
    j["detail"] = c.detail;
    return j;
}

}  // namespace qpr
