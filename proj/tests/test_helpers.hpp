#pragma once

// Fixtures shared by the unit and acceptance suites.

#include <cstdint>
#include <string>
#include <vector>

#include "qpr/instance.hpp"
#include "qpr/pattern_model.hpp"
#include "qpr/recognizer.hpp"
#include "qpr/selftest.hpp"

namespace qpr_test {

inline const char* kWorkedInstanceJson = R"json({
  "payload_bits": 4, "feature_bits": 4, "distance_bits": 4,
  "alpha": 0, "mode": "idealized",
  "patterns": [
    {"payload": 5, "class": "target"},
    {"payload": 9, "class": "target"},
    {"payload": 12, "class": "target"},
    {"payload": 3, "class": "spurious"},
    {"payload": 6, "class": "spurious"},
    {"payload": 14, "class": "spurious"}
  ],
  "codebook": [{"feature": 5}, {"feature": 12}]
})json";

// Three targets, three spurious, two virtual padding records; N = 8.
inline qpr::PatternDatabase worked_database() {
    return qpr::build_database({5, 9, 12}, {3, 6, 14}, 4, 4, 4);
}

inline qpr::Instance worked_instance() {
    return qpr::parse_instance(kWorkedInstanceJson, "worked");
}

struct RecognizerCase {
    qpr::PatternDatabase db;
    qpr::Codebook codebook;
    std::uint64_t alpha = 0;
    qpr::FeatureMode mode = qpr::FeatureMode::Idealized;
};

// Random instance up to N = 256 whose codebook mixes present, duplicated and
// absent features, so marked sets of size 0, 1 and >1 all occur.
inline RecognizerCase random_recognizer_case(qpr::Rng& rng) {
    RecognizerCase c;
    c.db = qpr::random_database(rng, 8, 8, 8, 8);
    c.mode = qpr::uniform_below(rng, 2) == 0 ? qpr::FeatureMode::Idealized
                                             : qpr::FeatureMode::Extractor;
    c.alpha = qpr::uniform_below(rng, 2) == 0 ? 0 : 1 + qpr::uniform_below(rng, 4);
    const std::uint64_t entries = 1 + qpr::uniform_below(rng, 5);
    for (std::uint64_t k = 0; k < entries; ++k) {
        qpr::CodebookEntry entry;
        if (qpr::uniform_below(rng, 5) < 3 && c.db.target_count > 0) {
            const std::uint64_t i = qpr::uniform_below(rng, c.db.target_count);
            entry.feature = qpr::feature_of(c.db, i, c.mode);
            entry.exemplar_payload = c.db.records[i].payload;
        } else {
            entry.feature = qpr::uniform_below(rng, qpr::sentinel_virtual(c.db.feature_bits));
        }
        c.codebook.entries.push_back(entry);
    }
    return c;
}

struct RecognizerCampaign {
    bool all_equal = true;
    std::string first_failure;
    int empty_entries = 0;  // entries whose brute-force marked set is empty
    int multi_entries = 0;  // entries with more than one match
    bool false_positive = false;
};

// Runs quantum-vs-classical recognition over `cases` random instances and
// audits every recognized index against the classical predicate.
inline RecognizerCampaign run_recognizer_campaign(std::uint64_t seed, int cases,
                                                  double cap_factor = 8.0) {
    RecognizerCampaign out;
    qpr::Rng rng = qpr::make_rng(seed, 0x4004);
    for (int t = 0; t < cases; ++t) {
        const RecognizerCase c = random_recognizer_case(rng);
        qpr::SearchConfig cfg;
        cfg.seed = qpr::derive_seed(seed, static_cast<std::uint64_t>(t));
        cfg.cap_factor = cap_factor;
        cfg.engine = qpr::EngineKind::Reduced;
        const qpr::RecognitionReport quantum =
            qpr::recognize_all(c.db, c.codebook, c.alpha, c.mode, cfg);
        const std::vector<qpr::BruteForceEntry> classical =
            qpr::brute_force_recognize(c.db, c.codebook, c.alpha, c.mode);
        for (const qpr::BruteForceEntry& e : classical) {
            if (e.indices.empty()) ++out.empty_entries;
            if (e.indices.size() > 1) ++out.multi_entries;
        }
        for (const qpr::FeatureRecognition& e : quantum.entries) {
            for (std::uint64_t i : e.indices) {
                const std::uint64_t f = qpr::feature_of(c.db, i, c.mode);
                if (qpr::distance(f, e.feature, c.db.feature_bits, c.db.distance_bits) > c.alpha)
                    out.false_positive = true;
            }
        }
        const std::vector<qpr::Discrepancy> diffs = qpr::diff_reports(quantum, classical);
        if (!diffs.empty() && out.all_equal) {
            out.all_equal = false;
            out.first_failure = "case " + std::to_string(t) + ": feature " +
                                std::to_string(diffs.front().feature) + " " +
                                qpr::to_string(diffs.front().kind) + " index " +
                                std::to_string(diffs.front().index);
        }
    }
    return out;
}

}  // namespace qpr_test
