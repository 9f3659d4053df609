#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "qpr/bbht_search.hpp"
#include "qpr/parallel.hpp"

namespace qpr {

struct FeatureRecognition {
    std::uint64_t feature = 0;
    std::vector<std::uint64_t> indices;  // discovery order, no duplicates
    std::vector<SearchReport> searches;
};

struct RecognitionReport {
    std::vector<FeatureRecognition> entries;
    std::uint64_t total_gpr = 0;
};

enum class DiffKind { Missing, Extra };

inline const char* to_string(DiffKind k) { return k == DiffKind::Missing ? "missing" : "extra"; }

struct Discrepancy {
    std::uint64_t feature = 0;
    DiffKind kind = DiffKind::Missing;
    std::uint64_t index = 0;
};

/// Recognition for one codebook feature. Non-exhaustive: a single search,
/// zero or one index. Exhaustive: repeat the search, excluding each verified
/// hit, until a search comes up empty; every matching pattern is then found
/// (up to search timeouts, which the brute-force diff would expose).
inline FeatureRecognition recognize_feature(const PatternDatabase& db, std::uint64_t feature,
                                            std::uint64_t alpha, FeatureMode mode,
                                            const SearchConfig& config, bool exhaustive) {
    const QueryContext ctx = make_query_context(db, feature, alpha, mode);
    FeatureRecognition result;
    result.feature = feature;
    std::set<std::uint64_t> excluded;
    for (std::uint64_t attempt = 0;; ++attempt) {
        SearchConfig attempt_config = config;
        attempt_config.seed = derive_seed(config.seed, attempt);
        SearchReport report = run_search(db, ctx, attempt_config, excluded);
        const bool found = report.found_index.has_value();
        if (found) {
            result.indices.push_back(*report.found_index);
            excluded.insert(*report.found_index);
        }
        result.searches.push_back(std::move(report));
        if (!exhaustive || !found) break;
    }
    return result;
}

/// Exhaustive recognition over every codebook entry, in order. Exclusion sets
/// are per entry, so one pattern may legitimately match several features.
inline RecognitionReport recognize_all(const PatternDatabase& db, const Codebook& codebook,
                                       std::uint64_t alpha, FeatureMode mode,
                                       const SearchConfig& config, unsigned jobs = 1) {
    RecognitionReport report;
    report.entries.resize(codebook.entries.size());
    parallel_for_index(codebook.entries.size(), jobs, [&](std::size_t k) {
        SearchConfig entry_config = config;
        entry_config.seed = derive_seed(config.seed, k);
        report.entries[k] = recognize_feature(db, codebook.entries[k].feature, alpha, mode,
                                              entry_config, /*exhaustive=*/true);
    });
    for (const FeatureRecognition& e : report.entries)
        for (const SearchReport& s : e.searches) report.total_gpr += s.total_gpr;
    return report;
}

struct BruteForceEntry {
    std::uint64_t feature = 0;
    std::vector<std::uint64_t> indices;  // ascending
};

/// Linear-scan oracle with the same per-entry shape as recognize_all.
inline std::vector<BruteForceEntry> brute_force_recognize(const PatternDatabase& db,
                                                          const Codebook& codebook,
                                                          std::uint64_t alpha, FeatureMode mode) {
    std::vector<BruteForceEntry> out;
    out.reserve(codebook.entries.size());
    for (const CodebookEntry& e : codebook.entries)
        out.push_back({e.feature, marked_set(db, e.feature, alpha, mode)});
    return out;
}

/// Per-entry set comparison; empty result means the quantum and classical
/// passes recognized exactly the same indices.
inline std::vector<Discrepancy> diff_reports(const RecognitionReport& quantum,
                                             const std::vector<BruteForceEntry>& classical) {
    if (quantum.entries.size() != classical.size())
        throw std::invalid_argument("diff requires reports over the same codebook");
    std::vector<Discrepancy> diffs;
    for (std::size_t k = 0; k < classical.size(); ++k) {
        if (quantum.entries[k].feature != classical[k].feature)
            throw std::invalid_argument("diff requires reports over the same codebook");
        std::vector<std::uint64_t> q = quantum.entries[k].indices;
        std::sort(q.begin(), q.end());
        const std::vector<std::uint64_t>& c = classical[k].indices;
        std::vector<std::uint64_t> missing, extra;
        std::set_difference(c.begin(), c.end(), q.begin(), q.end(), std::back_inserter(missing));
        std::set_difference(q.begin(), q.end(), c.begin(), c.end(), std::back_inserter(extra));
        for (std::uint64_t i : missing) diffs.push_back({classical[k].feature, DiffKind::Missing, i});
        for (std::uint64_t i : extra) diffs.push_back({classical[k].feature, DiffKind::Extra, i});
    }
    return diffs;
}

}  // namespace qpr
