#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpr {

enum class PatternClass { Target, Spurious, Virtual };

// Idealized: only target records expose their real feature, spurious records
// collapse to the spurious sentinel. Extractor: spurious records run through
// the extractor too, as they would when nothing labels them up front.
enum class FeatureMode { Idealized, Extractor };

inline const char* to_string(PatternClass c) {
    switch (c) {
        case PatternClass::Target: return "target";
        case PatternClass::Spurious: return "spurious";
        default: return "virtual";
    }
}

inline const char* to_string(FeatureMode m) {
    return m == FeatureMode::Idealized ? "idealized" : "extractor";
}

struct PatternRecord {
    std::uint64_t index = 0;
    std::uint64_t payload = 0;
    PatternClass cls = PatternClass::Target;
};

// Raw integer feature computed from a payload. Outputs are saturated by
// feature_of so they can never collide with the sentinel codes.
using PayloadExtractor = std::function<std::uint64_t(std::uint64_t)>;

struct CodebookEntry {
    std::uint64_t feature = 0;
    std::optional<std::uint64_t> exemplar_payload;
};

/// Stored sample features that drive recognition; searched one entry at a time.
struct Codebook {
    std::vector<CodebookEntry> entries;
};

/// Indexed store of target, spurious and virtual padding records. Indices are
/// contiguous 0..N-1 with targets first, then spurious, then virtual padding;
/// N is always a power of two and at least 2.
struct PatternDatabase {
    std::vector<PatternRecord> records;
    std::uint64_t target_count = 0;
    std::uint64_t spurious_count = 0;
    std::uint64_t virtual_count = 0;
    int payload_bits = 0;
    int feature_bits = 0;
    int distance_bits = 0;
    PayloadExtractor extractor;  // identity unless a custom one is installed

    std::uint64_t size() const { return records.size(); }
};

// The top two feature codes are reserved: all-ones marks spurious records,
// all-ones minus one marks virtual padding. Extractor outputs saturate just
// below them, so sentinels never collide with a real feature.
inline std::uint64_t sentinel_spurious(int feature_bits) {
    return (std::uint64_t{1} << feature_bits) - 1;
}

inline std::uint64_t sentinel_virtual(int feature_bits) {
    return (std::uint64_t{1} << feature_bits) - 2;
}

inline std::uint64_t feature_saturation(int feature_bits) {
    return (std::uint64_t{1} << feature_bits) - 3;
}

inline bool is_sentinel_feature(std::uint64_t value, int feature_bits) {
    return value >= sentinel_virtual(feature_bits);
}

inline std::uint64_t max_distance(int distance_bits) {
    return (std::uint64_t{1} << distance_bits) - 1;
}

inline PatternDatabase build_database(const std::vector<std::uint64_t>& target_payloads,
                                      const std::vector<std::uint64_t>& spurious_payloads,
                                      int payload_bits, int feature_bits, int distance_bits,
                                      PayloadExtractor extractor = {}) {
    if (payload_bits < 1 || payload_bits > 30)
        throw std::invalid_argument("payload_bits must be in [1, 30]");
    if (feature_bits < 2 || feature_bits > 30)
        throw std::invalid_argument("feature_bits must be in [2, 30]");
    if (distance_bits < 1 || distance_bits > 30)
        throw std::invalid_argument("distance_bits must be in [1, 30]");
    if (target_payloads.empty() && spurious_payloads.empty())
        throw std::invalid_argument("pattern database needs at least one target or spurious payload");

    const auto check_payloads = [payload_bits](const std::vector<std::uint64_t>& payloads,
                                               const char* cls) {
        for (std::size_t k = 0; k < payloads.size(); ++k) {
            if (payloads[k] >> payload_bits != 0) {
                throw std::invalid_argument(std::string(cls) + " payload at position " +
                                            std::to_string(k) + " (" + std::to_string(payloads[k]) +
                                            ") exceeds payload_bits=" + std::to_string(payload_bits));
            }
        }
    };
    check_payloads(target_payloads, "target");
    check_payloads(spurious_payloads, "spurious");

    const std::uint64_t declared = target_payloads.size() + spurious_payloads.size();
    const std::uint64_t total = std::max<std::uint64_t>(2, std::bit_ceil(declared));

    PatternDatabase db;
    db.target_count = target_payloads.size();
    db.spurious_count = spurious_payloads.size();
    db.virtual_count = total - declared;
    db.payload_bits = payload_bits;
    db.feature_bits = feature_bits;
    db.distance_bits = distance_bits;
    db.extractor = extractor ? std::move(extractor)
                             : PayloadExtractor([](std::uint64_t p) { return p; });
    db.records.reserve(total);
    for (std::uint64_t p : target_payloads)
        db.records.push_back({db.records.size(), p, PatternClass::Target});
    for (std::uint64_t p : spurious_payloads)
        db.records.push_back({db.records.size(), p, PatternClass::Spurious});
    while (db.records.size() < total)
        db.records.push_back({db.records.size(), 0, PatternClass::Virtual});
    return db;
}

/// Feature of record `index`: targets (and in extractor mode, spurious
/// records) run through the extractor with sentinel-safe saturation; the rest
/// get their class sentinel.
inline std::uint64_t feature_of(const PatternDatabase& db, std::uint64_t index, FeatureMode mode) {
    if (index >= db.size())
        throw std::out_of_range("pattern index " + std::to_string(index) + " out of range (N=" +
                                std::to_string(db.size()) + ")");
    const PatternRecord& rec = db.records[index];
    const std::uint64_t cap = feature_saturation(db.feature_bits);
    const auto extracted = [&](std::uint64_t payload) {
        return std::min(db.extractor ? db.extractor(payload) : payload, cap);
    };
    switch (rec.cls) {
        case PatternClass::Target:
            return extracted(rec.payload);
        case PatternClass::Spurious:
            return mode == FeatureMode::Idealized ? sentinel_spurious(db.feature_bits)
                                                  : extracted(rec.payload);
        case PatternClass::Virtual:
        default:
            return sentinel_virtual(db.feature_bits);
    }
}

/// Similarity measure: saturated absolute difference, with any sentinel
/// operand maximally distant.
inline std::uint64_t distance(std::uint64_t a, std::uint64_t b, int feature_bits,
                              int distance_bits) {
    const std::uint64_t d_max = max_distance(distance_bits);
    if (is_sentinel_feature(a, feature_bits) || is_sentinel_feature(b, feature_bits)) return d_max;
    const std::uint64_t diff = a > b ? a - b : b - a;
    return std::min(diff, d_max);
}

/// The classical verification oracle: exactly the indices whose feature lies
/// within alpha of the query, by linear scan. alpha must stay strictly below
/// d_max or the sentinel classes would be marked as well.
inline std::vector<std::uint64_t> marked_set(const PatternDatabase& db,
                                             std::uint64_t query_feature, std::uint64_t alpha,
                                             FeatureMode mode) {
    if (alpha >= max_distance(db.distance_bits))
        throw std::invalid_argument("alpha < d_max violated: alpha=" + std::to_string(alpha) +
                                    ", d_max=" + std::to_string(max_distance(db.distance_bits)));
    std::vector<std::uint64_t> marked;
    for (std::uint64_t i = 0; i < db.size(); ++i) {
        const std::uint64_t f = feature_of(db, i, mode);
        if (distance(f, query_feature, db.feature_bits, db.distance_bits) <= alpha)
            marked.push_back(i);
    }
    return marked;
}

}  // namespace qpr
