#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpr/pattern_model.hpp"
#include "qpr/quantum_engine.hpp"

namespace qpr {

using Json = nlohmann::json;

/// A fully validated problem statement: database, codebook, threshold, mode.
struct Instance {
    PatternDatabase database;
    Codebook codebook;
    std::uint64_t alpha = 0;
    FeatureMode mode = FeatureMode::Idealized;
};

inline FeatureMode parse_feature_mode(const std::string& s) {
    if (s == "idealized") return FeatureMode::Idealized;
    if (s == "extractor") return FeatureMode::Extractor;
    throw std::runtime_error("mode must be \"idealized\" or \"extractor\", got \"" + s + "\"");
}

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw std::runtime_error(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

inline std::uint64_t require_uint(const Json& j, const char* key, const std::string& where) {
    const Json& v = require_field(j, key, where);
    if (!v.is_number_unsigned())
        throw std::runtime_error(where + ": field \"" + key + "\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

inline std::string require_string(const Json& j, const char* key, const std::string& where) {
    const Json& v = require_field(j, key, where);
    if (!v.is_string())
        throw std::runtime_error(where + ": field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace detail

inline Instance instance_from_json(const Json& doc) {
    using detail::require_field;
    using detail::require_string;
    using detail::require_uint;

    const std::string top = "instance";
    const auto payload_bits = static_cast<int>(require_uint(doc, "payload_bits", top));
    const auto feature_bits = static_cast<int>(require_uint(doc, "feature_bits", top));
    const auto distance_bits = static_cast<int>(require_uint(doc, "distance_bits", top));
    const std::uint64_t alpha = require_uint(doc, "alpha", top);
    const FeatureMode mode = parse_feature_mode(require_string(doc, "mode", top));

    const Json& patterns = require_field(doc, "patterns", top);
    if (!patterns.is_array()) throw std::runtime_error("instance: \"patterns\" must be an array");
    std::vector<std::uint64_t> targets, spurious;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        const std::string where = "patterns[" + std::to_string(k) + "]";
        const std::uint64_t payload = require_uint(patterns[k], "payload", where);
        const std::string cls = require_string(patterns[k], "class", where);
        if (cls == "target") {
            targets.push_back(payload);
        } else if (cls == "spurious") {
            spurious.push_back(payload);
        } else if (cls == "virtual") {
            throw std::runtime_error(where + ": virtual records are derived padding, not input");
        } else {
            throw std::runtime_error(where + ": class must be \"target\" or \"spurious\"");
        }
    }

    Instance inst;
    inst.database = build_database(targets, spurious, payload_bits, feature_bits, distance_bits);
    inst.alpha = alpha;
    inst.mode = mode;
    if (alpha >= max_distance(distance_bits))
        throw std::runtime_error("constraint \"alpha < d_max\" violated: alpha=" +
                                 std::to_string(alpha) + ", d_max=" +
                                 std::to_string(max_distance(distance_bits)));

    const Json& codebook = require_field(doc, "codebook", top);
    if (!codebook.is_array()) throw std::runtime_error("instance: \"codebook\" must be an array");
    for (std::size_t k = 0; k < codebook.size(); ++k) {
        const std::string where = "codebook[" + std::to_string(k) + "]";
        CodebookEntry entry;
        entry.feature = require_uint(codebook[k], "feature", where);
        if (entry.feature >> feature_bits != 0)
            throw std::runtime_error(where + ": feature " + std::to_string(entry.feature) +
                                     " exceeds feature_bits=" + std::to_string(feature_bits));
        if (is_sentinel_feature(entry.feature, feature_bits))
            throw std::runtime_error("constraint \"no sentinel in codebook\" violated at " + where);
        if (codebook[k].contains("exemplar_payload")) {
            const std::uint64_t p = require_uint(codebook[k], "exemplar_payload", where);
            if (p >> payload_bits != 0)
                throw std::runtime_error(where + ": exemplar_payload exceeds payload_bits=" +
                                         std::to_string(payload_bits));
            entry.exemplar_payload = p;
        }
        inst.codebook.entries.push_back(entry);
    }
    return inst;
}

inline Instance parse_instance(const std::string& text, const std::string& origin = "<memory>") {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    try {
        return instance_from_json(doc);
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), path);
}

/// Canonical JSON view of an instance (virtual padding omitted, classes
/// grouped). Used for digests and report embedding.
inline Json instance_to_json(const Instance& inst) {
    Json j;
    j["payload_bits"] = inst.database.payload_bits;
    j["feature_bits"] = inst.database.feature_bits;
    j["distance_bits"] = inst.database.distance_bits;
    j["alpha"] = inst.alpha;
    j["mode"] = to_string(inst.mode);
    Json patterns = Json::array();
    for (const PatternRecord& rec : inst.database.records) {
        if (rec.cls == PatternClass::Virtual) continue;
        patterns.push_back(Json{{"payload", rec.payload}, {"class", to_string(rec.cls)}});
    }
    j["patterns"] = patterns;
    Json codebook = Json::array();
    for (const CodebookEntry& e : inst.codebook.entries) {
        Json entry{{"feature", e.feature}};
        if (e.exemplar_payload) entry["exemplar_payload"] = *e.exemplar_payload;
        codebook.push_back(entry);
    }
    j["codebook"] = codebook;
    return j;
}

/// FNV-1a over the canonical form; identifies an instance inside reports.
inline std::string instance_digest(const Instance& inst) {
    const std::string canon = instance_to_json(inst).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[k] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

/// Synthetic single-feature instance with exactly `n_marked` matching targets
/// (payload 0 under the identity extractor, queried at feature 0, alpha 0)
/// and spurious records filling the remaining slots.
inline Instance synthesize_sweep_instance(std::uint64_t n_total, std::uint64_t n_marked) {
    if (n_total < 2 || !std::has_single_bit(n_total))
        throw std::invalid_argument("sweep N must be a power of two >= 2");
    if (n_marked > n_total) throw std::invalid_argument("sweep M must not exceed N");
    const std::vector<std::uint64_t> targets(n_marked, 0);
    const std::vector<std::uint64_t> spurious(n_total - n_marked, 0);
    Instance inst;
    inst.database = build_database(targets, spurious, 4, 4, 4);
    inst.codebook.entries.push_back({0, std::nullopt});
    inst.alpha = 0;
    inst.mode = FeatureMode::Idealized;
    return inst;
}

}  // namespace qpr
