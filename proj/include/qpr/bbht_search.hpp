#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "qpr/quantum_engine.hpp"

namespace qpr {

enum class EngineKind { Full, Reduced };

inline const char* to_string(EngineKind e) {
    return e == EngineKind::Full ? "full" : "reduced";
}

struct SearchConfig {
    double lambda = 1.2;      // budget growth factor, strictly inside (1, 4/3)
    std::uint64_t seed = 0;
    double cap_factor = 8.0;  // query cap = ceil(cap_factor * sqrt(N)); +inf disables the cap
    EngineKind engine = EngineKind::Reduced;
};

inline void validate_config(const SearchConfig& cfg) {
    if (!(cfg.lambda > 1.0 && cfg.lambda < 4.0 / 3.0))
        throw std::invalid_argument("lambda must lie strictly between 1 and 4/3");
    if (!(cfg.cap_factor > 0.0))
        throw std::invalid_argument("cap_factor must be positive");
}

struct SearchRound {
    double m = 1.0;
    std::uint64_t iterations = 0;  // j, the iteration count applied this round
    std::uint64_t outcome_index = 0;
    bool verified = false;
};

struct SearchReport {
    std::vector<SearchRound> rounds;
    std::uint64_t total_gpr = 0;
    std::optional<std::uint64_t> found_index;
    SearchConfig config;
    double query_cap = 0.0;  // resolved ceil(cap_factor * sqrt(N))
};

// Budget growth rule: m <- min(lambda * m, sqrt(N)).
inline double next_m(double m, double lambda, std::uint64_t n_total) {
    return std::min(lambda * m, std::sqrt(static_cast<double>(n_total)));
}

// Uniform draw from {0, ..., ceil(m)-1}.
inline std::uint64_t draw_j(double m, Rng& rng) {
    return uniform_below(rng, static_cast<std::uint64_t>(std::ceil(m)));
}

// Classical recheck of a measured candidate.
inline bool verify_candidate(const PatternDatabase& db, const QueryContext& ctx,
                             std::uint64_t candidate) {
    const std::uint64_t f = feature_of(db, candidate, ctx.mode);  // throws on a bad index
    return distance(f, ctx.query_feature, db.feature_bits, db.distance_bits) <= ctx.alpha;
}

inline double resolve_query_cap(const SearchConfig& cfg, std::uint64_t n_total) {
    return std::ceil(cfg.cap_factor * std::sqrt(static_cast<double>(n_total)));
}

/// Randomized schedule for an unknown number of marked patterns: draw an
/// iteration count below the growing budget m, run that many pattern
/// iterations on a fresh |psi1>, measure, verify classically. Stops on a
/// verified hit, or with not-found once the cumulative iteration budget is
/// spent (the final draw is clamped so the budget is spent exactly).
/// Excluded indices are dropped from the reduced marked set and always fail
/// verification.
inline SearchReport run_search(const PatternDatabase& db, const QueryContext& ctx,
                               const SearchConfig& config,
                               const std::set<std::uint64_t>& excluded = {}) {
    validate_config(config);
    validate_context(ctx, db.feature_bits, db.distance_bits);
    const std::uint64_t n_total = db.size();
    for (std::uint64_t e : excluded)
        if (e >= n_total)
            throw std::invalid_argument("excluded index " + std::to_string(e) + " out of range");

    SearchReport report;
    report.config = config;
    const double cap = resolve_query_cap(config, n_total);
    report.query_cap = cap;

    std::vector<std::uint64_t> marked;
    if (config.engine == EngineKind::Reduced) {
        for (std::uint64_t i : marked_set(db, ctx.query_feature, ctx.alpha, ctx.mode))
            if (excluded.count(i) == 0) marked.push_back(i);
    }

    double m = 1.0;
    for (std::uint64_t round = 0;; ++round) {
        Rng rng = make_rng(config.seed, round);
        std::uint64_t j = draw_j(m, rng);
        const double remaining = cap - static_cast<double>(report.total_gpr);
        if (static_cast<double>(j) > remaining) j = static_cast<std::uint64_t>(remaining);

        MeasurementOutcome outcome;
        if (config.engine == EngineKind::Reduced) {
            ReducedState state;
            state.amplitudes.assign(n_total,
                                    Amplitude{1.0 / std::sqrt(static_cast<double>(n_total)), 0.0});
            state.marked = marked;
            for (std::uint64_t k = 0; k < j; ++k) apply_gpr_reduced(state);
            outcome = measure_index(state, rng);
        } else {
            FullState state = prepare_initial(layout_for(db));
            for (std::uint64_t k = 0; k < j; ++k) apply_gpr(state, db, ctx);
            outcome = measure_index(state, rng);
        }

        report.total_gpr += j;
        const bool verified =
            excluded.count(outcome.index) == 0 && verify_candidate(db, ctx, outcome.index);
        report.rounds.push_back({m, j, outcome.index, verified});

        if (verified) {
            report.found_index = outcome.index;
            break;
        }
        if (static_cast<double>(report.total_gpr) >= cap) break;
        m = next_m(m, config.lambda, n_total);
    }

    // Exit-path audit: a found index is verified and never excluded, and the
    // budget is never overdrawn.
    if (report.found_index &&
        (excluded.count(*report.found_index) != 0 || !verify_candidate(db, ctx, *report.found_index)))
        throw std::logic_error("search soundness violated");
    if (static_cast<double>(report.total_gpr) > cap)
        throw std::logic_error("search budget exceeded");
    return report;
}

}  // namespace qpr
