#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qpr/bbht_search.hpp"
#include "qpr/instance.hpp"
#include "qpr/parallel.hpp"

namespace qpr {

struct SweepRow {
    std::uint64_t pattern_count = 0;  // N
    std::uint64_t marked_count = 0;   // M
    std::uint64_t trials = 0;
    double mean_gpr = 0.0;
    double found_rate = 0.0;
    double ratio = 0.0;  // mean_gpr / sqrt(N / M), 0 when M = 0
};

/// One (N, M) row: `trials` independent seeded searches against a synthetic
/// instance with exactly M matching targets. Reduced engine only; the full
/// statevector would blow the size cap at sweep scales.
inline SweepRow run_sweep_row(std::uint64_t n_total, std::uint64_t n_marked, std::uint64_t trials,
                              const SearchConfig& base, unsigned jobs = 1) {
    if (base.engine != EngineKind::Reduced)
        throw std::invalid_argument("sweep requires the reduced engine");
    if (trials == 0) throw std::invalid_argument("sweep needs at least one trial");
    validate_config(base);
    const Instance inst = synthesize_sweep_instance(n_total, n_marked);
    const QueryContext ctx = make_query_context(inst.database, 0, 0, FeatureMode::Idealized);

    std::vector<std::uint64_t> gpr(trials, 0);
    std::vector<char> found(trials, 0);
    parallel_for_index(trials, jobs, [&](std::size_t t) {
        SearchConfig cfg = base;
        cfg.seed = derive_seed(base.seed, t);
        const SearchReport r = run_search(inst.database, ctx, cfg);
        gpr[t] = r.total_gpr;
        found[t] = r.found_index.has_value() ? 1 : 0;
    });

    SweepRow row;
    row.pattern_count = n_total;
    row.marked_count = n_marked;
    row.trials = trials;
    std::uint64_t total = 0, hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        total += gpr[t];
        hits += found[t];
    }
    row.mean_gpr = static_cast<double>(total) / static_cast<double>(trials);
    row.found_rate = static_cast<double>(hits) / static_cast<double>(trials);
    row.ratio = n_marked == 0
                    ? 0.0
                    : row.mean_gpr / std::sqrt(static_cast<double>(n_total) /
                                               static_cast<double>(n_marked));
    return row;
}

}  // namespace qpr
