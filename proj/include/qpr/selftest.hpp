#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qpr/quantum_engine.hpp"

namespace qpr {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// ---- seeded generators for random instances and states ----

/// Random database with N <= 2^max_index_bits; payload duplicates are
/// injected now and then so several records can share a feature.
inline PatternDatabase random_database(Rng& rng, int max_index_bits = 4, int payload_bits = 4,
                                       int feature_bits = 4, int distance_bits = 4) {
    const int index_bits = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_index_bits)));
    const std::uint64_t n_total = std::uint64_t{1} << index_bits;
    const std::uint64_t declared = 1 + uniform_below(rng, n_total);
    const std::uint64_t n_targets = uniform_below(rng, declared + 1);
    const std::uint64_t payload_range = std::uint64_t{1} << payload_bits;
    std::vector<std::uint64_t> targets, spurious;
    for (std::uint64_t k = 0; k < n_targets; ++k) {
        if (!targets.empty() && uniform_below(rng, 4) == 0)
            targets.push_back(targets[uniform_below(rng, targets.size())]);
        else
            targets.push_back(uniform_below(rng, payload_range));
    }
    for (std::uint64_t k = n_targets; k < declared; ++k)
        spurious.push_back(uniform_below(rng, payload_range));
    return build_database(targets, spurious, payload_bits, feature_bits, distance_bits);
}

/// Random query, biased toward features that actually occur in the database.
inline QueryContext random_context(Rng& rng, const PatternDatabase& db) {
    QueryContext ctx;
    ctx.mode = uniform_below(rng, 2) == 0 ? FeatureMode::Idealized : FeatureMode::Extractor;
    ctx.alpha = uniform_below(rng, max_distance(db.distance_bits));
    if (uniform_below(rng, 2) == 0 && db.target_count > 0)
        ctx.query_feature = feature_of(db, uniform_below(rng, db.target_count), ctx.mode);
    else
        ctx.query_feature = uniform_below(rng, sentinel_virtual(db.feature_bits));
    return ctx;
}

/// Random normalized state with support anywhere in the register space.
inline FullState random_state(const RegisterLayout& layout, Rng& rng) {
    FullState st;
    st.layout = layout;
    st.amplitudes.resize(layout.dimension());
    for (Amplitude& a : st.amplitudes)
        a = Amplitude{2.0 * uniform_unit(rng) - 1.0, 2.0 * uniform_unit(rng) - 1.0};
    const double scale = 1.0 / std::sqrt(squared_norm(st.amplitudes));
    for (Amplitude& a : st.amplitudes) a *= scale;
    return st;
}

/// Random normalized state restricted to the ancilla-zero manifold.
inline FullState random_manifold_state(const RegisterLayout& layout, Rng& rng) {
    FullState st;
    st.layout = layout;
    st.amplitudes.assign(layout.dimension(), Amplitude{0.0, 0.0});
    for (std::uint64_t i = 0; i < layout.index_count(); ++i)
        st.amplitudes[layout.ordinal(i, 0, 0, 0)] =
            Amplitude{2.0 * uniform_unit(rng) - 1.0, 2.0 * uniform_unit(rng) - 1.0};
    const double scale = 1.0 / std::sqrt(squared_norm(st.amplitudes));
    for (Amplitude& a : st.amplitudes) a *= scale;
    return st;
}

inline double max_abs_difference(const std::vector<Amplitude>& a,
                                 const std::vector<Amplitude>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

namespace detail {

inline std::string scientific(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << v;
    return out.str();
}

}  // namespace detail

// ---- invariant suites ----

/// Norm drift of every register operation on random states (the whole
/// iteration is checked on manifold states, where it is defined).
inline CheckResult check_unitarity(std::uint64_t seed = 0, int trials = 100) {
    Rng rng = make_rng(seed, 0x0701);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PatternDatabase db = random_database(rng, 3, 2, 3, 2);
        const QueryContext ctx = random_context(rng, db);
        const RegisterLayout layout = layout_for(db);
        FullState st = random_state(layout, rng);
        const auto drift = [&] { return std::abs(std::sqrt(squared_norm(st.amplitudes)) - 1.0); };
        apply_load(st, db);
        worst = std::max(worst, drift());
        apply_feature_oracle(st, db, ctx.mode);
        worst = std::max(worst, drift());
        apply_distance_oracle(st, ctx);
        worst = std::max(worst, drift());
        apply_mark_oracle(st, ctx);
        worst = std::max(worst, drift());
        apply_diffusion(st);
        worst = std::max(worst, drift());
        FullState manifold = random_manifold_state(layout, rng);
        apply_gpr(manifold, db, ctx);
        worst = std::max(worst, std::abs(std::sqrt(squared_norm(manifold.amplitudes)) - 1.0));
    }
    return {"unitarity", worst <= kNormTolerance,
            "max norm drift " + detail::scientific(worst)};
}

/// Each lifted oracle and the diffusion applied twice is the identity.
inline CheckResult check_involutions(std::uint64_t seed = 0, int trials = 100) {
    Rng rng = make_rng(seed, 0x0702);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PatternDatabase db = random_database(rng, 3, 2, 3, 2);
        const QueryContext ctx = random_context(rng, db);
        const FullState original = random_state(layout_for(db), rng);
        const std::function<void(FullState&)> ops[] = {
            [&](FullState& s) { apply_load(s, db); },
            [&](FullState& s) { apply_feature_oracle(s, db, ctx.mode); },
            [&](FullState& s) { apply_distance_oracle(s, ctx); },
            [&](FullState& s) { apply_mark_oracle(s, ctx); },
            [&](FullState& s) { apply_diffusion(s); },
        };
        for (const auto& op : ops) {
            FullState st = original;
            op(st);
            op(st);
            worst = std::max(worst, max_abs_difference(st.amplitudes, original.amplitudes));
        }
    }
    return {"involution", worst <= kNormTolerance,
            "max deviation from identity " + detail::scientific(worst)};
}

/// Uncomputing the three data oracles in reverse order undoes them exactly.
inline CheckResult check_uncompute_roundtrip(std::uint64_t seed = 0, int trials = 100) {
    Rng rng = make_rng(seed, 0x0703);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PatternDatabase db = random_database(rng, 3, 2, 3, 2);
        const QueryContext ctx = random_context(rng, db);
        const FullState original = random_state(layout_for(db), rng);
        FullState st = original;
        apply_load(st, db);
        apply_feature_oracle(st, db, ctx.mode);
        apply_distance_oracle(st, ctx);
        apply_distance_oracle(st, ctx);
        apply_feature_oracle(st, db, ctx.mode);
        apply_load(st, db);
        worst = std::max(worst, max_abs_difference(st.amplitudes, original.amplitudes));
    }
    return {"uncompute_roundtrip", worst <= kNormTolerance,
            "max roundtrip residue " + detail::scientific(worst)};
}

/// Every whole iteration leaves the ancilla registers at exactly zero.
inline CheckResult check_ancilla_cleanliness(std::uint64_t seed = 0, int instances = 20,
                                             int max_iterations = 10) {
    Rng rng = make_rng(seed, 0x0704);
    double worst = 0.0;
    for (int t = 0; t < instances; ++t) {
        const PatternDatabase db = random_database(rng, 3, 3, 3, 3);
        const QueryContext ctx = random_context(rng, db);
        FullState st = prepare_initial(layout_for(db));
        for (int j = 0; j < max_iterations; ++j) {
            apply_gpr(st, db, ctx);
            worst = std::max(worst, max_ancilla_residue(st));
        }
    }
    return {"ancilla_cleanliness", worst <= kAncillaTolerance,
            "max off-manifold amplitude " + detail::scientific(worst)};
}

/// The full statevector and the index-subspace engine produce the same index
/// marginal at every iteration count.
inline CheckResult check_engine_equivalence(std::uint64_t seed = 0, int instances = 50,
                                            int max_iterations = 10, double tolerance = 1e-10) {
    Rng rng = make_rng(seed, 0x0705);
    double worst = 0.0;
    for (int t = 0; t < instances; ++t) {
        const PatternDatabase db = random_database(rng, 4, 4, 4, 4);
        const QueryContext ctx = random_context(rng, db);
        FullState full = prepare_initial(layout_for(db));
        ReducedState reduced = build_reduced(db, ctx);
        for (int j = 0;; ++j) {
            const std::vector<double> pf = index_marginal(full);
            const std::vector<double> pr = index_marginal(reduced);
            for (std::size_t i = 0; i < pf.size(); ++i)
                worst = std::max(worst, std::abs(pf[i] - pr[i]));
            if (j == max_iterations) break;
            apply_gpr(full, db, ctx);
            apply_gpr_reduced(reduced);
        }
    }
    return {"engine_equivalence", worst <= tolerance,
            "max marginal deviation " + detail::scientific(worst)};
}

using ReducedStep = std::function<void(ReducedState&)>;

/// Simulated success probability against the closed form, over a grid of
/// (N, M, j). The iteration step is injectable so a corrupted engine can be
/// shown to fail this suite.
inline CheckResult check_closed_form_agreement(double tolerance = 1e-9, ReducedStep step = {}) {
    if (!step) step = [](ReducedState& s) { apply_gpr_reduced(s); };
    double worst = 0.0;
    for (std::uint64_t n_total : {2ull, 4ull, 8ull, 16ull, 64ull}) {
        for (std::uint64_t n_marked = 0; n_marked <= n_total / 2; ++n_marked) {
            const std::vector<std::uint64_t> targets(n_marked, 0);
            const std::vector<std::uint64_t> spurious(n_total - n_marked, 0);
            const PatternDatabase db = build_database(targets, spurious, 4, 4, 4);
            const QueryContext ctx = make_query_context(db, 0, 0, FeatureMode::Idealized);
            ReducedState st = build_reduced(db, ctx);
            for (std::uint64_t j = 0; j <= 10; ++j) {
                const double expected = closed_form_success(n_total, n_marked, j);
                worst = std::max(worst, std::abs(success_probability(st) - expected));
                step(st);
            }
        }
    }
    return {"closed_form_agreement", worst <= tolerance,
            "max deviation from closed form " + detail::scientific(worst)};
}

inline std::vector<CheckResult> run_selftest(std::uint64_t seed = 0) {
    return {
        check_unitarity(seed),        check_involutions(seed),
        check_uncompute_roundtrip(seed), check_ancilla_cleanliness(seed),
        check_engine_equivalence(seed),  check_closed_form_agreement(),
    };
}

inline bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

}  // namespace qpr
