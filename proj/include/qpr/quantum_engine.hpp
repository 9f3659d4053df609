#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpr/pattern_model.hpp"
#include "qpr/rng.hpp"

namespace qpr {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultTotalBitsCap = 24;  // full statevector ceiling
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kAncillaTolerance = 1e-12;

/// Bit layout of the simulated registers: index occupies the high bits, then
/// payload, feature and distance, so that
///   ordinal(i, x, c, d) = ((i * 2^payload_bits + x) * 2^feature_bits + c) * 2^distance_bits + d.
struct RegisterLayout {
    int index_bits = 0;
    int payload_bits = 0;
    int feature_bits = 0;
    int distance_bits = 0;

    int total_bits() const { return index_bits + payload_bits + feature_bits + distance_bits; }
    int ancilla_bits() const { return payload_bits + feature_bits + distance_bits; }
    std::uint64_t dimension() const { return std::uint64_t{1} << total_bits(); }
    std::uint64_t index_count() const { return std::uint64_t{1} << index_bits; }
    std::uint64_t ancilla_dim() const { return std::uint64_t{1} << ancilla_bits(); }

    int distance_shift() const { return 0; }
    int feature_shift() const { return distance_bits; }
    int payload_shift() const { return distance_bits + feature_bits; }
    int index_shift() const { return distance_bits + feature_bits + payload_bits; }

    std::uint64_t ordinal(std::uint64_t i, std::uint64_t x, std::uint64_t c,
                          std::uint64_t d) const {
        return (((i << payload_bits | x) << feature_bits | c) << distance_bits) | d;
    }
    std::uint64_t index_field(std::uint64_t o) const { return o >> index_shift(); }
    std::uint64_t payload_field(std::uint64_t o) const {
        return (o >> payload_shift()) & ((std::uint64_t{1} << payload_bits) - 1);
    }
    std::uint64_t feature_field(std::uint64_t o) const {
        return (o >> feature_shift()) & ((std::uint64_t{1} << feature_bits) - 1);
    }
    std::uint64_t distance_field(std::uint64_t o) const {
        return o & ((std::uint64_t{1} << distance_bits) - 1);
    }
    std::uint64_t ancilla_field(std::uint64_t o) const { return o & (ancilla_dim() - 1); }
};

inline void validate_layout(const RegisterLayout& l, int cap = kDefaultTotalBitsCap) {
    if (l.index_bits < 1 || l.payload_bits < 1 || l.feature_bits < 1 || l.distance_bits < 1)
        throw std::invalid_argument("register layout needs at least one bit per register");
    if (l.total_bits() > cap)
        throw std::invalid_argument("register layout of " + std::to_string(l.total_bits()) +
                                    " bits exceeds the simulation cap of " + std::to_string(cap));
}

inline RegisterLayout layout_for(const PatternDatabase& db) {
    RegisterLayout l;
    l.index_bits = std::bit_width(db.size()) - 1;  // N is a power of two
    l.payload_bits = db.payload_bits;
    l.feature_bits = db.feature_bits;
    l.distance_bits = db.distance_bits;
    return l;
}

/// Classical contents of the two parameter registers: the match threshold and
/// the query feature. The algorithm never superposes them, so they are not
/// simulated as qubits.
struct QueryContext {
    std::uint64_t alpha = 0;
    std::uint64_t query_feature = 0;
    FeatureMode mode = FeatureMode::Idealized;
};

inline void validate_context(const QueryContext& ctx, int feature_bits, int distance_bits) {
    if (ctx.alpha >= max_distance(distance_bits))
        throw std::invalid_argument("alpha < d_max violated: alpha=" + std::to_string(ctx.alpha) +
                                    ", d_max=" + std::to_string(max_distance(distance_bits)));
    if (ctx.query_feature >> feature_bits != 0)
        throw std::invalid_argument("query feature " + std::to_string(ctx.query_feature) +
                                    " exceeds feature_bits=" + std::to_string(feature_bits));
    if (is_sentinel_feature(ctx.query_feature, feature_bits))
        throw std::invalid_argument("query feature must not be a sentinel code");
}

inline QueryContext make_query_context(const PatternDatabase& db, std::uint64_t query_feature,
                                       std::uint64_t alpha, FeatureMode mode) {
    QueryContext ctx{alpha, query_feature, mode};
    validate_context(ctx, db.feature_bits, db.distance_bits);
    return ctx;
}

/// Dense statevector over the index, payload, feature and distance registers.
struct FullState {
    RegisterLayout layout;
    std::vector<Amplitude> amplitudes;
    std::uint64_t gpr_count = 0;
};

/// Index-subspace engine. After every whole pattern iteration the ancilla
/// registers are functions of the index register, so the dynamics reduce to
/// N amplitudes plus the marked set.
struct ReducedState {
    std::vector<Amplitude> amplitudes;
    std::vector<std::uint64_t> marked;  // ascending
    std::uint64_t gpr_count = 0;
};

struct MeasurementOutcome {
    std::uint64_t index = 0;
    double draw = 0.0;  // the uniform variate consumed
};

inline double squared_norm(const std::vector<Amplitude>& amps) {
    double acc = 0.0;
    for (const Amplitude& a : amps) acc += std::norm(a);
    return acc;
}

/// |psi1>: uniform over the index register, ancillas zero.
inline FullState prepare_initial(const RegisterLayout& layout, int cap = kDefaultTotalBitsCap) {
    validate_layout(layout, cap);
    FullState st;
    st.layout = layout;
    st.amplitudes.assign(layout.dimension(), Amplitude{0.0, 0.0});
    const double amp = 1.0 / std::sqrt(static_cast<double>(layout.index_count()));
    for (std::uint64_t i = 0; i < layout.index_count(); ++i)
        st.amplitudes[layout.ordinal(i, 0, 0, 0)] = amp;
    return st;
}

inline void require_layout_match(const FullState& st, const PatternDatabase& db) {
    const RegisterLayout want = layout_for(db);
    if (st.layout.index_bits != want.index_bits || st.layout.payload_bits != want.payload_bits ||
        st.layout.feature_bits != want.feature_bits ||
        st.layout.distance_bits != want.distance_bits)
        throw std::invalid_argument("state layout does not match the pattern database");
}

// XOR the record payload into the payload register, conditioned on the index
// register. A basis permutation, hence its own inverse.
inline void apply_load(FullState& st, const PatternDatabase& db) {
    require_layout_match(st, db);
    const RegisterLayout& L = st.layout;
    for (std::uint64_t o = 0; o < L.dimension(); ++o) {
        const std::uint64_t value = db.records[L.index_field(o)].payload;
        if (value == 0) continue;
        const std::uint64_t partner = o ^ (value << L.payload_shift());
        if (o < partner) std::swap(st.amplitudes[o], st.amplitudes[partner]);
    }
}

// XOR the pattern feature into the feature register, conditioned on the index
// register. On every reachable state the payload register is a function of
// the index, so this equals conditioning on the loaded payload.
inline void apply_feature_oracle(FullState& st, const PatternDatabase& db, FeatureMode mode) {
    require_layout_match(st, db);
    const RegisterLayout& L = st.layout;
    std::vector<std::uint64_t> features(db.size());
    for (std::uint64_t i = 0; i < db.size(); ++i) features[i] = feature_of(db, i, mode);
    for (std::uint64_t o = 0; o < L.dimension(); ++o) {
        const std::uint64_t value = features[L.index_field(o)];
        if (value == 0) continue;
        const std::uint64_t partner = o ^ (value << L.feature_shift());
        if (o < partner) std::swap(st.amplitudes[o], st.amplitudes[partner]);
    }
}

// XOR the similarity between the feature register and the query feature into
// the distance register.
inline void apply_distance_oracle(FullState& st, const QueryContext& ctx) {
    const RegisterLayout& L = st.layout;
    validate_context(ctx, L.feature_bits, L.distance_bits);
    std::vector<std::uint64_t> table(std::uint64_t{1} << L.feature_bits);
    for (std::uint64_t c = 0; c < table.size(); ++c)
        table[c] = distance(c, ctx.query_feature, L.feature_bits, L.distance_bits);
    for (std::uint64_t o = 0; o < L.dimension(); ++o) {
        const std::uint64_t value = table[L.feature_field(o)];
        if (value == 0) continue;
        const std::uint64_t partner = o ^ (value << L.distance_shift());
        if (o < partner) std::swap(st.amplitudes[o], st.amplitudes[partner]);
    }
}

// Phase-flip every basis state whose distance register satisfies d <= alpha.
inline void apply_mark_oracle(FullState& st, const QueryContext& ctx) {
    const RegisterLayout& L = st.layout;
    validate_context(ctx, L.feature_bits, L.distance_bits);
    for (std::uint64_t o = 0; o < L.dimension(); ++o)
        if (L.distance_field(o) <= ctx.alpha) st.amplitudes[o] = -st.amplitudes[o];
}

// Inversion about the mean on the index register, identity on the ancillas:
// within each fixed ancilla configuration, a_i <- 2*mean(a) - a_i.
inline void apply_diffusion(FullState& st) {
    const RegisterLayout& L = st.layout;
    std::vector<Amplitude> sums(L.ancilla_dim(), Amplitude{0.0, 0.0});
    for (std::uint64_t o = 0; o < L.dimension(); ++o)
        sums[L.ancilla_field(o)] += st.amplitudes[o];
    const double scale = 2.0 / static_cast<double>(L.index_count());
    for (std::uint64_t o = 0; o < L.dimension(); ++o)
        st.amplitudes[o] = scale * sums[L.ancilla_field(o)] - st.amplitudes[o];
}

inline double max_ancilla_residue(const FullState& st) {
    const RegisterLayout& L = st.layout;
    double worst = 0.0;
    for (std::uint64_t o = 0; o < L.dimension(); ++o)
        if (L.ancilla_field(o) != 0) worst = std::max(worst, std::abs(st.amplitudes[o]));
    return worst;
}

/// One whole pattern-recognition iteration: load, compute feature and
/// distance, phase-mark, uncompute (each compute step is an involution, so
/// the adjoint is re-application in reverse order), then diffuse.
inline void apply_gpr(FullState& st, const PatternDatabase& db, const QueryContext& ctx) {
    require_layout_match(st, db);
    validate_context(ctx, st.layout.feature_bits, st.layout.distance_bits);
    if (max_ancilla_residue(st) > kAncillaTolerance)
        throw std::domain_error("pattern iteration applied off the ancilla-zero manifold");
    apply_load(st, db);
    apply_feature_oracle(st, db, ctx.mode);
    apply_distance_oracle(st, ctx);
    apply_mark_oracle(st, ctx);
    apply_distance_oracle(st, ctx);
    apply_feature_oracle(st, db, ctx.mode);
    apply_load(st, db);
    apply_diffusion(st);
    ++st.gpr_count;
}

inline std::vector<double> index_marginal(const FullState& st) {
    std::vector<double> p(st.layout.index_count(), 0.0);
    for (std::uint64_t o = 0; o < st.layout.dimension(); ++o)
        p[st.layout.index_field(o)] += std::norm(st.amplitudes[o]);
    return p;
}

inline std::vector<double> index_marginal(const ReducedState& st) {
    std::vector<double> p(st.amplitudes.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(st.amplitudes[i]);
    return p;
}

inline MeasurementOutcome sample_marginal(const std::vector<double>& marginal, Rng& rng) {
    const double u = uniform_unit(rng);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < marginal.size(); ++i) {
        acc += marginal[i];
        if (u < acc) return {i, u};
    }
    return {marginal.size() - 1, u};
}

/// Sample the index register. The sampled state is read-only: the algorithm
/// always restarts from |psi1>, so no collapsed state is produced.
inline MeasurementOutcome measure_index(const FullState& st, Rng& rng) {
    if (std::abs(squared_norm(st.amplitudes) - 1.0) > 1e-9)
        throw std::domain_error("cannot measure an unnormalized state");
    return sample_marginal(index_marginal(st), rng);
}

inline MeasurementOutcome measure_index(const ReducedState& st, Rng& rng) {
    if (std::abs(squared_norm(st.amplitudes) - 1.0) > 1e-9)
        throw std::domain_error("cannot measure an unnormalized state");
    return sample_marginal(index_marginal(st), rng);
}

/// Uniform index-subspace state whose marked set is the classical marked set
/// minus `excluded`.
inline ReducedState build_reduced(const PatternDatabase& db, const QueryContext& ctx,
                                  const std::set<std::uint64_t>& excluded = {}) {
    validate_context(ctx, db.feature_bits, db.distance_bits);
    ReducedState st;
    const std::uint64_t n = db.size();
    st.amplitudes.assign(n, Amplitude{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
    for (std::uint64_t i : marked_set(db, ctx.query_feature, ctx.alpha, ctx.mode))
        if (excluded.count(i) == 0) st.marked.push_back(i);
    return st;
}

/// Index-subspace form of the pattern iteration: flip the sign of marked
/// amplitudes, then invert about the mean.
inline void apply_gpr_reduced(ReducedState& st) {
    for (std::uint64_t i : st.marked) st.amplitudes[i] = -st.amplitudes[i];
    Amplitude sum{0.0, 0.0};
    for (const Amplitude& a : st.amplitudes) sum += a;
    const Amplitude mean = sum / static_cast<double>(st.amplitudes.size());
    for (Amplitude& a : st.amplitudes) a = 2.0 * mean - a;
    ++st.gpr_count;
}

inline double success_probability(const ReducedState& st) {
    double acc = 0.0;
    for (std::uint64_t i : st.marked) acc += std::norm(st.amplitudes[i]);
    return acc;
}

/// Amplitude-amplification closed form sin^2((2j+1) asin(sqrt(M/N))), the
/// independent yardstick for simulated success probabilities.
inline double closed_form_success(std::uint64_t n_total, std::uint64_t n_marked,
                                  std::uint64_t iterations) {
    if (n_total < 2) throw std::invalid_argument("closed form needs N >= 2");
    if (n_marked > n_total) throw std::invalid_argument("closed form needs M <= N");
    if (n_marked == 0) return 0.0;
    const double ratio = static_cast<double>(n_marked) / static_cast<double>(n_total);
    const double theta = std::asin(std::min(1.0, std::sqrt(ratio)));
    const double s = std::sin(static_cast<double>(2 * iterations + 1) * theta);
    return s * s;
}

}  // namespace qpr
