#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "dqkit/scalar.hpp"

namespace dq {

/// Deterministic plan for drawing (a,b) pairs and (a,b,c) triples. Equal
/// plans always yield byte-identical sequences.
struct SamplingPlan {
    std::uint64_t seed = 42;
    std::size_t count = 64;
    double min_gap = 1e-3; // smallest allowed b-a and c-b
    Mode mode = Mode::Float;
    bool include_endpoints = false;
    std::vector<Scalar> exact_pool; // exact mode draws from this pool only
};

namespace detail {

// SplitMix64; per-index substreams keep generation a pure function of
// (seed, index) so consumers may split work by index ranges.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1).
    double next_unit_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)) ^ salt);
    g.next();
    return g;
}

inline void validate_fields(const SamplingPlan& plan) {
    if (!(plan.min_gap >= 0.0))
        throw DomainError("min_gap must be nonnegative");
}

// Sorted distinct pool; exact mode only. Values must be >= 0; values above 1
// are tolerated so user pools may carry surds slightly past the endpoint.
inline std::vector<Scalar> prepare_pool(const SamplingPlan& plan, std::size_t need) {
    std::vector<Scalar> pool;
    for (const auto& v : plan.exact_pool) {
        if (!v.is_exact())
            throw ModeError("exact_pool entries must be exact-mode scalars");
        if (cmp(v, Scalar::exact(0)) < 0)
            throw DomainError("exact_pool values must be nonnegative");
        pool.push_back(v);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.size() < need)
        throw InsufficientPool("exact mode needs a pool of at least " +
                               std::to_string(need) + " distinct values");
    return pool;
}

// Midpoint interval for the decile band d under gap g; empty -> infeasible.
inline std::pair<double, double> band_midpoint_range(int band, double g) {
    const double lo = std::max(band / 10.0, g / 2.0);
    const double hi = std::min((band + 1) / 10.0, 1.0 - g / 2.0);
    return {lo, hi};
}

} // namespace detail

/// `count` pairs 0 <= a < b <= 1 with b-a >= min_gap, deterministic in the
/// seed. Float mode stratifies pair midpoints over decile bands (index k is
/// pinned to band k mod 10) so no tenth of [0,1] goes unsampled; exact mode
/// enumerates ordered pool pairs in lexicographic order, cycling if count
/// exceeds the number of admissible pairs.
inline std::vector<std::pair<Scalar, Scalar>> gen_pairs(const SamplingPlan& plan) {
    detail::validate_fields(plan);
    std::vector<std::pair<Scalar, Scalar>> out;
    if (plan.count == 0) return out;
    if (plan.min_gap > 1.0) throw InfeasibleGap("min_gap exceeds the unit interval");
    out.reserve(plan.count);

    if (plan.mode == Mode::Exact) {
        const auto pool = detail::prepare_pool(plan, 2);
        std::vector<std::pair<Scalar, Scalar>> valid;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j)
                if ((pool[j] - pool[i]).to_double() >= plan.min_gap)
                    valid.emplace_back(pool[i], pool[j]);
        if (valid.empty())
            throw InfeasibleGap("no pool pair satisfies the requested min_gap");
        for (std::size_t k = 0; k < plan.count; ++k)
            out.push_back(valid[k % valid.size()]);
        return out;
    }

    const double g = plan.min_gap;
    std::size_t k = 0;
    if (plan.include_endpoints) {
        out.emplace_back(Scalar::real(0.0), Scalar::real(1.0));
        ++k;
    }
    for (std::size_t idx = 0; k < plan.count; ++k, ++idx) {
        const int band = static_cast<int>(idx % 10);
        const auto [lo, hi] = detail::band_midpoint_range(band, g);
        if (!(lo < hi))
            throw InfeasibleGap("min_gap " + std::to_string(g) +
                                " leaves no midpoint in decile band " + std::to_string(band));
        auto rng = detail::substream(plan.seed, idx, /*salt=*/0x70616972ULL);
        const double m = lo + rng.next_unit_open() * (hi - lo);
        const double wmax = std::min(m, 1.0 - m);
        const double w = g / 2.0 + rng.next_unit_open() * (wmax - g / 2.0);
        out.emplace_back(Scalar::real(m - w), Scalar::real(m + w));
    }
    return out;
}

/// `count` triples 0 <= a < b < c <= 1 with pairwise gaps >= min_gap. Float
/// mode stratifies the middle element over decile bands.
inline std::vector<std::array<Scalar, 3>> gen_triples(const SamplingPlan& plan) {
    detail::validate_fields(plan);
    std::vector<std::array<Scalar, 3>> out;
    if (plan.count == 0) return out;
    if (plan.min_gap > 1.0) throw InfeasibleGap("min_gap exceeds the unit interval");
    out.reserve(plan.count);

    if (plan.mode == Mode::Exact) {
        const auto pool = detail::prepare_pool(plan, 3);
        std::vector<std::array<Scalar, 3>> valid;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j)
                for (std::size_t l = j + 1; l < pool.size(); ++l)
                    if ((pool[j] - pool[i]).to_double() >= plan.min_gap &&
                        (pool[l] - pool[j]).to_double() >= plan.min_gap)
                        valid.push_back({pool[i], pool[j], pool[l]});
        if (valid.empty())
            throw InfeasibleGap("no pool triple satisfies the requested min_gap");
        for (std::size_t k = 0; k < plan.count; ++k)
            out.push_back(valid[k % valid.size()]);
        return out;
    }

    const double g = plan.min_gap;
    if (2.0 * g > 1.0)
        throw InfeasibleGap("min_gap too large for a triple in [0,1]");
    std::size_t k = 0;
    if (plan.include_endpoints) {
        auto rng = detail::substream(plan.seed, 0, /*salt=*/0x656e6470ULL);
        const double m = g + rng.next_unit_open() * (1.0 - 2.0 * g);
        out.push_back({Scalar::real(0.0), Scalar::real(m), Scalar::real(1.0)});
        ++k;
    }
    for (std::size_t idx = 0; k < plan.count; ++k, ++idx) {
        const int band = static_cast<int>(idx % 10);
        const double lo = std::max(band / 10.0, g);
        const double hi = std::min((band + 1) / 10.0, 1.0 - g);
        if (!(lo < hi))
            throw InfeasibleGap("min_gap " + std::to_string(g) +
                                " leaves no middle element in decile band " +
                                std::to_string(band));
        auto rng = detail::substream(plan.seed, idx, /*salt=*/0x74726970ULL);
        const double b = lo + rng.next_unit_open() * (hi - lo);
        const double a = rng.next_unit_open() * (b - g);
        const double c = b + g + rng.next_unit_open() * (1.0 - b - g);
        out.push_back({Scalar::real(a), Scalar::real(b), Scalar::real(c)});
    }
    return out;
}

} // namespace dq
