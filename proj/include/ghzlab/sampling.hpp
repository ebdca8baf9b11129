// sampling.hpp -- seeded multinomial draws and the outcome-product estimator.
//
// Generator contract, frozen for reproducibility: std::mt19937_64 seeded
// directly with the given seed, one draw per shot consumed in shot order,
// each draw mapped to u in [0,1) as (x >> 11) * 2^-53, and u converted to an
// outcome by inverse CDF over the canonical pattern order. No library
// distribution adapters are involved, so identical seeds give identical
// counts on every standards-conforming platform.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ghzlab/errors.hpp"
#include "ghzlab/patterns.hpp"

namespace ghzlab {

struct SampleCounts {
    std::size_t particles = 0;
    std::vector<std::uint64_t> counts;  // canonical pattern order
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const SampleCounts&, const SampleCounts&) = default;
};

inline SampleCounts sample_outcomes(const JointDistribution& distribution,
                                    std::uint64_t shots, std::uint64_t seed) {
    if (std::abs(distribution.total() - 1.0) > 1e-9)
        throw domain_error("distribution is not normalized (total " +
                           std::to_string(distribution.total()) + ")");
    if (shots < 1) throw domain_error("shot count must be at least 1");

    std::vector<double> cdf(distribution.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        acc += distribution.at_index(i);
        cdf[i] = acc;
    }

    SampleCounts result;
    result.particles = distribution.particles();
    result.counts.assign(distribution.size(), 0);
    result.shots = shots;
    result.seed = seed;

    std::mt19937_64 rng(seed);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        ++result.counts[idx];
    }
    return result;
}

// Empirical frequencies count/shots, reusing the distribution container.
inline JointDistribution frequencies(const SampleCounts& counts) {
    std::vector<double> f(counts.counts.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = static_cast<double>(counts.counts[i]) / static_cast<double>(counts.shots);
    return JointDistribution(counts.particles, std::move(f));
}

struct ExpectationEstimate {
    double mean = 0.0;
    double standard_error = 0.0;  // sample stdev / sqrt(shots); 0 when shots < 2
    bool low_sample = false;      // flagged when shots < 2

    friend bool operator==(const ExpectationEstimate&, const ExpectationEstimate&) = default;
};

// Sample mean and standard error of product(signs) over the counted outcomes.
inline ExpectationEstimate estimate_expectation(const SampleCounts& counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts.counts) total += c;
    if (total == 0) throw domain_error("no samples to estimate from");

    double sum = 0.0;
    for (std::size_t i = 0; i < counts.counts.size(); ++i) {
        const int product = std::popcount(std::uint64_t{i}) % 2 ? -1 : +1;
        sum += static_cast<double>(counts.counts[i]) * product;
    }
    ExpectationEstimate est;
    est.mean = sum / static_cast<double>(total);
    if (total < 2) {
        est.low_sample = true;
        return est;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < counts.counts.size(); ++i) {
        const int product = std::popcount(std::uint64_t{i}) % 2 ? -1 : +1;
        const double d = product - est.mean;
        ss += static_cast<double>(counts.counts[i]) * d * d;
    }
    const double variance = ss / static_cast<double>(total - 1);
    est.standard_error = std::sqrt(variance / static_cast<double>(total));
    return est;
}

} // namespace ghzlab
