// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reproducible random primitives. The std::*_distribution adaptors are
// implementation-defined, so everything that must replay bit-identically
// across toolchains is hand-rolled on top of mt19937_64.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace circons::rng {

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound); bound must be > 0.
inline std::uint64_t below(Engine& eng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = eng();
    while (x >= limit) {
        x = eng();
    }
    return x % bound;
}

/// Standard normal deviate (Box-Muller, one value per call).
inline double normal(Engine& eng) {
    double u1 = uniform01(eng);
    while (u1 <= 0.0) {
        u1 = uniform01(eng);
    }
    const double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(below(eng, i));
        std::swap(values[i - 1], values[j]);
    }
}

/// k distinct indices drawn uniformly from [0, n), returned sorted.
inline std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t k, Engine& eng) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        pool[i] = i;
    }
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint32_t j = i + static_cast<std::uint32_t>(below(eng, n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace circons::rng
