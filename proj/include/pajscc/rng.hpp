/*
* Copyright (C) 2026 pajscc contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef PAJSCC_RNG_HPP
#define PAJSCC_RNG_HPP

#include <cstdint>
#include <random>

namespace pajscc {

/// SplitMix64 mixing step. Used only to derive independent sub-stream seeds
/// from a master seed; the streams themselves are mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic seed for a sub-stream identified by up to two indices
/// (e.g. path index, trial index). Identical inputs give identical seeds
/// on every platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(master ^ (a * 0xD1B54A32D192ED03ULL)) ^ b);
}

/// A seedable random stream. The uniform doubles are produced directly from
/// the engine's 64-bit output, so sequences are reproducible across standard
/// library implementations (std distributions make no such guarantee).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return u01() < p; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Modulo bias is irrelevant at the bounds used here (all << 2^64).
        return engine_() % bound;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

private:
    std::mt19937_64 engine_;
};

} // namespace pajscc

#endif // PAJSCC_RNG_HPP
