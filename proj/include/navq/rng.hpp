// Copyright 2026 The navq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Seeded random streams.
 *
 * A run owns one master seed. Named substreams ("noise", "env", "init", ...)
 * are derived from it by hashing, so turning one consumer on or off never
 * shifts the draws seen by another. Draws are produced from raw 64-bit
 * engine output, never through `std::*_distribution`, so a given seed gives
 * the same numbers with every standard library.
 */
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace navq {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

/// FNV-1a over the bytes of `name`.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for substream `name` of `master`.
constexpr std::uint64_t substream_seed(std::uint64_t master,
                                       std::string_view name) noexcept {
    return mix64(master ^ mix64(hash_name(name)));
}

/// Seed keyed by a tuple of integers (episode, step, evaluation, ...).
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = mix64(base);
    for (auto k : keys) {
        s = mix64(s ^ (k + 0x632be59bd9b4e019ULL));
    }
    return s;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(mix64(seed)) {}

    static Rng substream(std::uint64_t master, std::string_view name) {
        return Rng(substream_seed(master, name));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). `n` must be positive.
    std::size_t index(std::size_t n) {
        // Lemire-style rejection keeps the draw unbiased.
        const std::uint64_t bound = n;
        const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
        std::uint64_t r = engine_();
        while (r >= limit) {
            r = engine_();
        }
        return static_cast<std::size_t>(r % bound);
    }

    /// Fresh seed for a child stream; advances this stream by one draw.
    std::uint64_t split() { return mix64(engine_()); }

  private:
    std::mt19937_64 engine_;
};

} // namespace navq
