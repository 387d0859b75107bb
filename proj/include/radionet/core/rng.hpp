// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// SplitMix64 generator. Every derived sample (uniform, normal, index) is
// computed with integer arithmetic and correctly rounded float operations
// only, so a given seed yields the same stream on every IEEE-754 platform.
#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace radionet {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent seed for sub-stream `stream` of `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64_mix(seed ^ splitmix64_mix(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit constexpr Rng(std::uint64_t seed = 0) noexcept : seed_(seed), state_(seed) {}

    constexpr std::uint64_t seed() const noexcept { return seed_; }

    constexpr std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64_mix(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, 1) with 24 random bits; exact in float.
    constexpr float uniform_f() noexcept {
        return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f;
    }

    constexpr float uniform_f(float lo, float hi) noexcept { return lo + (hi - lo) * uniform_f(); }

    /// Approximate standard normal: Irwin-Hall sum of 12 uniforms minus 6.
    constexpr float normal() noexcept {
        float s = 0.0f;
        for (int i = 0; i < 12; ++i) s += uniform_f();
        return s - 6.0f;
    }

    /// Unbiased integer in [0, n); n must be positive.
    constexpr std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

    template <typename T>
    constexpr void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace radionet
