// rng.hpp — deterministic 64-bit generator and per-trial seed derivation.
//
// Everything downstream (generators, searches, experiment cells) draws from
// SplitMix64 so that results are reproducible bit-for-bit across platforms;
// no std::uniform_* distribution is used anywhere (their outputs are
// implementation-defined).
//
// Per-trial derivation: seed_i = mix64(master + (i + 1) * GOLDEN), i.e. the
// SplitMix64 finaliser applied to the master seed advanced by i+1 golden-ratio
// increments. Distinct trial indices map to distinct, decorrelated streams.
#pragma once

#include <cstdint>

namespace attachlab {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finaliser (Stafford mix13).
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + (index + 1) * kGolden);
}

class Rng {
  public:
    explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Unbiased draw from {0, ..., bound-1} (Lemire multiply-shift with rejection).
    std::uint32_t bounded(std::uint32_t bound) {
        std::uint64_t x = next_u64() & 0xFFFFFFFFull;
        std::uint64_t m = x * bound;
        std::uint32_t lo = static_cast<std::uint32_t>(m);
        if (lo < bound) {
            std::uint32_t threshold = (0u - bound) % bound;
            while (lo < threshold) {
                x = next_u64() & 0xFFFFFFFFull;
                m = x * bound;
                lo = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

} // namespace attachlab
