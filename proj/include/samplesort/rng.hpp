#pragma once

#include <cstdint>
#include <random>

namespace samplesort {

/// SplitMix64 finalizer. Used to turn (seed, stream...) tuples into
/// well-mixed LCG seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) noexcept {
    return mix64(seed ^ mix64(a));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(seed, a), b);
}

/// Linear congruential generator x' = 6364136223846793005 x + 1442695040888963407
/// (mod 2^64), Knuth's MMIX constants. The low state bits are weak, so callers
/// only consume the high bits: next32() returns bits 63..32 and uniform_below()
/// maps the full state through a 64x64->128 multiply-high.
class Lcg {
public:
    using engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                                   1442695040888963407ULL, 0ULL>;

    explicit Lcg(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next64() { return engine_(); }

    std::uint32_t next32() { return static_cast<std::uint32_t>(engine_() >> 32); }

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const auto wide = static_cast<unsigned __int128>(engine_()) * bound;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    /// Uniform integer in [lo, hi], hi - lo < 2^32.
    std::uint32_t uniform_in(std::uint32_t lo, std::uint32_t hi) {
        return lo + static_cast<std::uint32_t>(uniform_below(std::uint64_t{hi} - lo + 1));
    }

private:
    engine engine_;
};

} // namespace samplesort
