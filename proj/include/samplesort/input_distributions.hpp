#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace samplesort::dist {

enum class Kind { Uniform, Gaussian, BucketSorted, Staggered, DetDuplicates };

struct DistSpec {
    Kind kind = Kind::Uniform;
    std::size_t n = 0;
    std::size_t blocks = 240;  // p
    std::uint64_t seed = 0;
};

std::optional<Kind> parse_kind(std::string_view name);
std::string_view kind_name(Kind kind);

/// Uniform over [0, 2^32 - 1].
std::vector<std::uint32_t> gen_uniform(const DistSpec& spec);

/// Each value is floor((u1 + u2 + u3 + u4) / 4) for uniform 32-bit draws.
std::vector<std::uint32_t> gen_gaussian(const DistSpec& spec);

/// p blocks of p sub-blocks; sub-block j of every block is uniform in
/// [j * s, (j + 1) * s - 1] with s = floor(2^31 / p). Requires p^2 <= n;
/// trailing elements extend the last sub-block.
std::vector<std::uint32_t> gen_bucket_sorted(const DistSpec& spec);

/// Block i (1-based) uniform in [(2i - 1) s, 2i s - 1] for i <= p/2, and in
/// [(2(i - p/2) - 2) s, (2(i - p/2) - 1) s - 1] otherwise. Requires p <= n;
/// trailing elements belong to the last block.
std::vector<std::uint32_t> gen_staggered(const DistSpec& spec);

/// First p/2 blocks hold floor(log2 n), the next p/4 floor(log2 n) - 1, and
/// so on; the final leftover block takes the next value. n and p must be
/// powers of two with 2 <= p <= n.
std::vector<std::uint32_t> gen_det_duplicates(const DistSpec& spec);

std::vector<std::uint32_t> generate(const DistSpec& spec);

/// Mean of four draws, exposed for testing the Gaussian rule.
constexpr std::uint32_t mean_of_four(std::uint32_t a, std::uint32_t b, std::uint32_t c,
                                     std::uint32_t d) noexcept {
    return static_cast<std::uint32_t>(
        (std::uint64_t{a} + std::uint64_t{b} + std::uint64_t{c} + std::uint64_t{d}) / 4);
}

/// Inclusive value range of sub-block j for bucket-sorted input.
struct ValueRange {
    std::uint32_t lo;
    std::uint32_t hi;
};
ValueRange bucket_sorted_range(std::size_t blocks, std::size_t sub_block);
/// Inclusive value range of 1-based block i for staggered input.
ValueRange staggered_range(std::size_t blocks, std::size_t block);

/// Block count the harness uses when none is given: 240 where admissible,
/// else the largest admissible value (isqrt(n) for bucket-sorted, the largest
/// power of two <= 240 for deterministic duplicates, n for staggered).
std::size_t default_blocks(Kind kind, std::size_t n);

} // namespace samplesort::dist
