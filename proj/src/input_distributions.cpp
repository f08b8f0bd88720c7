#include "samplesort/input_distributions.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "samplesort/rng.hpp"

namespace samplesort::dist {

namespace {

// Uniform and Gaussian streams are cut into fixed chunks with derived seeds
// so any chunk can be produced independently.
constexpr std::size_t kStreamChunk = std::size_t{1} << 16;
constexpr std::uint64_t kTwo31 = std::uint64_t{1} << 31;

void require_n(const DistSpec& spec) {
    if (spec.n == 0) throw std::invalid_argument("n must be >= 1");
    if (spec.blocks < 2) throw std::invalid_argument("block count must be >= 2");
}

std::uint32_t stride(std::size_t blocks) { return static_cast<std::uint32_t>(kTwo31 / blocks); }

} // namespace

std::optional<Kind> parse_kind(std::string_view name) {
    if (name == "uniform") return Kind::Uniform;
    if (name == "gaussian") return Kind::Gaussian;
    if (name == "bucket") return Kind::BucketSorted;
    if (name == "staggered") return Kind::Staggered;
    if (name == "detdup") return Kind::DetDuplicates;
    return std::nullopt;
}

std::string_view kind_name(Kind kind) {
    switch (kind) {
    case Kind::Uniform: return "uniform";
    case Kind::Gaussian: return "gaussian";
    case Kind::BucketSorted: return "bucket";
    case Kind::Staggered: return "staggered";
    case Kind::DetDuplicates: return "detdup";
    }
    return "?";
}

std::vector<std::uint32_t> gen_uniform(const DistSpec& spec) {
    require_n(spec);
    std::vector<std::uint32_t> out(spec.n);
    for (std::size_t c = 0; c * kStreamChunk < spec.n; ++c) {
        Lcg rng(derive_seed(spec.seed, c));
        const std::size_t end = std::min(spec.n, (c + 1) * kStreamChunk);
        for (std::size_t i = c * kStreamChunk; i < end; ++i) out[i] = rng.next32();
    }
    return out;
}

std::vector<std::uint32_t> gen_gaussian(const DistSpec& spec) {
    require_n(spec);
    std::vector<std::uint32_t> out(spec.n);
    for (std::size_t c = 0; c * kStreamChunk < spec.n; ++c) {
        Lcg rng(derive_seed(spec.seed, c));
        const std::size_t end = std::min(spec.n, (c + 1) * kStreamChunk);
        for (std::size_t i = c * kStreamChunk; i < end; ++i) {
            const auto a = rng.next32();
            const auto b = rng.next32();
            const auto x = rng.next32();
            const auto d = rng.next32();
            out[i] = mean_of_four(a, b, x, d);
        }
    }
    return out;
}

ValueRange bucket_sorted_range(std::size_t blocks, std::size_t sub_block) {
    const std::uint64_t s = stride(blocks);
    return {static_cast<std::uint32_t>(sub_block * s),
            static_cast<std::uint32_t>((sub_block + 1) * s - 1)};
}

ValueRange staggered_range(std::size_t blocks, std::size_t block) {
    const std::uint64_t s = stride(blocks);
    const std::size_t half = blocks / 2;
    const std::uint64_t slot = block <= half ? 2 * block - 1 : 2 * (block - half) - 2;
    return {static_cast<std::uint32_t>(slot * s), static_cast<std::uint32_t>((slot + 1) * s - 1)};
}

std::vector<std::uint32_t> gen_bucket_sorted(const DistSpec& spec) {
    require_n(spec);
    const std::size_t p = spec.blocks;
    if (p > spec.n / p) throw std::invalid_argument("too few elements per sub-block");
    const std::size_t sub = spec.n / (p * p);
    std::vector<std::uint32_t> out(spec.n);
    for (std::size_t b = 0; b < p; ++b) {
        Lcg rng(derive_seed(spec.seed, b));
        for (std::size_t j = 0; j < p; ++j) {
            const std::size_t begin = (b * p + j) * sub;
            const bool last = b + 1 == p && j + 1 == p;
            const std::size_t end = last ? spec.n : begin + sub;
            const auto r = bucket_sorted_range(p, j);
            for (std::size_t i = begin; i < end; ++i) out[i] = rng.uniform_in(r.lo, r.hi);
        }
    }
    return out;
}

std::vector<std::uint32_t> gen_staggered(const DistSpec& spec) {
    require_n(spec);
    const std::size_t p = spec.blocks;
    if (p > spec.n) throw std::invalid_argument("more blocks than elements");
    const std::size_t size = spec.n / p;
    std::vector<std::uint32_t> out(spec.n);
    for (std::size_t b = 0; b < p; ++b) {
        Lcg rng(derive_seed(spec.seed, b));
        const auto r = staggered_range(p, b + 1);
        const std::size_t end = b + 1 == p ? spec.n : (b + 1) * size;
        for (std::size_t i = b * size; i < end; ++i) out[i] = rng.uniform_in(r.lo, r.hi);
    }
    return out;
}

std::vector<std::uint32_t> gen_det_duplicates(const DistSpec& spec) {
    require_n(spec);
    const std::size_t p = spec.blocks;
    if (!std::has_single_bit(spec.n) || !std::has_single_bit(p)) {
        throw std::invalid_argument("deterministic duplicates need power-of-two n and p");
    }
    if (p > spec.n) throw std::invalid_argument("more blocks than elements");
    const std::size_t size = spec.n / p;
    std::vector<std::uint32_t> out(spec.n);
    auto value = static_cast<std::uint32_t>(std::bit_width(spec.n) - 1);
    std::size_t block = 0;
    for (std::size_t remaining = p; remaining > 1; --value) {
        const std::size_t group = remaining / 2;
        std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(block * size), group * size, value);
        block += group;
        remaining -= group;
    }
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(block * size), out.end(), value);
    return out;
}

std::vector<std::uint32_t> generate(const DistSpec& spec) {
    switch (spec.kind) {
    case Kind::Uniform: return gen_uniform(spec);
    case Kind::Gaussian: return gen_gaussian(spec);
    case Kind::BucketSorted: return gen_bucket_sorted(spec);
    case Kind::Staggered: return gen_staggered(spec);
    case Kind::DetDuplicates: return gen_det_duplicates(spec);
    }
    throw std::invalid_argument("unknown distribution");
}

std::size_t default_blocks(Kind kind, std::size_t n) {
    constexpr std::size_t preferred = 240;
    switch (kind) {
    case Kind::BucketSorted: {
        std::size_t root = 1;
        while ((root + 1) * (root + 1) <= n) ++root;
        return std::max<std::size_t>(2, std::min(preferred, root));
    }
    case Kind::Staggered: return std::max<std::size_t>(2, std::min(preferred, n));
    case Kind::DetDuplicates:
        return std::max<std::size_t>(2, std::bit_floor(std::min(preferred, n)));
    default: return preferred;
    }
}

} // namespace samplesort::dist
