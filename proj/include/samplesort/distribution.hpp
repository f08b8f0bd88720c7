#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "samplesort/record.hpp"
#include "samplesort/splitters.hpp"
#include "samplesort/thread_pool.hpp"

namespace samplesort {

/// Raised when scatter cursors disagree with the histogram they were derived from.
class CorruptionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// k x p bucket counts, flattened bucket-major: entry (bucket j, tile i) lives
/// at j * p + i, so all tile counts of bucket 0 come first.
struct HistogramMatrix {
    std::size_t buckets = 0;
    std::size_t tiles = 0;
    std::vector<std::size_t> counts;

    HistogramMatrix() = default;
    HistogramMatrix(std::size_t k, std::size_t p) : buckets(k), tiles(p), counts(k * p, 0) {}

    std::size_t& at(std::size_t bucket, std::size_t tile) { return counts[bucket * tiles + tile]; }
    std::size_t at(std::size_t bucket, std::size_t tile) const { return counts[bucket * tiles + tile]; }
};

/// Exclusive prefix sum of a HistogramMatrix, same layout.
struct OffsetTable {
    std::size_t buckets = 0;
    std::size_t tiles = 0;
    std::vector<std::size_t> offsets;
    std::size_t total = 0;

    std::size_t at(std::size_t bucket, std::size_t tile) const { return offsets[bucket * tiles + tile]; }
    /// Flattened successor of (bucket, tile); `total` past the last entry.
    std::size_t next(std::size_t bucket, std::size_t tile) const {
        const std::size_t f = bucket * tiles + tile + 1;
        return f < offsets.size() ? offsets[f] : total;
    }
    /// Begin of bucket j's contiguous output region.
    std::size_t bucket_begin(std::size_t bucket) const {
        if (tiles == 0) return 0;
        return bucket < buckets ? offsets[bucket * tiles] : total;
    }
};

/// Output range [begin, end) of one bucket. lo/hi are the delimiting splitters;
/// the first bucket has no lower and the last no upper splitter.
template <class Key>
struct BucketDescriptor {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::optional<Key> lo_splitter;
    std::optional<Key> hi_splitter;
    bool is_constant = false;

    std::size_t size() const noexcept { return end - begin; }
};

namespace detail {
inline constexpr std::size_t classify_chunk = 256;
} // namespace detail

/// Per-bucket counts for one tile (zero-based bucket index).
template <Record R, class Key = key_type_t<R>>
std::vector<std::size_t> compute_tile_histogram(std::span<const R> tile,
                                                const SplitterTree<Key>& tree) {
    std::vector<std::size_t> counts(tree.bucket_count(), 0);
    std::uint32_t idx[detail::classify_chunk];
    for (std::size_t off = 0; off < tile.size(); off += detail::classify_chunk) {
        const auto chunk = tile.subspan(off, std::min(detail::classify_chunk, tile.size() - off));
        tree.classify(chunk, idx);
        for (std::size_t i = 0; i < chunk.size(); ++i) ++counts[idx[i]];
    }
    return counts;
}

/// Exclusive scan over the flattened histogram. Large matrices are scanned in
/// blocks on the pool (block sums, scan of sums, local rescan); the result is
/// identical for any worker count.
inline OffsetTable exclusive_scan_column_major(const HistogramMatrix& hist,
                                               ThreadPool* pool = nullptr) {
    OffsetTable table;
    table.buckets = hist.buckets;
    table.tiles = hist.tiles;
    const std::size_t size = hist.counts.size();
    table.offsets.resize(size);

    constexpr std::size_t min_block = std::size_t{1} << 16;
    const std::size_t workers = pool ? pool->size() : 1;
    if (workers == 1 || size < 2 * min_block) {
        std::size_t sum = 0;
        for (std::size_t f = 0; f < size; ++f) {
            table.offsets[f] = sum;
            sum += hist.counts[f];
        }
        table.total = sum;
        return table;
    }

    const std::size_t blocks = std::min(workers * 4, size / min_block);
    const std::size_t per_block = (size + blocks - 1) / blocks;
    std::vector<std::size_t> block_sums(blocks, 0);
    parallel_for(pool, blocks, [&](std::size_t b) {
        const std::size_t lo = b * per_block;
        const std::size_t hi = std::min(size, lo + per_block);
        std::size_t s = 0;
        for (std::size_t f = lo; f < hi; ++f) s += hist.counts[f];
        block_sums[b] = s;
    });
    std::size_t carry = 0;
    for (auto& s : block_sums) {
        const std::size_t v = s;
        s = carry;
        carry += v;
    }
    table.total = carry;
    parallel_for(pool, blocks, [&](std::size_t b) {
        const std::size_t lo = b * per_block;
        const std::size_t hi = std::min(size, lo + per_block);
        std::size_t s = block_sums[b];
        for (std::size_t f = lo; f < hi; ++f) {
            table.offsets[f] = s;
            s += hist.counts[f];
        }
    });
    return table;
}

/// Writes each record of `tile` to out[cursors[bucket]++]. `limits[b]` is the
/// first position past this tile's slice of bucket b; overrunning it throws
/// CorruptionError. Bucket indices are recomputed here, not loaded.
template <Record R, class Key = key_type_t<R>>
void scatter_tile(std::span<const R> tile, const SplitterTree<Key>& tree,
                  std::span<std::size_t> cursors, std::span<const std::size_t> limits,
                  std::span<R> out) {
    std::uint32_t idx[detail::classify_chunk];
    for (std::size_t off = 0; off < tile.size(); off += detail::classify_chunk) {
        const auto chunk = tile.subspan(off, std::min(detail::classify_chunk, tile.size() - off));
        tree.classify(chunk, idx);
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const std::size_t pos = cursors[idx[i]]++;
            if (pos >= limits[idx[i]] || pos >= out.size()) [[unlikely]] {
                throw CorruptionError("scatter cursor overran its bucket region");
            }
            out[pos] = chunk[i];
        }
    }
}

/// One k-way distribution of `in` into `out` (same length): per-tile
/// histograms, column-major exclusive scan, scatter. Tiles run in parallel on
/// `pool` when given. Output is a function of (in, tree, tile_size) only.
template <Record R, class Key = key_type_t<R>>
std::vector<BucketDescriptor<Key>> distribute_into(std::span<const R> in, std::span<R> out,
                                                   const SplitterTree<Key>& tree,
                                                   std::size_t tile_size,
                                                   ThreadPool* pool = nullptr) {
    if (tile_size == 0) throw std::invalid_argument("tile size must be positive");
    if (out.size() != in.size()) throw std::invalid_argument("output size mismatch");
    const std::size_t n = in.size();
    const std::size_t k = tree.bucket_count();
    const std::size_t p = (n + tile_size - 1) / tile_size;
    auto tile_of = [&](std::size_t i) {
        return in.subspan(i * tile_size, std::min(tile_size, n - i * tile_size));
    };

    HistogramMatrix hist(k, p);
    parallel_for(pool, p, [&](std::size_t i) {
        const auto counts = compute_tile_histogram(tile_of(i), tree);
        for (std::size_t j = 0; j < k; ++j) hist.at(j, i) = counts[j];
    });

    const OffsetTable offsets = exclusive_scan_column_major(hist, pool);

    parallel_for(pool, p, [&](std::size_t i) {
        std::vector<std::size_t> cursors(k);
        std::vector<std::size_t> limits(k);
        for (std::size_t j = 0; j < k; ++j) {
            cursors[j] = offsets.at(j, i);
            limits[j] = offsets.next(j, i);
        }
        scatter_tile(tile_of(i), tree, std::span<std::size_t>(cursors),
                     std::span<const std::size_t>(limits), out);
        for (std::size_t j = 0; j < k; ++j) {
            if (cursors[j] != limits[j]) {
                throw CorruptionError("scatter count disagrees with histogram");
            }
        }
    });

    const auto splitters = tree.sorted();
    std::vector<BucketDescriptor<Key>> buckets(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto& b = buckets[j];
        b.begin = offsets.bucket_begin(j);
        b.end = j + 1 < k ? offsets.bucket_begin(j + 1) : n;
        if (j > 0) b.lo_splitter = splitters[j - 1];
        if (j + 1 < k) b.hi_splitter = splitters[j];
        b.is_constant = b.lo_splitter && b.hi_splitter && *b.lo_splitter == *b.hi_splitter;
    }
    return buckets;
}

template <Record R, class Key = key_type_t<R>>
struct Distribution {
    std::vector<R> out;
    std::vector<BucketDescriptor<Key>> buckets;
};

template <Record R, class Key = key_type_t<R>>
Distribution<R> distribute(std::span<const R> segment, const SplitterTree<Key>& tree,
                           std::size_t tile_size, ThreadPool* pool = nullptr) {
    Distribution<R> result;
    result.out.resize(segment.size());
    result.buckets = distribute_into(segment, std::span<R>(result.out), tree, tile_size, pool);
    return result;
}

} // namespace samplesort
