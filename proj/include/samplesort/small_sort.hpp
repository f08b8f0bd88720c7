#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "samplesort/record.hpp"

namespace samplesort {

struct SmallSortConfig {
    /// Partitions of at most this many records go to the sorting network.
    std::size_t network_threshold = 1024;
    /// Quicksort depth cap is max_depth_factor * log2(n).
    unsigned max_depth_factor = 2;

    void validate() const {
        if (network_threshold < 2) throw std::invalid_argument("network threshold must be >= 2");
        if (max_depth_factor == 0) throw std::invalid_argument("depth factor must be positive");
    }
};

namespace detail {

/// Runs of one network pass (merge stage p, stride k) over n inputs:
/// run(first, len) stands for the comparators (x, x + k), x in [first, first + len).
/// Within each 2p-block, stride p compares the two halves; smaller strides
/// compare contiguous groups of k pairs that stay inside the block.
template <class F>
inline void for_each_pass_run(std::size_t n, std::size_t p, std::size_t k, F&& run) {
    const std::size_t first = k == p ? 0 : k;
    const std::size_t span = k == p ? p : 2 * p - 2 * k;
    for (std::size_t base = 0; base + first + k < n; base += 2 * p) {
        const std::size_t end = base + first + span;
        std::size_t g = base + first;
        for (; g < end && g + 2 * k <= n; g += 2 * k) run(g, k);
        if (g < end && g + k < n) {
            run(g, n - k - g);
            return;
        }
    }
}

/// Walks Batcher's odd-even merge network for `n` inputs pass by pass:
/// pass(p, k) for merge stage p and stride k, in network order.
template <class F>
void for_each_network_pass(std::size_t n, F&& pass) {
    if (n < 2) return;
    const std::size_t padded = std::bit_ceil(n);
    for (std::size_t p = 1; p < padded; p <<= 1) {
        for (std::size_t k = p; k >= 1; k >>= 1) pass(p, k);
    }
}

template <std::size_t Stride, Record R>
inline void network_pass_fixed(R* a, std::size_t n, std::size_t p) {
    for_each_pass_run(n, p, Stride, [a](std::size_t first, std::size_t len) {
        R* lo = a + first;
        if (len == Stride) {
            for (std::size_t t = 0; t < Stride; ++t) compare_exchange(lo[t], lo[t + Stride]);
        } else {
            for (std::size_t t = 0; t < len; ++t) compare_exchange(lo[t], lo[t + Stride]);
        }
    });
}

} // namespace detail

/// Enumerates Batcher's odd-even merge sorting network for `n` inputs, padded
/// conceptually to the next power of two. Comparators whose upper index falls
/// into the padding are dropped (padding acts as +infinity). Calls
/// comparator(lo, hi) with lo < hi, in network order.
template <class F>
void odd_even_merge_network(std::size_t n, F&& comparator) {
    detail::for_each_network_pass(n, [&](std::size_t p, std::size_t k) {
        detail::for_each_pass_run(n, p, k, [&](std::size_t first, std::size_t len) {
            for (std::size_t x = first; x < first + len; ++x) comparator(x, x + k);
        });
    });
}

/// In-place, data-oblivious sort by key.
template <Record R>
void odd_even_merge_sort(std::span<R> chunk) {
    R* a = chunk.data();
    const std::size_t n = chunk.size();
    detail::for_each_network_pass(n, [a, n](std::size_t p, std::size_t k) {
        switch (k) {
        case 1: return detail::network_pass_fixed<1>(a, n, p);
        case 2: return detail::network_pass_fixed<2>(a, n, p);
        case 4: return detail::network_pass_fixed<4>(a, n, p);
        case 8: return detail::network_pass_fixed<8>(a, n, p);
        default: break;
        }
        detail::for_each_pass_run(n, p, k, [a, k](std::size_t first, std::size_t len) {
            R* lo = a + first;
            R* hi = lo + k;
            for (std::size_t t = 0; t < len; ++t) compare_exchange(lo[t], hi[t]);
        });
    });
}

namespace detail {

template <Record R>
void heap_sort(std::span<R> range) {
    std::make_heap(range.begin(), range.end(), KeyLess<R>{});
    std::sort_heap(range.begin(), range.end(), KeyLess<R>{});
}

/// Moves the median of the keys at the quartiles and the middle to a[lo] and
/// returns its key.
template <Record R>
key_type_t<R> median3_to_front(std::span<R> a, std::size_t lo, std::size_t hi) {
    const std::size_t q = (hi - lo) / 4;
    const std::size_t x = lo + q, y = lo + 2 * q, z = lo + 3 * q;
    compare_exchange(a[x], a[y]);
    compare_exchange(a[y], a[z]);
    compare_exchange(a[x], a[y]);
    std::swap(a[lo], a[y]);
    return sort_key(a[lo]);
}

/// Branch-free Lomuto partition of (lo, hi) with a[lo] as the pivot. Records
/// satisfying `left(key)` end up in [lo + 1, s); returns s.
template <Record R, class Pred>
std::size_t partition_from(std::span<R> a, std::size_t lo, std::size_t hi, Pred left) {
    R* d = a.data();
    std::size_t b = lo + 1;
    for (std::size_t r = lo + 1; r < hi; ++r) {
        const R x = d[r];
        const bool go_left = left(sort_key(x));
        d[r] = d[b];
        d[b] = x;
        b += go_left;
    }
    return b;
}

} // namespace detail

/// Quicksort with an explicit stack down to cfg.network_threshold, sorting the
/// remaining chunks with odd_even_merge_sort. Partitions that exceed the depth
/// cap are heap-sorted.
template <Record R>
void quicksort_bucket(std::span<R> bucket, const SmallSortConfig& cfg = {}) {
    struct Frame {
        std::size_t lo, hi;
        unsigned depth;
    };
    const std::size_t n = bucket.size();
    if (n < 2) return;
    const unsigned cap = cfg.max_depth_factor * static_cast<unsigned>(std::bit_width(n));

    std::vector<Frame> stack;
    stack.push_back({0, n, 0});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        for (;;) {
            const std::size_t len = f.hi - f.lo;
            if (len <= cfg.network_threshold) {
                if (len > 1) odd_even_merge_sort(bucket.subspan(f.lo, len));
                break;
            }
            if (f.depth >= cap) {
                detail::heap_sort(bucket.subspan(f.lo, len));
                break;
            }
            const auto pivot = detail::median3_to_front(bucket, f.lo, f.hi);
            // Everything before f.lo is <= every key in the frame. If that
            // bound equals the pivot, the keys equal to it are final.
            if (f.lo > 0 && !(sort_key(bucket[f.lo - 1]) < pivot)) {
                const auto not_above = [&](const auto& key) { return !(pivot < key); };
                f.lo = detail::partition_from(bucket, f.lo, f.hi, not_above);
                ++f.depth;
                continue;
            }
            const auto below = [&](const auto& key) { return key < pivot; };
            const std::size_t s = detail::partition_from(bucket, f.lo, f.hi, below);
            std::swap(bucket[f.lo], bucket[s - 1]);
            Frame left{f.lo, s - 1, f.depth + 1};
            Frame right{s, f.hi, f.depth + 1};
            // continue with the smaller side, defer the larger
            if (left.hi - left.lo < right.hi - right.lo) std::swap(left, right);
            stack.push_back(left);
            f = right;
        }
    }
}

/// Dispatches to the network for short inputs, quicksort otherwise.
template <Record R>
void small_sort(std::span<R> bucket, const SmallSortConfig& cfg = {}) {
    if (bucket.size() < 2) return;
    if (bucket.size() <= cfg.network_threshold) {
        odd_even_merge_sort(bucket);
    } else {
        quicksort_bucket(bucket, cfg);
    }
}

} // namespace samplesort
