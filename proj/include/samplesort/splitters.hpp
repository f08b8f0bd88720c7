#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "samplesort/record.hpp"
#include "samplesort/rng.hpp"

namespace samplesort {

/// Oversampled splitter candidates: a * k keys drawn with replacement.
template <class Key>
struct SampleDraw {
    std::vector<Key> values;
    std::uint64_t seed = 0;
    std::size_t oversampling = 1;

    std::size_t bucket_count() const noexcept { return values.size() / oversampling; }
};

/// k - 1 splitters, kept both as a sorted list and as an implicit complete
/// binary search tree (1-indexed: root at bt[1], children of bt[j] at bt[2j]
/// and bt[2j+1]; bt[0] is unused).
template <class Key>
class SplitterTree {
public:
    SplitterTree() = default;

    /// Builds the tree from k - 1 nondecreasing splitters; k must be a power of two >= 2.
    explicit SplitterTree(std::vector<Key> sorted_splitters)
        : sorted_(std::move(sorted_splitters)) {
        const std::size_t k = sorted_.size() + 1;
        if (k < 2 || !std::has_single_bit(k)) {
            throw std::invalid_argument("bucket count must be a power of two >= 2");
        }
        if (!std::is_sorted(sorted_.begin(), sorted_.end())) {
            throw std::invalid_argument("splitters must be nondecreasing");
        }
        k_ = k;
        depth_ = static_cast<unsigned>(std::countr_zero(k));
        bt_.assign(k, Key{});
        // node j on level l (2^l <= j < 2^(l+1)) is the in-order element
        // (2 * (j - 2^l) + 1) * k / 2^(l+1), counted 1-based
        for (std::size_t j = 1; j < k; ++j) {
            const unsigned level = static_cast<unsigned>(std::bit_width(j)) - 1;
            const std::size_t pos = j - (std::size_t{1} << level);
            const std::size_t rank = (2 * pos + 1) * (k >> (level + 1));
            bt_[j] = sorted_[rank - 1];
        }
    }

    std::size_t bucket_count() const noexcept { return k_; }
    unsigned depth() const noexcept { return depth_; }

    /// Tree array including the unused slot 0.
    std::span<const Key> tree() const noexcept { return bt_; }
    std::span<const Key> sorted() const noexcept { return sorted_; }

    /// Zero-based bucket index: the number of splitters strictly less than
    /// key. Descends log2(k) levels; ties go left.
    std::size_t bucket_of(Key key) const noexcept {
        const Key* bt = bt_.data();
        std::size_t j = 1;
        for (unsigned level = 0; level < depth_; ++level) {
            j = 2 * j + static_cast<std::size_t>(key > bt[j]);
        }
        return j - k_;
    }

    /// Classifies keys of `records` into zero-based bucket indices, walking
    /// several keys down the tree in lockstep.
    template <Record R>
    void classify(std::span<const R> records, std::uint32_t* out) const noexcept {
        constexpr std::size_t lanes = 8;
        const Key* bt = bt_.data();
        const std::size_t n = records.size();
        std::size_t i = 0;
        for (; i + lanes <= n; i += lanes) {
            Key keys[lanes];
            std::size_t j[lanes];
            for (std::size_t l = 0; l < lanes; ++l) {
                keys[l] = sort_key(records[i + l]);
                j[l] = 1;
            }
            for (unsigned level = 0; level < depth_; ++level) {
                for (std::size_t l = 0; l < lanes; ++l) {
                    j[l] = 2 * j[l] + static_cast<std::size_t>(keys[l] > bt[j[l]]);
                }
            }
            for (std::size_t l = 0; l < lanes; ++l) out[i + l] = static_cast<std::uint32_t>(j[l] - k_);
        }
        for (; i < n; ++i) out[i] = static_cast<std::uint32_t>(bucket_of(sort_key(records[i])));
    }

private:
    std::vector<Key> bt_;
    std::vector<Key> sorted_;
    std::size_t k_ = 0;
    unsigned depth_ = 0;
};

/// Draws a * k keys at LCG-chosen indices (with replacement). Pure function
/// of (data, a, k, seed).
template <Record R>
SampleDraw<key_type_t<R>> draw_sample(std::span<const R> data, std::size_t oversampling,
                                      std::size_t bucket_count, std::uint64_t seed) {
    if (data.empty()) throw std::invalid_argument("empty input");
    if (oversampling == 0) throw std::invalid_argument("oversampling factor must be positive");
    if (bucket_count < 2 || !std::has_single_bit(bucket_count)) {
        throw std::invalid_argument("bucket count must be a power of two >= 2");
    }
    if (oversampling > std::numeric_limits<std::size_t>::max() / bucket_count) {
        throw std::overflow_error("sample size a*k overflows");
    }
    SampleDraw<key_type_t<R>> draw;
    draw.seed = seed;
    draw.oversampling = oversampling;
    draw.values.resize(oversampling * bucket_count);
    Lcg rng(seed);
    for (auto& v : draw.values) v = sort_key(data[rng.uniform_below(data.size())]);
    return draw;
}

/// Sorts the sample and takes the elements at 1-based ranks a, 2a, ..., (k-1)a.
template <class Key>
SplitterTree<Key> build_splitter_tree(SampleDraw<Key> sample) {
    const std::size_t a = sample.oversampling;
    if (a == 0 || sample.values.size() % a != 0) {
        throw std::invalid_argument("sample length must be a multiple of the oversampling factor");
    }
    const std::size_t k = sample.values.size() / a;
    std::sort(sample.values.begin(), sample.values.end());
    std::vector<Key> splitters;
    splitters.reserve(k > 0 ? k - 1 : 0);
    for (std::size_t i = 1; i < k; ++i) splitters.push_back(sample.values[i * a - 1]);
    return SplitterTree<Key>(std::move(splitters));
}

/// One-based bucket index in [1, k].
template <class Key>
std::size_t traverse(const SplitterTree<Key>& tree, Key key) noexcept {
    return tree.bucket_of(key) + 1;
}

} // namespace samplesort
