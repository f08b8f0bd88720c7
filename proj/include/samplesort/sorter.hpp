#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <span>
#include <stdexcept>
#include <vector>

#include "samplesort/distribution.hpp"
#include "samplesort/record.hpp"
#include "samplesort/rng.hpp"
#include "samplesort/small_sort.hpp"
#include "samplesort/splitters.hpp"
#include "samplesort/thread_pool.hpp"

namespace samplesort {

struct SortConfig {
    std::size_t buckets = 128;                      // k
    std::size_t small_threshold = std::size_t{1} << 17;  // M
    std::size_t oversampling = 30;                  // a
    std::size_t tile_size = 2048;
    std::size_t network_threshold = 1024;
    std::uint64_t seed = 0x5eed5eed5eedULL;
    unsigned workers = 0;  // 0 = hardware concurrency

    /// Defaults with the oversampling factor chosen by key width
    /// (30 up to 32-bit keys, 15 for 64-bit keys).
    template <Record R>
    static SortConfig defaults_for() {
        SortConfig cfg;
        cfg.oversampling = sizeof(key_type_t<R>) > 4 ? 15 : 30;
        return cfg;
    }

    SmallSortConfig small() const { return {network_threshold, 2}; }

    void validate() const {
        if (buckets < 2 || !std::has_single_bit(buckets)) {
            throw std::invalid_argument("k must be a power of two >= 2");
        }
        if (buckets > (std::size_t{1} << 24)) throw std::invalid_argument("k too large");
        if (network_threshold < 2) throw std::invalid_argument("network threshold must be >= 2");
        if (small_threshold < network_threshold) {
            throw std::invalid_argument("M must be >= network threshold");
        }
        if (oversampling < 1) throw std::invalid_argument("oversampling factor must be >= 1");
        if (tile_size < 1) throw std::invalid_argument("tile size must be >= 1");
    }
};

/// A pending range. parity 0 = caller's buffer, 1 = auxiliary buffer.
struct WorkItem {
    std::size_t begin = 0;
    std::size_t end = 0;
    unsigned parity = 0;
    unsigned depth = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const WorkItem&, const WorkItem&) = default;
};

enum class BucketAction { Recurse, SmallSort, AlreadySorted };

/// Counters from one sample_sort call.
struct SortStats {
    unsigned levels = 0;                  // distribution levels executed
    std::size_t distribution_passes = 0;  // distribute calls over all levels
    std::size_t first_level_max_bucket = 0;
    std::size_t small_sorts = 0;
    std::size_t constant_buckets = 0;
};

/// Largest first; equal sizes by ascending begin.
inline std::vector<WorkItem> schedule_buckets(std::vector<WorkItem> items) {
    std::stable_sort(items.begin(), items.end(), [](const WorkItem& x, const WorkItem& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        return x.begin < y.begin;
    });
    return items;
}

/// Smallest L with M * k^L >= n, plus 4.
inline unsigned recursion_depth_cap(std::size_t n, const SortConfig& cfg) {
    unsigned levels = 0;
    long double reach = static_cast<long double>(cfg.small_threshold);
    while (reach < static_cast<long double>(n)) {
        reach *= static_cast<long double>(cfg.buckets);
        ++levels;
    }
    return levels + 4;
}

template <class Key>
BucketAction classify_bucket(const BucketDescriptor<Key>& desc, const SortConfig& cfg,
                             unsigned depth, unsigned depth_cap) {
    if (desc.is_constant || desc.size() <= 1) return BucketAction::AlreadySorted;
    if (desc.size() < cfg.small_threshold || depth >= depth_cap) return BucketAction::SmallSort;
    return BucketAction::Recurse;
}

namespace detail {

template <Record R>
bool all_keys_equal(std::span<const R> range) {
    if (range.empty()) return true;
    const auto first = sort_key(range.front());
    return std::all_of(range.begin(), range.end(),
                       [&](const R& r) { return sort_key(r) == first; });
}

template <Record R>
class SampleSorter {
public:
    using Key = key_type_t<R>;

    SampleSorter(std::span<R> data, const SortConfig& cfg, ThreadPool* pool)
        : data_(data), cfg_(cfg), pool_(pool), cap_(recursion_depth_cap(data.size(), cfg)) {}

    SortStats run() {
        const std::size_t n = data_.size();
        try {
            aux_ = std::make_unique_for_overwrite<R[]>(n);
        } catch (const std::bad_alloc&) {
            throw std::runtime_error("auxiliary buffer allocation failed");
        }

        std::vector<WorkItem> pending{{0, n, 0, 0}};
        std::vector<WorkItem> leaves;
        std::vector<BucketAction> leaf_actions;

        while (!pending.empty()) {
            pending = schedule_buckets(std::move(pending));
            std::vector<std::vector<Child>> children(pending.size());

            // Ranges holding a large share of the input get the whole pool for
            // their distribution pass; the rest run as independent tasks.
            const std::size_t workers = pool_ ? pool_->size() : 1;
            std::vector<std::size_t> solo;
            for (std::size_t i = 0; i < pending.size(); ++i) {
                if (workers > 1 && pending[i].size() * workers >= n) {
                    children[i] = distribute_item(pending[i], pool_);
                } else {
                    solo.push_back(i);
                }
            }
            parallel_for(pool_, solo.size(), [&](std::size_t s) {
                children[solo[s]] = distribute_item(pending[solo[s]], nullptr);
            });

            if (stats_.levels == 0) {
                for (const auto& c : children.front()) {
                    stats_.first_level_max_bucket =
                        std::max(stats_.first_level_max_bucket, c.desc.size());
                }
            }
            ++stats_.levels;
            stats_.distribution_passes += pending.size();

            std::vector<WorkItem> next;
            for (std::size_t i = 0; i < pending.size(); ++i) {
                for (const auto& c : children[i]) {
                    const auto action = classify_bucket(c.desc, cfg_, c.item.depth, cap_);
                    if (action == BucketAction::Recurse) {
                        next.push_back(c.item);
                    } else if (c.item.size() > 0) {
                        leaves.push_back(c.item);
                        leaf_actions.push_back(action);
                    }
                }
            }
            pending = std::move(next);
        }

        finish(leaves, leaf_actions);
        return stats_;
    }

    /// Sorts a range shorter than M without touching any auxiliary buffer.
    static void sort_small(std::span<R> data, const SortConfig& cfg) {
        small_sort(data, cfg.small());
    }

private:
    struct Child {
        WorkItem item;
        BucketDescriptor<Key> desc;
    };

    std::span<R> buffer(unsigned parity) const {
        return parity == 0 ? data_ : std::span<R>(aux_.get(), data_.size());
    }

    std::vector<Child> distribute_item(const WorkItem& item, ThreadPool* pool) const {
        const auto src = buffer(item.parity).subspan(item.begin, item.size());
        const auto dst = buffer(1 - item.parity).subspan(item.begin, item.size());
        const std::uint64_t seed = derive_seed(cfg_.seed, item.begin, item.depth);
        auto tree = build_splitter_tree(
            draw_sample(std::span<const R>(src), cfg_.oversampling, cfg_.buckets, seed));
        auto descs = distribute_into(std::span<const R>(src), dst, tree, cfg_.tile_size, pool);

        std::vector<Child> out;
        out.reserve(descs.size());
        for (auto& d : descs) {
            // no progress: a single bucket received the whole range
            if (d.size() == item.size() && !d.is_constant &&
                all_keys_equal(std::span<const R>(dst.subspan(d.begin, d.size())))) {
                d.is_constant = true;
            }
            WorkItem child{item.begin + d.begin, item.begin + d.end, 1 - item.parity,
                           item.depth + 1};
            out.push_back({child, d});
        }
        return out;
    }

    void finish(const std::vector<WorkItem>& leaves, const std::vector<BucketAction>& actions) {
        std::vector<std::size_t> order(leaves.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (leaves[x].size() != leaves[y].size()) return leaves[x].size() > leaves[y].size();
            return leaves[x].begin < leaves[y].begin;
        });
        for (auto a : actions) {
            if (a == BucketAction::SmallSort) ++stats_.small_sorts;
            else ++stats_.constant_buckets;
        }
        const SmallSortConfig small = cfg_.small();
        parallel_for(pool_, order.size(), [&](std::size_t s) {
            const WorkItem& w = leaves[order[s]];
            auto target = data_.subspan(w.begin, w.size());
            if (w.parity == 1) {
                const auto src = buffer(1).subspan(w.begin, w.size());
                std::copy(src.begin(), src.end(), target.begin());
            }
            if (actions[order[s]] == BucketAction::SmallSort) small_sort(target, small);
        });
    }

    std::span<R> data_;
    SortConfig cfg_;
    ThreadPool* pool_;
    unsigned cap_;
    std::unique_ptr<R[]> aux_;
    SortStats stats_;
};

} // namespace detail

/// Sorts `data` in place by key. Float keys must be NaN-free. Output is a
/// deterministic function of (data, cfg) for any cfg.workers.
template <Record R>
SortStats sample_sort(std::span<R> data, const SortConfig& cfg) {
    cfg.validate();
    require_total_order(std::span<const R>(data));
    if (data.size() < 2) return {};
    if (data.size() < cfg.small_threshold) {
        detail::SampleSorter<R>::sort_small(data, cfg);
        return {.small_sorts = 1};
    }
    const unsigned workers = ThreadPool::resolve_workers(cfg.workers);
    if (workers == 1) return detail::SampleSorter<R>(data, cfg, nullptr).run();
    ThreadPool pool(workers);
    return detail::SampleSorter<R>(data, cfg, &pool).run();
}

template <Record R>
SortStats sort_with_config(std::vector<R>& data, const SortConfig& cfg) {
    return sample_sort(std::span<R>(data), cfg);
}

template <Record R>
void sort(std::span<R> keys) {
    sample_sort(keys, SortConfig::defaults_for<R>());
}

template <Record R>
void sort(std::vector<R>& keys) {
    sort(std::span<R>(keys));
}

/// Sorts keys and permutes values alongside. Both spans must have equal length.
inline void sort_pairs(std::span<std::uint32_t> keys, std::span<std::uint32_t> values,
                       const SortConfig& cfg = SortConfig::defaults_for<KeyValue>()) {
    if (keys.size() != values.size()) throw std::invalid_argument("keys/values length mismatch");
    std::vector<KeyValue> records(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) records[i] = {keys[i], values[i]};
    sample_sort(std::span<KeyValue>(records), cfg);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        keys[i] = records[i].key;
        values[i] = records[i].value;
    }
}

} // namespace samplesort
