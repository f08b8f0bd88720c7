#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "samplesort/input_distributions.hpp"
#include "samplesort/sorter.hpp"
#include "test_support.hpp"

using namespace samplesort;
using samplesort::testing::matches_reference;
using samplesort::testing::reference_sort;

namespace {

// Small M and k so recursion is exercised on modest inputs.
SortConfig small_config(unsigned workers = 1) {
    SortConfig cfg;
    cfg.buckets = 16;
    cfg.small_threshold = 1 << 10;
    cfg.network_threshold = 64;
    cfg.tile_size = 300;
    cfg.oversampling = 8;
    cfg.workers = workers;
    return cfg;
}

std::vector<std::size_t> begins(const std::vector<WorkItem>& items) {
    std::vector<std::size_t> out;
    for (const auto& w : items) out.push_back(w.begin);
    return out;
}

} // namespace

TEST_CASE("schedule_buckets orders by size, then begin") {
    const std::vector<WorkItem> items{{0, 3, 0, 0}, {3, 12, 0, 0}, {12, 21, 0, 0}, {21, 22, 0, 0}};
    CHECK(begins(schedule_buckets(items)) == std::vector<std::size_t>{3, 12, 0, 21});
    CHECK(schedule_buckets({}).empty());
    const std::vector<WorkItem> same{{8, 10, 0, 0}, {0, 2, 0, 0}, {4, 6, 0, 0}};
    CHECK(begins(schedule_buckets(same)) == std::vector<std::size_t>{0, 4, 8});
}

TEST_CASE("classify_bucket thresholds") {
    SortConfig cfg;
    const std::size_t m = cfg.small_threshold;
    const unsigned cap = recursion_depth_cap(1 << 24, cfg);
    BucketDescriptor<std::uint32_t> d;

    d = {0, 4 * m, 7u, 7u, true};
    CHECK(classify_bucket(d, cfg, 0, cap) == BucketAction::AlreadySorted);
    d = {0, m - 1, 1u, 2u, false};
    CHECK(classify_bucket(d, cfg, 0, cap) == BucketAction::SmallSort);
    d = {0, 4 * m, 1u, 2u, false};
    CHECK(classify_bucket(d, cfg, 0, cap) == BucketAction::Recurse);
    CHECK(classify_bucket(d, cfg, cap, cap) == BucketAction::SmallSort);
    d = {5, 6, std::nullopt, 2u, false};
    CHECK(classify_bucket(d, cfg, 0, cap) == BucketAction::AlreadySorted);
}

TEST_CASE("recursion depth cap") {
    SortConfig cfg;  // k = 128, M = 2^17
    CHECK(recursion_depth_cap(1, cfg) == 4);
    CHECK(recursion_depth_cap(std::size_t{1} << 17, cfg) == 4);
    CHECK(recursion_depth_cap((std::size_t{1} << 17) + 1, cfg) == 5);
    CHECK(recursion_depth_cap(std::size_t{1} << 24, cfg) == 5);
    CHECK(recursion_depth_cap((std::size_t{1} << 24) + 1, cfg) == 6);
}

TEST_CASE("sample_sort small examples") {
    std::vector<std::uint32_t> e;
    sort(e);
    CHECK(e.empty());
    std::vector<std::uint32_t> v{5, 3, 3, 1};
    sort(v);
    CHECK(v == std::vector<std::uint32_t>{1, 3, 3, 5});
}

TEST_CASE("sample_sort rejects NaN and bad configs") {
    std::vector<float> v{1.0f, std::numeric_limits<float>::quiet_NaN(), 0.0f};
    CHECK_THROWS_WITH_AS(sort(v), "unordered key", std::invalid_argument);

    std::vector<std::uint32_t> u{3, 2, 1};
    SortConfig bad;
    bad.buckets = 100;
    CHECK_THROWS_AS(sort_with_config(u, bad), std::invalid_argument);
    bad = SortConfig{};
    bad.small_threshold = 16;
    CHECK_THROWS_AS(sort_with_config(u, bad), std::invalid_argument);
    bad = SortConfig{};
    bad.tile_size = 0;
    CHECK_THROWS_AS(sort_with_config(u, bad), std::invalid_argument);
}

TEST_CASE("oversampling defaults by key width") {
    CHECK(SortConfig::defaults_for<std::uint32_t>().oversampling == 30);
    CHECK(SortConfig::defaults_for<float>().oversampling == 30);
    CHECK(SortConfig::defaults_for<KeyValue>().oversampling == 30);
    CHECK(SortConfig::defaults_for<std::uint64_t>().oversampling == 15);
}

TEST_CASE_TEMPLATE("recursive sample sort equals reference sort", R, std::uint32_t, std::uint64_t,
                   float, KeyValue) {
    std::mt19937_64 gen(99);
    for (std::size_t n : {std::size_t{1000}, std::size_t{1024}, std::size_t{5000}, std::size_t{200'000}}) {
        for (std::uint64_t range : {std::uint64_t{3}, std::uint64_t{1000}, std::uint64_t{1} << 32}) {
            std::vector<R> v(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto x = gen() % range;
                if constexpr (std::same_as<R, KeyValue>) {
                    v[i] = {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(i)};
                } else {
                    v[i] = static_cast<R>(x);
                }
            }
            const auto ref = reference_sort(v);
            sort_with_config(v, small_config(3));
            REQUIRE(matches_reference(v, ref));
        }
    }
}

TEST_CASE("all-equal input ends in one distribution level") {
    const auto cfg = small_config();
    std::vector<std::uint32_t> v(4 * cfg.small_threshold, 17);
    const auto stats = sort_with_config(v, cfg);
    CHECK(stats.levels == 1);
    CHECK(stats.constant_buckets == 1);
    CHECK(stats.small_sorts == 0);

    SortConfig def;
    def.workers = 1;
    std::vector<std::uint32_t> big(4 * def.small_threshold, 3);
    const auto s2 = sort_with_config(big, def);
    CHECK(s2.levels == 1);
    CHECK(s2.levels < recursion_depth_cap(big.size(), def));
}

TEST_CASE("few distinct keys terminate quickly") {
    auto cfg = small_config();
    std::vector<std::uint32_t> v(100'000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint32_t>(i % 3);
    const auto ref = reference_sort(v);
    const auto stats = sort_with_config(v, cfg);
    CHECK(v == ref);
    CHECK(stats.levels <= 2);
}

TEST_CASE("uniform pass count stays within log_k(n/M) + 1") {
    SortConfig cfg = small_config();
    std::mt19937 gen(21);
    for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 16, std::size_t{1} << 18}) {
        std::vector<std::uint32_t> v(n);
        for (auto& x : v) x = gen();
        const auto stats = sort_with_config(v, cfg);
        const double bound = std::ceil(std::log(double(n) / double(cfg.small_threshold)) /
                                       std::log(double(cfg.buckets))) + 1;
        CHECK(stats.levels <= bound);
        CHECK(std::is_sorted(v.begin(), v.end()));
    }
}

TEST_CASE("output is identical for 1, 2 and 8 workers") {
    std::mt19937 gen(31);
    std::vector<KeyValue> base(300'000);
    for (std::uint32_t i = 0; i < base.size(); ++i) base[i] = {static_cast<std::uint32_t>(gen() % 10'000), i};
    std::vector<KeyValue> first;
    for (unsigned w : {1u, 2u, 8u}) {
        auto v = base;
        sort_with_config(v, small_config(w));
        if (first.empty()) first = v;
        CHECK(v == first);
    }
}

TEST_CASE("sort_pairs permutes values with keys") {
    std::vector<std::uint32_t> keys{3, 1, 2, 1};
    std::vector<std::uint32_t> values{30, 10, 20, 11};
    sort_pairs(keys, values);
    CHECK(keys == std::vector<std::uint32_t>{1, 1, 2, 3});
    CHECK(values[2] == 20);
    CHECK(values[3] == 30);
    CHECK(((values[0] == 10 && values[1] == 11) || (values[0] == 11 && values[1] == 10)));
    std::vector<std::uint32_t> shorter{1};
    CHECK_THROWS_AS(sort_pairs(keys, shorter), std::invalid_argument);
}

TEST_CASE("sorted and reverse-sorted inputs") {
    auto cfg = small_config(2);
    std::vector<std::uint64_t> asc(100'000), desc(100'000);
    for (std::size_t i = 0; i < asc.size(); ++i) {
        asc[i] = i * 3;
        desc[i] = (asc.size() - 1 - i) * 3;
    }
    auto a = asc;
    sort_with_config(a, cfg);
    CHECK(a == asc);
    sort_with_config(desc, cfg);
    CHECK(desc == asc);
}
