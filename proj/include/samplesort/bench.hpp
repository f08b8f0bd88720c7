#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "samplesort/input_distributions.hpp"
#include "samplesort/record.hpp"
#include "samplesort/rng.hpp"
#include "samplesort/sorter.hpp"

namespace samplesort::bench {

enum class KeyType { U32, U64, F32, Pair };
enum class Algo { SampleSort, ReferenceSort };
enum class Fault { None, Swap, Corrupt };

std::optional<KeyType> parse_keytype(std::string_view name);
std::string_view keytype_name(KeyType t);
std::optional<Algo> parse_algo(std::string_view name);
std::string_view algo_name(Algo a);
std::optional<Fault> parse_fault(std::string_view name);

struct BenchRun {
    std::string algo;
    std::string dist;
    std::string keytype;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    double time_s = 0.0;
    double rate_meps = 0.0;  // million elements per second
    bool validated = false;
};

/// n / (time_s * 1e6).
double sorting_rate(std::uint64_t n, double time_s);

inline constexpr std::string_view kCsvHeader = "algo,dist,keytype,n,seed,time_s,rate_meps,validated";

/// Header plus one row per run, in input order. Numbers use the shortest
/// round-trip decimal form, independent of locale.
std::string emit_csv(std::span<const BenchRun> runs);
void emit_csv(std::span<const BenchRun> runs, std::ostream& os);
/// Inverse of emit_csv. Throws std::invalid_argument on malformed input.
std::vector<BenchRun> parse_csv(std::string_view text);

struct ValidationReport {
    enum class Failure { None, Order, Multiset };
    Failure failure = Failure::None;
    std::size_t index = 0;  // first offending position (n if unknown)

    bool ok() const noexcept { return failure == Failure::None; }
    std::string describe() const;
};

/// Above this size multiset equality is checked with a commutative hash
/// instead of a sorted copy.
inline constexpr std::size_t kSortedCopyLimit = std::size_t{1} << 22;

namespace detail {

template <Record R>
std::uint64_t record_bits(const R& r) noexcept {
    if constexpr (std::same_as<R, KeyValue>) {
        return (std::uint64_t{r.key} << 32) | r.value;
    } else if constexpr (std::same_as<R, float>) {
        return std::bit_cast<std::uint32_t>(r);
    } else {
        return static_cast<std::uint64_t>(r);
    }
}

struct MultisetHash {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::uint64_t count = 0;
    friend bool operator==(const MultisetHash&, const MultisetHash&) = default;
};

template <Record R>
MultisetHash multiset_hash(std::span<const R> data) {
    MultisetHash h;
    for (const R& r : data) {
        const std::uint64_t x = mix64(record_bits(r));
        h.sum += x;
        h.sum_sq += mix64(x ^ 0x2545f4914f6cdd1dULL);
        ++h.count;
    }
    return h;
}

} // namespace detail

/// Checks that `output` is nondecreasing by key and a permutation of `input`.
template <Record R>
ValidationReport validate(std::span<const R> input, std::span<const R> output) {
    using F = ValidationReport::Failure;
    for (std::size_t i = 1; i < output.size(); ++i) {
        if (sort_key(output[i]) < sort_key(output[i - 1])) return {F::Order, i};
    }
    if (input.size() != output.size()) return {F::Multiset, std::min(input.size(), output.size())};
    if (input.size() <= kSortedCopyLimit) {
        std::vector<std::uint64_t> a(input.size());
        std::vector<std::uint64_t> b(output.size());
        std::transform(input.begin(), input.end(), a.begin(), detail::record_bits<R>);
        std::transform(output.begin(), output.end(), b.begin(), detail::record_bits<R>);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        const auto mismatch = std::mismatch(a.begin(), a.end(), b.begin());
        if (mismatch.first != a.end()) {
            return {F::Multiset, static_cast<std::size_t>(mismatch.first - a.begin())};
        }
        return {};
    }
    if (!(detail::multiset_hash(input) == detail::multiset_hash(output))) {
        return {F::Multiset, output.size()};
    }
    return {};
}

/// Maps a generated 32-bit value to the benchmark record type. 64-bit keys
/// repeat the value in both halves; pairs carry the input position as value.
template <Record R>
R make_record(std::uint32_t v, std::size_t index) {
    if constexpr (std::same_as<R, KeyValue>) {
        return KeyValue{v, static_cast<std::uint32_t>(index)};
    } else if constexpr (std::same_as<R, std::uint64_t>) {
        return (std::uint64_t{v} << 32) | v;
    } else {
        return static_cast<R>(v);
    }
}

template <Record R>
std::vector<R> make_records(std::span<const std::uint32_t> values) {
    std::vector<R> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = make_record<R>(values[i], i);
    return out;
}

struct BenchOptions {
    Algo algo = Algo::SampleSort;
    dist::Kind dist = dist::Kind::Uniform;
    KeyType keytype = KeyType::U32;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    unsigned repeats = 5;
    std::optional<std::size_t> blocks;  // distribution p; default_blocks() when unset
    SortConfig config;                  // oversampling resolved per key type when unset
    bool oversampling_set = false;
    Fault fault = Fault::None;
};

/// Generates the input, sorts one warm-up copy, then times `repeats` sorts of
/// fresh copies and reports the median. Generation and validation are not
/// timed. validated is false if any output failed validation; `report` then
/// carries the first failure.
BenchRun run_benchmark(const BenchOptions& opts, ValidationReport* report = nullptr);

/// Generates, sorts once and validates, without timing.
ValidationReport validate_once(const BenchOptions& opts);

/// Full CLI. Returns the process exit code: 0 success, 1 usage error,
/// 2 validation failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace samplesort::bench
