#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace samplesort {

/// A 32-bit key carrying a 32-bit payload. Ordered by key only.
struct KeyValue {
    std::uint32_t key;
    std::uint32_t value;

    friend bool operator==(const KeyValue&, const KeyValue&) = default;
};

template <class R>
concept HasKeyMember = requires(const R& r) {
    { r.key } -> std::convertible_to<std::uint64_t>;
};

/// Supported record types: bare unsigned 32/64-bit integers, 32-bit floats and
/// KeyValue pairs.
template <class R>
concept Record = std::is_trivially_copyable_v<R> &&
                 (std::same_as<R, std::uint32_t> || std::same_as<R, std::uint64_t> ||
                  std::same_as<R, float> || std::same_as<R, KeyValue>);

template <Record R>
constexpr auto sort_key(const R& r) noexcept {
    if constexpr (HasKeyMember<R>) {
        return r.key;
    } else {
        return r;
    }
}

template <Record R>
using key_type_t = std::remove_cvref_t<decltype(sort_key(std::declval<const R&>()))>;

template <Record R>
struct KeyLess {
    constexpr bool operator()(const R& a, const R& b) const noexcept {
        return sort_key(a) < sort_key(b);
    }
};

/// Branch-free compare-exchange: afterwards key(a) <= key(b).
template <Record R>
inline void compare_exchange(R& a, R& b) noexcept {
    const R x = a;
    const R y = b;
    if constexpr (std::is_integral_v<R>) {
        a = std::min(x, y);
        b = std::max(x, y);
        return;
    }
    const bool swap = sort_key(y) < sort_key(x);
    a = swap ? y : x;
    b = swap ? x : y;
}

/// Throws std::invalid_argument("unordered key") if any float key is NaN.
template <Record R>
void require_total_order(std::span<const R> data) {
    if constexpr (std::floating_point<key_type_t<R>>) {
        for (const R& r : data) {
            if (std::isnan(sort_key(r))) throw std::invalid_argument("unordered key");
        }
    }
}

} // namespace samplesort
