#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "rslab/errors.hpp"

namespace rslab {

using int128 = __int128;
using uint128 = unsigned __int128;

inline constexpr int128 int128_max() {
    return static_cast<int128>((static_cast<uint128>(1) << 127) - 1);
}

inline int128 abs128(int128 x) { return x < 0 ? -x : x; }

inline int128 checked_add(int128 a, int128 b) {
    int128 out;
    if (__builtin_add_overflow(a, b, &out))
        throw limit_error("int128 addition overflow");
    return out;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 out;
    if (__builtin_mul_overflow(a, b, &out))
        throw limit_error("int128 multiplication overflow");
    return out;
}

inline std::string to_string(int128 x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    uint128 u = neg ? static_cast<uint128>(-(x + 1)) + 1 : static_cast<uint128>(x);
    std::string s;
    while (u) {
        s += static_cast<char>('0' + static_cast<int>(u % 10));
        u /= 10;
    }
    if (neg) s += '-';
    return {s.rbegin(), s.rend()};
}

// Conversion through two 64-bit halves; exact up to the 64-bit mantissa of
// long double, which is all downstream consumers need.
inline long double to_long_double(int128 x) {
    bool neg = x < 0;
    uint128 u = neg ? static_cast<uint128>(-(x + 1)) + 1 : static_cast<uint128>(x);
    auto hi = static_cast<std::uint64_t>(u >> 64);
    auto lo = static_cast<std::uint64_t>(u);
    long double r = static_cast<long double>(hi) * 18446744073709551616.0L +
                    static_cast<long double>(lo);
    return neg ? -r : r;
}

}  // namespace rslab
