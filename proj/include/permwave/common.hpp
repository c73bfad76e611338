#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace permwave {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// 128-bit unsigned integers carry waveform counts and message indices;
/// L!*M^L overflows 64 bits already at moderate L.
using u128 = unsigned __int128;

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

inline u128 parse_u128(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty integer literal");
    constexpr u128 max = ~static_cast<u128>(0);
    u128 v = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw std::invalid_argument("invalid digit in integer literal: " + std::string(text));
        unsigned d = static_cast<unsigned>(c - '0');
        if (v > (max - d) / 10)
            throw std::overflow_error("integer literal exceeds 128 bits: " + std::string(text));
        v = v * 10 + d;
    }
    return v;
}

/// a*b with overflow detection; returns false on wrap.
inline bool checked_mul(u128 a, u128 b, u128& out) {
    if (a != 0 && b > (~static_cast<u128>(0)) / a) return false;
    out = a * b;
    return true;
}

inline int bit_length(u128 v) {
    int n = 0;
    while (v > 0) {
        ++n;
        v >>= 1;
    }
    return n;
}

}  // namespace permwave
