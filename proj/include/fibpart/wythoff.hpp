#pragma once

// Exact golden-ratio arithmetic over 128-bit integers: isqrt, Fibonacci
// numbers, floor(m*phi), the Wythoff pair a(n) = floor(n*phi), b(n) = a(n) + n,
// and floor((a*phi + b)*n + c). No floating point anywhere in this header.

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <algorithm>

namespace fibpart {

using Int = __int128;
using UInt = unsigned __int128;

inline constexpr Int kIntMax = static_cast<Int>(~UInt{0} >> 1);
inline constexpr Int kIntMin = -kIntMax - 1;

/// Raised whenever an exact result would not fit in the 128-bit kernel.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline std::string to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    UInt u = neg ? UInt(0) - static_cast<UInt>(v) : static_cast<UInt>(v);
    std::string s;
    while (u != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

/// Parses a decimal integer into the 128-bit kernel type; throws on junk or overflow.
inline Int parse_int(const std::string& text) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        neg = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
    UInt acc = 0;
    const UInt limit = neg ? static_cast<UInt>(kIntMax) + 1 : static_cast<UInt>(kIntMax);
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c < '0' || c > '9') throw std::invalid_argument("not an integer: '" + text + "'");
        UInt digit = static_cast<UInt>(c - '0');
        if (acc > (limit - digit) / 10) throw OverflowError("integer out of 128-bit range: " + text);
        acc = acc * 10 + digit;
    }
    return neg ? static_cast<Int>(UInt(0) - acc) : static_cast<Int>(acc);
}

namespace detail {

inline Int checked_add(Int x, Int y) {
    Int r;
    if (__builtin_add_overflow(x, y, &r)) throw OverflowError("128-bit overflow in addition");
    return r;
}

inline Int checked_sub(Int x, Int y) {
    Int r;
    if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("128-bit overflow in subtraction");
    return r;
}

inline Int checked_mul(Int x, Int y) {
    Int r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("128-bit overflow in multiplication");
    return r;
}

inline int bit_width(UInt x) {
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    if (hi != 0) return 128 - __builtin_clzll(hi);
    const auto lo = static_cast<std::uint64_t>(x);
    return lo == 0 ? 0 : 64 - __builtin_clzll(lo);
}

// Newton iteration from a power-of-two overestimate; the iterates decrease
// monotonically to floor(sqrt(x)).
template <typename U>
U isqrt_newton(U x, int width) {
    if (x < 2) return x;
    U r = U{1} << ((width + 1) / 2);
    for (;;) {
        U next = (r + x / r) >> 1;
        if (next >= r) break;
        r = next;
    }
    // monotone correction; Newton above already lands on the floor, this
    // only guards the invariant r*r <= x < (r+1)*(r+1)
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

}  // namespace detail

/// floor(sqrt(x)) for x >= 0.
inline Int isqrt(Int x) {
    if (x < 0) throw std::domain_error("isqrt of a negative number");
    const auto ux = static_cast<UInt>(x);
    const int width = detail::bit_width(ux);
    if (width <= 62) {
        return static_cast<Int>(detail::isqrt_newton<std::uint64_t>(static_cast<std::uint64_t>(ux), width));
    }
    return static_cast<Int>(detail::isqrt_newton<UInt>(ux, width));
}

/// Largest n with fib(n) representable as a signed 128-bit integer.
inline constexpr int kMaxFibIndex = 184;

/// F(0) = 0, F(1) = F(2) = 1.
inline Int fib(int n) {
    if (n < 0) throw std::domain_error("fib of a negative index");
    if (n > kMaxFibIndex) throw OverflowError("fib(" + std::to_string(n) + ") exceeds 128 bits");
    static const auto table = [] {
        std::array<Int, kMaxFibIndex + 1> t{};
        t[1] = 1;
        for (int k = 2; k <= kMaxFibIndex; ++k) t[k] = t[k - 1] + t[k - 2];
        return t;
    }();
    return table[static_cast<std::size_t>(n)];
}

/// Largest |m| for which floor(m*phi) is evaluated exactly (5*m^2 must fit).
inline const Int kFloorPhiLimit = isqrt(kIntMax / 5);

/// floor(m*phi), exact for |m| <= kFloorPhiLimit.
inline Int floor_phi_mul(Int m) {
    if (m > kFloorPhiLimit || m < -kFloorPhiLimit) {
        throw OverflowError("floor_phi_mul argument out of range: " + to_string(m));
    }
    if (m < 0) {
        // m*phi is irrational, so floor(-x) = -floor(x) - 1
        const Int p = -m;
        return -((p + isqrt(5 * p * p)) / 2) - 1;
    }
    return (m + isqrt(5 * m * m)) / 2;
}

/// Lower Wythoff sequence a(n) = floor(n*phi), n >= 1.
inline Int lower_wythoff(Int n) {
    if (n < 1) throw std::domain_error("lower_wythoff needs n >= 1");
    return floor_phi_mul(n);
}

/// Upper Wythoff sequence b(n) = floor(n*phi^2) = a(n) + n, n >= 1.
inline Int upper_wythoff(Int n) {
    if (n < 1) throw std::domain_error("upper_wythoff needs n >= 1");
    return floor_phi_mul(n) + n;
}

/// floor((a*phi + b)*n + c) = b*n + c + floor(a*n*phi).
inline Int eval_affine_golden(Int a, Int b, Int c, Int n) {
    using namespace detail;
    return checked_add(checked_add(checked_mul(b, n), c), floor_phi_mul(checked_mul(a, n)));
}

/// Membership in A, the range of a. The only candidate index is ceil(m/phi).
inline bool in_lower_wythoff(Int m) {
    if (m < 1) return false;
    // m/phi = m*phi - m, so the candidate index is ceil(m*phi) - m = floor(m*phi) + 1 - m
    const Int n = floor_phi_mul(m) + 1 - m;
    return n >= 1 && floor_phi_mul(n) == m;
}

inline bool in_upper_wythoff(Int m) { return m >= 1 && !in_lower_wythoff(m); }

}  // namespace fibpart
