#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "ringgesn/matrix.hpp"

namespace ringgesn {

namespace detail {

/// Rabinowitz-Wagon spigot in base 10^4 (Winter's formulation). Returns the
/// decimal digits of pi starting with the integer digit "3". Chunks that
/// overflow four digits carry into the already emitted prefix.
inline std::string spigot_pi(std::size_t count) {
    constexpr std::int64_t base = 10000;
    const std::size_t chunks = (count + 8) / 4 + 2;
    std::int64_t c = static_cast<std::int64_t>(chunks) * 14;
    std::vector<std::int64_t> f(static_cast<std::size_t>(c) + 1, base / 5);
    std::vector<int> out;
    out.reserve(chunks);
    std::int64_t e = 0;
    while (c > 0) {
        std::int64_t d = 0;
        std::int64_t g = c * 2;
        std::int64_t b = c;
        while (true) {
            d += f[static_cast<std::size_t>(b)] * base;
            --g;
            f[static_cast<std::size_t>(b)] = d % g;
            d /= g;
            --g;
            --b;
            if (b == 0) break;
            d *= b;
        }
        std::int64_t chunk = e + d / base;
        e = d % base;
        if (chunk >= base) {
            chunk -= base;
            std::size_t j = out.size() - 1;
            ++out[j];
            while (out[j] >= base) {
                out[j] -= static_cast<int>(base);
                ++out[--j];
            }
        }
        out.push_back(static_cast<int>(chunk));
        c -= 14;
    }
    std::string digits;
    digits.reserve(out.size() * 4);
    char buf[5];
    for (std::size_t k = 0; k < out.size(); ++k) {
        const int v = out[k];
        buf[0] = static_cast<char>('0' + v / 1000);
        buf[1] = static_cast<char>('0' + v / 100 % 10);
        buf[2] = static_cast<char>('0' + v / 10 % 10);
        buf[3] = static_cast<char>('0' + v % 10);
        buf[4] = '\0';
        digits += buf;
    }
    digits.resize(count);
    return digits;
}

}  // namespace detail

/// First `count` decimal digits of pi after the decimal point (1, 4, 1, 5, 9, ...).
/// Thread-safe; results are cached process-wide.
inline std::string pi_fraction_digits(std::size_t count) {
    static std::mutex mutex;
    static std::string cache;
    std::lock_guard lock(mutex);
    if (cache.size() < count) {
        const std::size_t want = std::max(count, 2 * cache.size());
        cache = detail::spigot_pi(want + 1).substr(1);
    }
    return cache.substr(0, count);
}

/// Sign matrix filled row-wise from the digits of pi after the decimal point:
/// digit < 5 gives -1, otherwise +1.
inline DenseMatrix pi_sign_matrix(std::size_t rows, std::size_t cols) {
    const std::string digits = pi_fraction_digits(rows * cols);
    DenseMatrix signs(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            signs(r, c) = digits[r * cols + c] < '5' ? -1.0 : 1.0;
    return signs;
}

}  // namespace ringgesn
