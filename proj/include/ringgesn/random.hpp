#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace ringgesn {

/// Identifier of the pseudo-random scheme below, written into reports.
///
/// ringgesn-rng-v1:
///   * engine: std::mt19937_64 (sequence fixed by the C++ standard) seeded with one 64-bit word
///   * real in [0,1):  (x >> 11) * 2^-53
///   * real in (0,1):  ((x >> 11) + 0.5) * 2^-53
///   * integer in [0,n): reject x < (2^64 mod n), then x mod n
///   * shuffle: Fisher-Yates from the back, j = below(i + 1)
///   * child seeds: splitmix64 chained over (parent, tag...)
inline constexpr std::string_view kRngScheme = "ringgesn-rng-v1";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                           std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t s = splitmix64(parent);
    for (auto t : tags) s = splitmix64(s ^ splitmix64(t + 0x632be59bd9b4e019ULL));
    return s;
}

/// Seeded generator with distribution mappings that do not depend on the
/// standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double open01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n ? (0 - n) % n : 0;  // 2^64 mod n
        while (true) {
            const std::uint64_t x = next();
            if (x >= limit) return x % n;
        }
    }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ringgesn
