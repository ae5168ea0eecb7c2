#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace orbo {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds a tuple of words into a single stream key.
inline std::uint64_t stream_key(std::initializer_list<std::uint64_t> words) {
    std::uint64_t k = 0x243f6a8885a308d3ULL;
    for (std::uint64_t w : words) k = mix64(k ^ w);
    return k;
}

// Counter-based generator: the n-th variate of a stream depends only on
// (key, n), so independent streams can be drawn in any order or in
// parallel and still reproduce bit-identically.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng keyed(std::initializer_list<std::uint64_t> words) {
        return CounterRng(stream_key(words));
    }

    std::uint64_t next_u64() { return mix64(key_ ^ mix64(++counter_)); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (one variate per call).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Unbiased integer on [0, n) by rejection.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace orbo
