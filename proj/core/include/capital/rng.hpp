#pragma once

#include <cstdint>
#include <string_view>

namespace capital {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

// 64-bit FNV-1a. Used for prompt fingerprints and seed derivation; must stay
// stable across platforms and releases because fingerprints are persisted in
// script and cache files.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t seed = kFnvOffsetBasis) {
    std::uint64_t h = seed;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Derives an independent seed for a named sub-stream of the pipeline RNG.
// Results depend only on (base, label, index), never on call order, so
// concurrent evaluation cannot perturb per-item randomness.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                    std::uint64_t index = 0) {
    return splitmix64(base ^ fnv1a64(label) ^ (index * 0x9e3779b97f4a7c15ull));
}

// Small deterministic generator. std::mt19937_64 would also do, but the
// standard distributions are implementation-defined; this keeps every draw
// bit-stable across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double next_real01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace capital
