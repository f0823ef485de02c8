#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace textcomp {

// All sampling in the library goes through these helpers instead of
// std::uniform_int_distribution / std::shuffle, whose outputs are
// implementation-defined. Seeded results are identical on every platform.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic per-stream seed, e.g. one stream per forest tree.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

// Uniform draw from [0, n) by rejection; n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_below(rng, i)]);
    }
}

// Floyd's algorithm: k distinct values from [0, n), returned sorted ascending.
std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t n, std::uint64_t k);

}  // namespace textcomp
