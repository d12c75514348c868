#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace testcat {

// Deterministic stream derivation: every randomized routine draws from an
// engine seeded by mixing (user seed, stream tag, replicate, item).  Results
// are reproducible across platforms because sampling below never goes through
// std::uniform_int_distribution, whose output is implementation-defined.

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// stream tags, one per consumer; keeps independent draws decorrelated
inline constexpr std::uint64_t kTagCrds = 0x43524453ull;         // per-attribute permutations
inline constexpr std::uint64_t kTagPartialRows = 0x50524f57ull;  // shared row subset
inline constexpr std::uint64_t kTagPartialPerm = 0x50504d54ull;  // within-subset permutations
inline constexpr std::uint64_t kTagMonteCarlo = 0x4d433242ull;   // pairing permutations
inline constexpr std::uint64_t kTagSynthetic = 0x53594e54ull;    // dataset synthesis

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= tag * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(s);
    s ^= a + 0xd1b54a32d192ed03ull;
    h ^= splitmix64(s);
    s ^= b + 0x8ebc6af09c88c6e3ull;
    h ^= splitmix64(s);
    return h;
}

inline std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t tag,
                                  std::uint64_t a = 0, std::uint64_t b = 0) {
    return std::mt19937_64(derive(seed, tag, a, b));
}

// unbiased draw from [0, n) by rejection; n == 0 is a caller bug
inline std::uint64_t bounded(std::mt19937_64& eng, std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t r = eng();
        if (r >= threshold) return r % n;
    }
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(eng, i));
        std::swap(v[i - 1], v[j]);
    }
}

inline std::vector<std::uint32_t> permutation(std::uint32_t n, std::mt19937_64& eng) {
    std::vector<std::uint32_t> p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p, eng);
    return p;
}

// k distinct indices from [0, n); partial Fisher-Yates, order discarded
inline std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k,
                                                             std::mt19937_64& eng) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t j = i + static_cast<std::uint32_t>(bounded(eng, n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace rng
}  // namespace testcat
