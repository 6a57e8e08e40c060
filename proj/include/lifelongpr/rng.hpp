#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lifelongpr {

// splitmix64 step; used to derive independent seed streams from one root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2fa0c5bd7c3ULL;
    return z ^ (z >> 31);
}

// Deterministically mixes a root seed with a list of stream tags.
// Equal inputs give equal seeds on every platform.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = root ^ 0xa0761d6478bd642fULL;
    for (std::uint64_t t : tags) {
        s ^= t + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        splitmix64(s);
    }
    return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
    return std::mt19937_64(derive_seed(root, tags));
}

// Uniform double in [0,1) from a raw 64-bit draw.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * (1.0 / 9007199254740992.0);
}

} // namespace lifelongpr
