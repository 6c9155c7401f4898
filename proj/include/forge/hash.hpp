#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace forge {

// 64-bit xxHash (XXH64). Seeded, avalanche-quality, stable across platforms;
// used for shingle hashing, MinHash component families and gram fingerprints.
inline std::uint64_t xxhash64(const void* input, std::size_t len, std::uint64_t seed) {
    constexpr std::uint64_t kPrime1 = 11400714785074694791ULL;
    constexpr std::uint64_t kPrime2 = 14029467366897019727ULL;
    constexpr std::uint64_t kPrime3 = 1609587929392839161ULL;
    constexpr std::uint64_t kPrime4 = 9650029242287828579ULL;
    constexpr std::uint64_t kPrime5 = 2870177450012600261ULL;

    auto rotl = [](std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); };
    auto read64 = [](const unsigned char* p) {
        std::uint64_t v;
        std::memcpy(&v, p, 8);
        return v;
    };
    auto read32 = [](const unsigned char* p) {
        std::uint32_t v;
        std::memcpy(&v, p, 4);
        return static_cast<std::uint64_t>(v);
    };
    auto round = [&](std::uint64_t acc, std::uint64_t lane) {
        acc += lane * kPrime2;
        acc = rotl(acc, 31);
        return acc * kPrime1;
    };

    const auto* p = static_cast<const unsigned char*>(input);
    const unsigned char* end = p + len;
    std::uint64_t h;

    if (len >= 32) {
        std::uint64_t v1 = seed + kPrime1 + kPrime2;
        std::uint64_t v2 = seed + kPrime2;
        std::uint64_t v3 = seed;
        std::uint64_t v4 = seed - kPrime1;
        do {
            v1 = round(v1, read64(p));
            v2 = round(v2, read64(p + 8));
            v3 = round(v3, read64(p + 16));
            v4 = round(v4, read64(p + 24));
            p += 32;
        } while (p + 32 <= end);
        h = rotl(v1, 1) + rotl(v2, 7) + rotl(v3, 12) + rotl(v4, 18);
        auto merge = [&](std::uint64_t acc, std::uint64_t val) {
            acc ^= round(0, val);
            return acc * kPrime1 + kPrime4;
        };
        h = merge(h, v1);
        h = merge(h, v2);
        h = merge(h, v3);
        h = merge(h, v4);
    } else {
        h = seed + kPrime5;
    }

    h += static_cast<std::uint64_t>(len);
    while (p + 8 <= end) {
        h ^= round(0, read64(p));
        h = rotl(h, 27) * kPrime1 + kPrime4;
        p += 8;
    }
    if (p + 4 <= end) {
        h ^= read32(p) * kPrime1;
        h = rotl(h, 23) * kPrime2 + kPrime3;
        p += 4;
    }
    while (p < end) {
        h ^= static_cast<std::uint64_t>(*p) * kPrime5;
        h = rotl(h, 11) * kPrime1;
        ++p;
    }

    h ^= h >> 33;
    h *= kPrime2;
    h ^= h >> 29;
    h *= kPrime3;
    h ^= h >> 32;
    return h;
}

inline std::uint64_t hash_bytes(std::string_view s, std::uint64_t seed = 0) {
    return xxhash64(s.data(), s.size(), seed);
}

inline std::uint64_t hash_u64(std::uint64_t v, std::uint64_t seed) {
    return xxhash64(&v, sizeof(v), seed);
}

}  // namespace forge
