#pragma once

#include <cstdint>

namespace tricorn {

// Splittable counter-based generator (splitmix64 finalizer over a keyed
// counter).  Every draw is a pure function of (key, counter), so independent
// walks can share a seed and still be bit-reproducible in any order.
struct CounterRng {
    std::uint64_t key = 0;

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t at(std::uint64_t counter) const { return mix(key + 0x632be59bd9b4e019ull * counter); }

    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    bool coin(std::uint64_t counter) const { return at(counter) & 1ull; }

    CounterRng split(std::uint64_t stream) const { return CounterRng{mix(key ^ mix(stream))}; }
};

}  // namespace tricorn
