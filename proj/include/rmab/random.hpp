#pragma once

#include <cstdint>
#include <random>

namespace rmab {

// Seeded stream of uniforms on [0,1). The engine's output sequence is fixed by
// the standard and the conversion below is ours, so draws are reproducible
// across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return engine_(); }

    friend bool operator==(const RandomStream&, const RandomStream&) = default;

private:
    std::mt19937_64 engine_;
};

// Derives independent seeds for auxiliary streams (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace rmab
