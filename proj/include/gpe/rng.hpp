#pragma once

#include <cstdint>

// Pinned RNG: xoshiro256** streams seeded through SplitMix64.
// All randomness in the library flows through this header so that results
// are bit-reproducible across platforms and independent of execution order.

namespace gpe {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Name of the generator, recorded in experiment metadata.
inline constexpr const char* kRngName = "xoshiro256**";

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Fair coin; probability exactly 1/2.
    bool next_bit() { return (next() & 1ULL) != 0; }

    // Uniform in [0, bound) without modulo bias (Lemire's method).
    std::uint64_t uniform_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (-bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

// Seed for sub-stream `index` of a master seed. Replicates, pairs and rounds
// each get their own stream, so batch results do not depend on execution
// order or thread count.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    SplitMix64 sm(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return sm.next();
}

}  // namespace gpe
