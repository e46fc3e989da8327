#pragma once

#include <cstdint>
#include <initializer_list>

namespace nest {

// splitmix64, used for seeding and key mixing
struct SplitMix64 {
    std::uint64_t state;

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** by Blackman/Vigna. Fully specified output stream, so samples
// are reproducible across platforms and standard-library versions.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
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

    // unbiased draw from [0, n) via threshold rejection
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

    // uniform double in [0, 1)
    double real() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool coin() { return ((*this)() >> 63) != 0; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Mixes a seed with a structured key into a fresh 64-bit seed. Distinct keys
// give decorrelated values, which lets per-block (and per-experiment-cell)
// sampling run in any order — or in parallel — with identical output.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    SplitMix64 sm{seed};
    std::uint64_t h = sm.next();
    for (std::uint64_t k : key) {
        SplitMix64 mix{h ^ (k + 0x9E3779B97F4A7C15ULL)};
        h = mix.next();
    }
    return h;
}

inline Rng derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    return Rng(derive_seed(seed, key));
}

} // namespace nest
