#pragma once

// Deterministic random streams. splitmix64 is used directly as the generator
// so that runs are byte-identical across standard libraries; independent
// streams are derived by hashing (seed, stream) rather than by offsetting.

#include <cstdint>

namespace beamhop {

// splitmix64 finalizer; bijective 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

// Knuth multiplication method; exact and portable for the small means used
// per slot (mean = rate * slot length).
int poisson_sample(SplitMix64& rng, double mean);

}  // namespace beamhop
