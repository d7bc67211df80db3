#pragma once

#include <cstdint>

namespace ks {

/// SplitMix64: a splittable 64-bit generator (Steele, Lea & Flood).
/// Substreams are derived by mixing a stream index into the seed, which
/// makes per-stratum sampling reproducible independent of execution
/// order. Doubles are built from the top 53 bits so the output stream
/// is platform-independent.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Deterministic substream k of a base seed.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t k) {
        return SplitMix64(mix(seed ^ mix(k + 0x9E3779B97F4A7C15ull)));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    /// Uniform integer in [0, n), Lemire rejection-free multiply-shift.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace ks
