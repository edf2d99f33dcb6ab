#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace egk {

// xorshift64* (Vigna 2014): shifts 12/25/27, output multiplier
// 0x2545F4914F6CDD1D. The seed is expanded with one SplitMix64 step so
// that seed 0 yields a nonzero state. Every draw below is specified
// bit-for-bit, so golden values port across platforms and languages,
// which std::uniform_*_distribution does not guarantee.
class Xorshift64Star {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kMultiplier = 0x2545F4914F6CDD1DULL;
    static constexpr const char* kName = "xorshift64*/splitmix64-seeded";

    explicit Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next(); }

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * kMultiplier;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) by rejection; n must be positive.
    std::size_t below(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = max() - (max() % bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return static_cast<std::size_t>(x % bound);
    }

    static constexpr std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t state_;
};

}  // namespace egk
