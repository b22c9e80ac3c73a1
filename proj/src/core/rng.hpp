#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gmelab {

// Deterministic, seedable random stream. Identical (seed, stream) pairs
// reproduce identical draws on any platform: the engine is the fully
// specified std::mt19937_64 and all distributions are hand-rolled on top
// of it (std:: distribution objects are implementation-defined).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps
    // the result exactly uniform.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit =
            std::uint64_t(-1) - std::uint64_t(-1) % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    // Standard normal via Box-Muller (one value per call, partner cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(phi);
        have_cached_ = true;
        return r * std::cos(phi);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// Stream-id layout used across the project so that concurrent consumers
// never share a stream: high 32 bits select an ensemble member (or other
// top-level unit), low bits select children (repetitions, state draws).
inline std::uint64_t member_stream(std::uint64_t member) {
    return (member + 1) << 32;
}

inline std::uint64_t substream(std::uint64_t base, std::uint64_t child) {
    return base + child;
}

}  // namespace gmelab
