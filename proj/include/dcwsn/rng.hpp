#ifndef DCWSN_RNG_HPP
#define DCWSN_RNG_HPP

#include <cstdint>
#include <limits>

namespace dcwsn {

// PCG32 (XSH-RR 64/32, O'Neill 2014): 64-bit LCG state, 32-bit output.
// The output function is fixed-width integer arithmetic only, so a
// (seed, stream) pair reproduces the same sequence on every platform.
// Distinct streams select distinct LCG increments.
class Pcg32 {
public:
    using result_type = std::uint32_t;

    explicit Pcg32(std::uint64_t seed = 0x853c49e6748fea9bULL,
                   std::uint64_t stream = 0) {
        inc_ = (stream << 1u) | 1u;
        state_ = 0u;
        next();
        state_ += seed;
        next();
    }

    std::uint32_t next() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted =
            static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint32_t operator()() { return next(); }

    static constexpr std::uint32_t min() { return 0; }
    static constexpr std::uint32_t max() {
        return std::numeric_limits<std::uint32_t>::max();
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next();
        std::uint64_t lo = next();
        return (hi << 32) | lo;
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, bound) by rejection.
    std::uint32_t below(std::uint32_t bound) {
        std::uint32_t threshold = (-bound) % bound;
        for (;;) {
            std::uint32_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

// Mixes trial/row indices into a substream id so every trial of every
// sweep row gets its own generator from one master seed.
inline std::uint64_t substream(std::uint64_t a, std::uint64_t b = 0,
                               std::uint64_t c = 0) {
    // splitmix64 finalizer over a packed id
    std::uint64_t z = a * 0x9e3779b97f4a7c15ULL + b * 0xbf58476d1ce4e5b9ULL +
                      c * 0x94d049bb133111ebULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace dcwsn

#endif
