#ifndef LTCAST_PRNG_HPP
#define LTCAST_PRNG_HPP

#include <cstdint>
#include <vector>

#include "ltcast/soliton.hpp"

namespace ltcast {

/// splitmix64 stream. This is the generator fixed by wire format version 1:
/// encoder and decoder both expand a packet's 64-bit seed through it, so the
/// neighbor sets agree without transmitting index lists. Do not change the
/// constants without bumping the wire version.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Draws are folded modulo n; the bias is
    /// below 2^-48 for any n that fits a data packet header.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

private:
    std::uint64_t state_;
};

/// Degree and source-symbol indices generated from a packet seed.
struct NeighborSet {
    std::uint32_t degree = 0;
    std::vector<std::uint32_t> indices; // sorted, distinct
};

/// Deterministic seed -> (degree, neighbor set) mapping shared by encoder and
/// decoder. The degree comes from one inverse-CDF draw, the indices from
/// repeated draws below n until `degree` distinct values have been seen.
NeighborSet neighbors_from_seed(std::uint64_t seed, std::uint32_t n,
                                const DegreeDistribution& dist);

} // namespace ltcast

#endif
