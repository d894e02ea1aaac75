#include "ltcast/prng.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltcast {

NeighborSet neighbors_from_seed(std::uint64_t seed, std::uint32_t n,
                                const DegreeDistribution& dist) {
    if (n == 0)
        throw std::invalid_argument("neighbors_from_seed: n must be >= 1");
    SeedStream stream(seed);
    std::uint32_t degree = dist.sample_degree(stream.next_unit());
    if (degree > n)
        degree = n;

    NeighborSet out;
    out.degree = degree;
    out.indices.reserve(degree);
    std::vector<bool> seen(n, false);
    while (out.indices.size() < degree) {
        std::uint32_t idx = stream.next_below(n);
        if (!seen[idx]) {
            seen[idx] = true;
            out.indices.push_back(idx);
        }
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

} // namespace ltcast
