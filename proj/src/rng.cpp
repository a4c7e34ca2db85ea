#include "nomsdm/rng.hpp"

#include <limits>

namespace nomsdm {

std::uint64_t Rng::uniform_index(std::uint64_t bound)
{
    // Rejection sampling keeps the result unbiased and platform independent.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % bound;
}

} // namespace nomsdm
