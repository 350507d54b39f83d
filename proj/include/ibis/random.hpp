#pragma once
// Seeded draws built only on the raw engine output, so sequences are the
// same with every standard library.

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace ibis {

/// Unbiased draw from [0, bound); bound must be positive.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

/// Fisher-Yates shuffle.
template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_below(rng, i)]);
    }
}

}  // namespace ibis
