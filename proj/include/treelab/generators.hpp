#pragma once

// Seeded generators of random words and edges for property checks.

#include <cstddef>

#include "treelab/group.hpp"
#include "treelab/random.hpp"

namespace treelab {

inline std::size_t uniform_below(CounterStream& rng, std::size_t n)
{
    return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
}

// A uniformly random reduced word of exactly `length` letters.
inline GroupWord random_word_of_length(CounterStream& rng, int rank, std::size_t length)
{
    GroupWord w(rank);
    auto k = static_cast<std::size_t>(rank);
    while (w.length() < length) {
        std::size_t idx = uniform_below(rng, 2 * k);
        auto l = static_cast<Letter>(idx < k ? static_cast<int>(idx) + 1
                                             : -static_cast<int>(idx - k + 1));
        if (!w.is_identity() && w.back() == -l)
            continue;
        w.push_back(l);
    }
    return w;
}

// Length uniform in [0, max_length], then a uniform word of that length.
inline GroupWord random_word(CounterStream& rng, int rank, std::size_t max_length)
{
    return random_word_of_length(rng, rank, uniform_below(rng, max_length + 1));
}

inline CanonicalEdge random_edge(CounterStream& rng, int rank, std::size_t max_depth)
{
    GroupWord parent = random_word(rng, rank, max_depth);
    auto k = static_cast<std::size_t>(rank);
    for (;;) {
        std::size_t idx = uniform_below(rng, 2 * k);
        auto l = static_cast<Letter>(idx < k ? static_cast<int>(idx) + 1
                                             : -static_cast<int>(idx - k + 1));
        if (parent.is_identity() || parent.back() != -l)
            return CanonicalEdge(parent, l);
    }
}

}  // namespace treelab
