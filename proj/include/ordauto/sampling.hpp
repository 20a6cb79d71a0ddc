#ifndef ORDAUTO_SAMPLING_HPP
#define ORDAUTO_SAMPLING_HPP

#include <random>
#include <vector>

#include "ordauto/word.hpp"

namespace ordauto {

// Run lengths used by seeded word generation: successor, limit and mixed
// shapes that exercise the limit rules.
const std::vector<Ordinal>& default_run_pool();

// Random ordinals below w^w (finite exponents), for the arithmetic law checks.
Ordinal sample_ordinal_below_omega_omega(std::mt19937_64& rng, int max_terms = 3,
                                         int max_exponent = 3, uint64_t max_coeff = 4);

struct WordSampler {
    Alphabet alphabet;
    int max_blocks = 4;
    std::vector<Ordinal> runs = default_run_pool();

    BlockWord sample(std::mt19937_64& rng) const;
};

// Canonical split positions of w: 0, |w|, block boundaries, and small
// successor/limit offsets into each block.
std::vector<Ordinal> split_positions(const BlockWord& w);

}  // namespace ordauto

#endif
