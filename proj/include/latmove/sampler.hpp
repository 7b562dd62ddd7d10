#ifndef LATMOVE_SAMPLER_HPP
#define LATMOVE_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <string>

#include "latmove/graph.hpp"

namespace latmove {

// splitmix64: the documented generator behind every randomized run here.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform draw from [0, n) by rejection, no modulo bias
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
        while (true) {
            std::uint64_t r = next();
            if (r < bound) return r % n;
        }
    }
};

struct ChainState {
    Polytope current;
    std::uint64_t rng_state = 0;
    std::uint64_t step_count = 0;
    int d = 0;
    Int k = 0;
};

struct Histogram {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
};

ChainState chain_start(int d, const Int& k, std::uint64_t seed);

// One step: draw a box lattice point uniformly; delete it if it is a
// deletable vertex, insert it if insertable, otherwise hold. The proposal
// is symmetric, so the stationary distribution is uniform on the
// component of the current state.
ChainState mh_step(ChainState state);

Histogram run_chain(int d, const Int& k, std::uint64_t steps, std::uint64_t burnin,
                    std::uint64_t seed);

// Total-variation distance of the empirical histogram to the uniform law on
// support_size states, exact in rationals.
Rat tv_distance_to_uniform(const Histogram& h, std::size_t support_size);

// Exact one-step transition matrix over the given node set, entries as
// rationals; row/column order follows the sorted canonical keys.
std::vector<std::vector<Rat>> transition_matrix(const std::vector<Polytope>& nodes, const Int& k);

// Exact stationary distribution of an irreducible row-stochastic matrix,
// solved over rationals.
std::vector<Rat> stationary_distribution(const std::vector<std::vector<Rat>>& p);

}  // namespace latmove

#endif
