/* Seeded random instance and order generation for property tests. */

#ifndef SEQMATCH_RANDOM_GEN_HPP
#define SEQMATCH_RANDOM_GEN_HPP

#include <seqmatch/core.hpp>

#include <cstdint>
#include <random>

namespace seqmatch
{
    struct RandomInstanceConfig
    {
        int max_firms = 4;
        int max_workers = 4;
        int max_firm_list = 1000;    // s cap
        int max_worker_list = 1000;  // t cap
        int max_pairs = 12;          // |E| cap
        double density = 0.7;        // chance of keeping a candidate pair
    };

    MatchingInstance random_instance(std::mt19937 & rng, const RandomInstanceConfig & = {});

    // uniform-ish consistent offering order: repeatedly advance a random firm
    OfferingOrder random_order(std::mt19937 & rng, const MatchingInstance &);

    // SEQMATCH_SEED overrides the default seed for reproducible runs
    std::uint64_t seed_from_env(std::uint64_t default_seed);
}

#endif
