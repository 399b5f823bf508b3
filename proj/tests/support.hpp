/* Shared helpers for the test suite: seeded rngs, brute-force oracles, and
 * tiny instance builders. */

#ifndef SEQMATCH_TESTS_SUPPORT_HPP
#define SEQMATCH_TESTS_SUPPORT_HPP

#include <seqmatch/core.hpp>
#include <seqmatch/random_gen.hpp>
#include <seqmatch/stability.hpp>

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ts
{
    using namespace seqmatch;

    // every suite derives its generator from SEQMATCH_SEED plus a local salt,
    // so runs are reproducible but suites stay decorrelated
    inline std::mt19937 seeded_rng(std::uint64_t salt)
    {
        return std::mt19937(static_cast<unsigned>(seed_from_env(1234567) * 1000003u + salt));
    }

    inline MatchingInstance make_instance(
            std::vector<std::pair<std::string, std::vector<std::string>>> firms,
            std::vector<std::pair<std::string, std::vector<std::string>>> workers)
    {
        RawInstance raw;
        for (auto & [name, prefs] : firms) {
            raw.firms.push_back(name);
            raw.firm_prefs.push_back(prefs);
        }
        for (auto & [name, prefs] : workers) {
            raw.workers.push_back(name);
            raw.worker_prefs.push_back(prefs);
        }
        return MatchingInstance::validate(raw);
    }

    inline std::vector<Matching> stable_matchings(const MatchingInstance & inst)
    {
        std::vector<Matching> out;
        for (auto & mu : enumerate_matchings(inst))
            if (is_stable(inst, mu))
                out.push_back(mu);
        return out;
    }

    // pointwise weak worker-side comparison (-1 loses to any acceptable firm)
    inline bool weakly_better_for_workers(const MatchingInstance & inst,
            const Matching & a, const Matching & b)
    {
        for (int q = 0; q < inst.worker_count(); ++q)
            if (a.firm_of(q) != b.firm_of(q)
                    && ! inst.worker_prefers(q, a.firm_of(q), b.firm_of(q)))
                return false;
        return true;
    }

    inline bool weakly_better_for_firms(const MatchingInstance & inst,
            const Matching & a, const Matching & b)
    {
        for (int p = 0; p < inst.firm_count(); ++p)
            if (a.worker_of(p) != b.worker_of(p)
                    && ! inst.firm_prefers(p, a.worker_of(p), b.worker_of(p)))
                return false;
        return true;
    }
}

#endif
