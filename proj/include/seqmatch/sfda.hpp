/* Sequentially-fixing deferred acceptance: repeatedly compute the
 * worker-optimal stable matching of the current instance, fix its earliest
 * pair in the offering order, and contract. Agrees with the SPE matching on
 * instances whose firm lists or worker lists have length at most two. */

#ifndef SEQMATCH_SFDA_HPP
#define SEQMATCH_SFDA_HPP

#include <seqmatch/core.hpp>

namespace seqmatch
{
    struct ListWidth
    {
        int max_firm_list = 0;    // s
        int max_worker_list = 0;  // t
        bool operator==(const ListWidth &) const = default;
    };

    ListWidth classify(const MatchingInstance &);

    Matching run_sfda(const MatchingInstance &, const OfferingOrder &);

    struct EquivalenceReport
    {
        bool equal = false;
        NamedMatching sfda_matching, spe_matching;
    };

    // Requires classify(I) to have s <= 2 or t <= 2; runs both algorithms and
    // reports (in)equality. Inequality would be an implementation bug.
    EquivalenceReport verify_tractable_equivalence(const MatchingInstance &, const OfferingOrder &);
}

#endif
