/* Constructing an offering order whose SPE matching is the worker-optimal
 * stable matching: place every offer a firm prefers to its stable partner
 * first, then order the remaining offers by the acceptance order of
 * worker-proposing deferred acceptance. */

#ifndef SEQMATCH_ORDER_DESIGN_HPP
#define SEQMATCH_ORDER_DESIGN_HPP

#include <seqmatch/core.hpp>

#include <string>
#include <vector>

namespace seqmatch
{
    struct DesignPlan
    {
        std::vector<Pair> f_set;           // F = offers above the QOPT partner
        std::vector<Pair> fixed_sequence;  // e_1..e_k fixed by repeated contraction
        PositionOrder pi;                  // position order inducing the tail
        OfferingOrder sigma;               // the full designed order
    };

    // All members refer to the input instance's index space. sigma consists of
    // F (firm-major input order, each firm's offers in preference order)
    // followed by the order induced by pi on the F-deleted instance.
    DesignPlan design_order(const MatchingInstance &);

    struct DesignReport
    {
        bool ok = false;
        DesignPlan plan;
        NamedMatching spe_matching, qopt_matching;
        std::vector<std::string> notes;   // structural checkpoints that failed
    };

    // Runs design_order, solves the game, and asserts spe == QOPT along with
    // the intermediate structural claims of the construction.
    DesignReport verify_design(const MatchingInstance &, std::size_t node_budget = 5000000);
}

#endif
