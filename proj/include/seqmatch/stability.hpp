/* Solution-concept checkers beyond classical stability: vNM-stable set,
 * essential stability via reassignment chains, first-choice stability and
 * maximality, Pareto efficiency, and exhaustive SPE-set enumeration. */

#ifndef SEQMATCH_STABILITY_HPP
#define SEQMATCH_STABILITY_HPP

#include <seqmatch/core.hpp>

#include <cstddef>
#include <set>
#include <vector>

namespace seqmatch
{
    enum class Side { Firms, Workers };

    // all partial matchings of I, deterministically ordered
    std::vector<Matching> enumerate_matchings(const MatchingInstance &,
            std::size_t cap = 2000000);

    // mu dominates mu' if some matched pair of mu blocks mu'
    bool dominates(const MatchingInstance &, const Matching & mu, const Matching & mu_prime);

    // The unique set V that is internally stable (no member dominates another)
    // and externally stable (every non-member is dominated by a member).
    // Computed by forced-in/forced-out propagation with a subset search over
    // any undecided remainder; the two defining predicates are re-verified.
    std::vector<Matching> vnm_stable_set(const MatchingInstance &, std::size_t cap = 2000000);

    struct ReassignmentChain
    {
        std::vector<int> workers;        // q_0, q_1, ...
        std::vector<int> firms;          // p_0, p_1, ...
        std::vector<Matching> matchings; // mu_0, mu_1, ...
        bool truncated = false;  // a displaced worker had no position to claim
        bool vacuous = false;    // the initiator did not keep the claimed position
    };

    // Worker-initiated chain: q_0 claims p_0, displacing p_0's occupant, who
    // claims her favourite blocking position, and so on until a vacant
    // position ends the chain. The blocking pair is vacuous if q_0 no longer
    // holds p_0 at the end.
    ReassignmentChain reassignment_chain(const MatchingInstance &, const Matching &, Pair blocker);

    bool is_essentially_stable(const MatchingInstance &, const Matching &, Side);

    bool is_first_choice_stable(const MatchingInstance &, const Matching &, Side);

    bool is_pareto_efficient(const MatchingInstance &, const Matching &, Side,
            std::size_t cap = 2000000);
    std::vector<Matching> pareto_set(const MatchingInstance &, Side, std::size_t cap = 2000000);

    std::vector<Matching> first_choice_maximal_set(const MatchingInstance &, Side,
            std::size_t cap = 2000000);

    // all SPE matchings over all consistent offering orders
    std::set<NamedMatching> enumerate_spe_set(const MatchingInstance &,
            unsigned long long order_cap = 100000);

    struct AnalysisReport
    {
        bool stable = false;
        std::vector<Pair> blocking;
        bool vnm_member = false;
        bool essentially_stable_workers = false;
        bool essentially_stable_firms = false;
        bool first_choice_stable_firms = false;
        bool first_choice_stable_workers = false;
        bool pareto_P = false;
        bool pareto_Q = false;
        bool fcm_P = false;
        bool fcm_Q = false;
    };

    AnalysisReport analyze(const MatchingInstance &, const Matching &,
            std::size_t matching_cap = 2000000);

    struct ImpossibilityReport
    {
        std::set<NamedMatching> spe_set;
        NamedMatching qopt, popt;
        bool qopt_in_spe = false;
        bool popt_in_spe = false;
        bool spe_meets_pareto_P = false;
        bool spe_meets_pareto_Q = false;
        bool spe_meets_fcm_P = false;
        bool spe_meets_fcm_Q = false;
    };

    ImpossibilityReport impossibility_report(const MatchingInstance &,
            unsigned long long order_cap = 100000, std::size_t matching_cap = 2000000);
}

#endif
