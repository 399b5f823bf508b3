/* Worker-proposing deferred acceptance with full trace, its firm-side mirror,
 * and helpers over the stable-matching structure. */

#ifndef SEQMATCH_DA_HPP
#define SEQMATCH_DA_HPP

#include <seqmatch/core.hpp>

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace seqmatch
{
    struct DaRound
    {
        std::vector<Pair> proposals;     // (firm proposed to, proposing worker)
        std::vector<Pair> acceptances;   // tentative holdings established this round
        std::vector<Pair> rejections;    // irrevocable rejections this round
    };

    struct DaTrace
    {
        std::vector<DaRound> rounds;
        // firm -> 1-based index of the while-iteration in which it accepted
        // the partner it ends up with; defined exactly for matched firms
        std::map<int, int> acceptance_round;
    };

    struct DaResult
    {
        Matching matching;
        DaTrace trace;
    };

    // QOPT(I). `reverse_scan` flips the in-round iteration order of workers
    // and firms; the output matching must not depend on it (tested).
    DaResult q_oriented_da(const MatchingInstance &, bool reverse_scan = false);

    // POPT(I), via the role-swapped instance.
    Matching p_oriented_da(const MatchingInstance &);

    // Matched firms whose acceptance_round is minimal; empty iff QOPT is empty.
    std::set<int> alpha_set(const MatchingInstance &);
    std::set<int> alpha_set(const DaResult &);

    std::pair<std::set<int>, std::set<int>> matched_agents(const Matching &);

    // Given mu' that strictly worker-dominates QOPT(I), return a blocking pair
    // (p, q) of mu' with p matched under mu' to an improving worker, q not
    // improving, and no q~ strictly between q and QOPT(p) in p's list that
    // prefers p to its QOPT partner. Test-surface operation.
    std::optional<Pair> strengthened_blocking_pair(const MatchingInstance &, const Matching & mu_prime);
}

#endif
