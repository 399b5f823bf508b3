/* Exact subgame-perfect-equilibrium computation for sequential matching games
 * by memoized backward induction over alive-pair bit masks, plus a value-type
 * reference solver, game-tree export, and the mutual-top-pair ordering check. */

#ifndef SEQMATCH_SPE_HPP
#define SEQMATCH_SPE_HPP

#include <seqmatch/core.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace seqmatch
{
    enum class FirstAction { Accept, Reject };

    struct SpeStats
    {
        std::uint64_t visited = 0;    // subgames evaluated (memo misses)
        std::uint64_t memo_hits = 0;
    };

    struct SpeResult
    {
        Matching matching;
        FirstAction first_action;   // action of the first offered worker
        SpeStats stats;
    };

    struct SpeOptions
    {
        std::size_t node_budget = 5000000;   // max memo entries
        bool parallel = false;               // evaluate sibling subtrees concurrently
    };

    // The unique SPE matching of (I, sigma). Subgames are identified by the
    // set of still-alive pairs, encoded as a bit mask over sigma positions:
    // the restricted instance and order are both functions of that set, so
    // the mask is a canonical memoization key.
    SpeResult solve_spe(const MatchingInstance &, const OfferingOrder &,
            const SpeOptions & = {});

    // Reference solver recursing over instance/order *values* through
    // delete/contract; validates the bit-mask engine. |E| must be small.
    SpeResult solve_spe_unmemoized(const MatchingInstance &, const OfferingOrder &,
            int max_pairs = 16);

    // Does the first offered worker accept?
    bool spem_decide(const MatchingInstance &, const OfferingOrder &,
            const SpeOptions & = {});

    // DOT text of the (binary) tree representation with the SPE path marked.
    std::string export_game_tree(const MatchingInstance &, const OfferingOrder &,
            std::size_t node_cap = 100000, const SpeOptions & = {});

    std::size_t count_game_tree_leaves(const MatchingInstance &, const OfferingOrder &,
            std::size_t node_cap = 100000);

    // Simultaneous reordering of both sides under which each agent prefers
    // earlier-indexed partners (verified by greedy peeling of mutually-top
    // pairs); instances admitting one have a unique stable matching.
    struct Reindexing
    {
        std::vector<int> firms, workers;   // original indices, new order
    };

    std::optional<Reindexing> check_eeckhout(const MatchingInstance &);
}

#endif
