#include <seqmatch/da.hpp>

#include <algorithm>

using std::map;
using std::nullopt;
using std::optional;
using std::pair;
using std::set;
using std::vector;

namespace seqmatch
{
    auto q_oriented_da(const MatchingInstance & inst, bool reverse_scan) -> DaResult
    {
        int np = inst.firm_count(), nq = inst.worker_count();
        Matching mu(np, nq);
        DaTrace trace;

        // next_choice[q]: position in q's list of the firm q proposes to next
        // (or currently holds); advanced exactly on rejection
        vector<int> next_choice(nq, 0);

        vector<int> worker_scan(nq), firm_scan(np);
        for (int q = 0; q < nq; ++q)
            worker_scan[q] = reverse_scan ? nq - 1 - q : q;
        for (int p = 0; p < np; ++p)
            firm_scan[p] = reverse_scan ? np - 1 - p : p;

        for (int round = 1; ; ++round) {
            // simultaneous proposals by every unmatched worker with options left
            vector<vector<int>> proposers(np);
            DaRound rec;
            bool any = false;
            for (int q : worker_scan) {
                if (mu.firm_of(q) == -1 && next_choice[q] < int(inst.worker_pref(q).size())) {
                    int p = inst.worker_pref(q)[next_choice[q]];
                    proposers[p].push_back(q);
                    rec.proposals.push_back(Pair{ p, q });
                    any = true;
                }
            }
            if (! any)
                break;

            for (int p : firm_scan) {
                if (proposers[p].empty())
                    continue;
                int best = mu.worker_of(p);
                for (int q : proposers[p])
                    if (inst.firm_prefers(p, q, best))
                        best = q;
                if (best != mu.worker_of(p)) {
                    int displaced = mu.worker_of(p);
                    if (displaced != -1) {
                        mu.unmatch_firm(p);
                        ++next_choice[displaced];
                        rec.rejections.push_back(Pair{ p, displaced });
                    }
                    mu.match(p, best);
                    trace.acceptance_round[p] = round;
                    rec.acceptances.push_back(Pair{ p, best });
                }
                for (int q : proposers[p])
                    if (q != best) {
                        ++next_choice[q];
                        rec.rejections.push_back(Pair{ p, q });
                    }
            }
            trace.rounds.push_back(std::move(rec));
        }

        // acceptance_round only for firms matched in the output
        for (auto it = trace.acceptance_round.begin(); it != trace.acceptance_round.end(); )
            if (mu.worker_of(it->first) == -1)
                it = trace.acceptance_round.erase(it);
            else
                ++it;

        return DaResult{ std::move(mu), std::move(trace) };
    }

    auto p_oriented_da(const MatchingInstance & inst) -> Matching
    {
        auto mirrored = q_oriented_da(inst.transposed()).matching;
        Matching mu(inst.firm_count(), inst.worker_count());
        for (auto e : mirrored.pairs())
            mu.match(e.worker, e.firm);
        return mu;
    }

    auto alpha_set(const DaResult & result) -> set<int>
    {
        set<int> out;
        int earliest = -1;
        for (auto & [p, round] : result.trace.acceptance_round)
            if (earliest == -1 || round < earliest)
                earliest = round;
        for (auto & [p, round] : result.trace.acceptance_round)
            if (round == earliest)
                out.insert(p);
        return out;
    }

    auto alpha_set(const MatchingInstance & inst) -> set<int>
    {
        return alpha_set(q_oriented_da(inst));
    }

    auto matched_agents(const Matching & mu) -> pair<set<int>, set<int>>
    {
        pair<set<int>, set<int>> out;
        for (auto e : mu.pairs()) {
            out.first.insert(e.firm);
            out.second.insert(e.worker);
        }
        return out;
    }

    auto strengthened_blocking_pair(const MatchingInstance & inst, const Matching & mu_prime)
        -> optional<Pair>
    {
        check_matching(inst, mu_prime);
        auto da = q_oriented_da(inst);
        const auto & qopt = da.matching;

        if (mu_prime == qopt)
            throw DomainError("strengthened_blocking_pair: mu' equals the worker-optimal stable matching");
        for (int q = 0; q < inst.worker_count(); ++q)
            if (mu_prime.firm_of(q) != qopt.firm_of(q) &&
                    ! inst.worker_prefers(q, mu_prime.firm_of(q), qopt.firm_of(q)))
                throw DomainError("strengthened_blocking_pair: mu' does not worker-dominate QOPT");

        // Q' = strictly improving workers; P' = their mu'-partners. Pick the
        // firm in P' that accepted its QOPT partner's proposal last.
        int chosen_p = -1, chosen_round = -1;
        for (int q = 0; q < inst.worker_count(); ++q) {
            if (inst.worker_prefers(q, mu_prime.firm_of(q), qopt.firm_of(q))) {
                int p = mu_prime.firm_of(q);
                int round = da.trace.acceptance_round.at(p);
                if (round > chosen_round) {
                    chosen_round = round;
                    chosen_p = p;
                }
            }
        }
        if (chosen_p == -1)
            return nullopt;

        // top worker in p's list strictly between QOPT(p) and mu'(p) that
        // prefers p to its own QOPT partner
        int q_prime = mu_prime.worker_of(chosen_p);
        for (int q : inst.firm_pref(chosen_p)) {
            if (! inst.firm_prefers(chosen_p, qopt.worker_of(chosen_p), q))
                continue;
            if (! inst.firm_prefers(chosen_p, q, q_prime))
                continue;
            if (inst.worker_prefers(q, chosen_p, qopt.firm_of(q)))
                return Pair{ chosen_p, q };
        }
        return nullopt;
    }
}
