#include <seqmatch/stability.hpp>

#include <seqmatch/da.hpp>
#include <seqmatch/spe.hpp>

#include <algorithm>

using std::set;
using std::size_t;
using std::vector;

namespace seqmatch
{
    namespace
    {
        void enum_matchings_rec(const MatchingInstance & inst, int p, Matching & partial,
                vector<Matching> & out, size_t cap)
        {
            if (p == inst.firm_count()) {
                if (out.size() >= cap)
                    throw CapExceeded("matching enumeration cap of " + std::to_string(cap) +
                            " exceeded");
                out.push_back(partial);
                return;
            }
            enum_matchings_rec(inst, p + 1, partial, out, cap);   // p unmatched
            for (int q : inst.firm_pref(p))
                if (partial.firm_of(q) == -1) {
                    partial.match(p, q);
                    enum_matchings_rec(inst, p + 1, partial, out, cap);
                    partial.unmatch_firm(p);
                }
        }

        auto transpose_matching(const MatchingInstance & inst, const Matching & mu) -> Matching
        {
            Matching out(inst.worker_count(), inst.firm_count());
            for (auto e : mu.pairs())
                out.match(e.worker, e.firm);
            return out;
        }
    }

    auto enumerate_matchings(const MatchingInstance & inst, size_t cap) -> vector<Matching>
    {
        vector<Matching> out;
        Matching partial(inst.firm_count(), inst.worker_count());
        enum_matchings_rec(inst, 0, partial, out, cap);
        return out;
    }

    auto dominates(const MatchingInstance & inst, const Matching & mu, const Matching & mu_prime)
        -> bool
    {
        for (auto [p, q] : mu.pairs())
            if (inst.firm_prefers(p, q, mu_prime.worker_of(p)) &&
                    inst.worker_prefers(q, p, mu_prime.firm_of(q)))
                return true;
        return false;
    }

    auto vnm_stable_set(const MatchingInstance & inst, size_t cap) -> vector<Matching>
    {
        auto all = enumerate_matchings(inst, cap);
        int n = int(all.size());

        vector<vector<bool>> dom(n, vector<bool>(n, false));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b)
                    dom[a][b] = dominates(inst, all[a], all[b]);

        enum Status { Undecided, In, Out };
        vector<Status> status(n, Undecided);

        // forced-in/forced-out propagation: an undominated matching must be
        // in; anything dominated by an in-member must be out; a matching all
        // of whose dominators are out must be in
        for (bool changed = true; changed; ) {
            changed = false;
            for (int b = 0; b < n; ++b) {
                if (status[b] != Undecided)
                    continue;
                bool all_dominators_out = true, dominated_by_in = false;
                for (int a = 0; a < n; ++a)
                    if (dom[a][b]) {
                        if (status[a] != Out)
                            all_dominators_out = false;
                        if (status[a] == In)
                            dominated_by_in = true;
                    }
                if (dominated_by_in) {
                    status[b] = Out;
                    changed = true;
                }
                else if (all_dominators_out) {
                    status[b] = In;
                    changed = true;
                }
            }
        }

        vector<int> undecided;
        for (int b = 0; b < n; ++b)
            if (status[b] == Undecided)
                undecided.push_back(b);

        auto valid = [&] (const vector<bool> & in_set) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (a != b && dom[a][b] && in_set[a] && in_set[b])
                        return false;   // internal stability violated
            for (int b = 0; b < n; ++b) {
                if (in_set[b])
                    continue;
                bool covered = false;
                for (int a = 0; a < n && ! covered; ++a)
                    if (in_set[a] && dom[a][b])
                        covered = true;
                if (! covered)
                    return false;       // external stability violated
            }
            return true;
        };

        vector<bool> in_set(n, false);
        for (int b = 0; b < n; ++b)
            in_set[b] = (status[b] == In);

        if (! undecided.empty()) {
            if (undecided.size() > 24)
                throw CapExceeded("vNM propagation left " + std::to_string(undecided.size()) +
                        " matchings undecided; subset search infeasible");
            bool found = false;
            for (unsigned long long pick = 0; pick < (1ull << undecided.size()) && ! found; ++pick) {
                for (size_t i = 0; i < undecided.size(); ++i)
                    in_set[undecided[i]] = (pick >> i) & 1;
                found = valid(in_set);
            }
            if (! found)
                throw DomainError("internal error: no completion satisfies the stable-set axioms");
        }
        else if (! valid(in_set))
            throw DomainError("internal error: propagated stable set fails its defining axioms");

        vector<Matching> out;
        for (int b = 0; b < n; ++b)
            if (in_set[b])
                out.push_back(all[b]);
        return out;
    }

    auto reassignment_chain(const MatchingInstance & inst, const Matching & mu, Pair blocker)
        -> ReassignmentChain
    {
        check_matching(inst, mu);
        auto [p0, q0] = blocker;
        if (! (inst.firm_prefers(p0, q0, mu.worker_of(p0)) &&
                    inst.worker_prefers(q0, p0, mu.firm_of(q0))))
            throw DomainError("reassignment_chain: the given pair does not block the matching");

        ReassignmentChain chain;
        chain.workers.push_back(q0);
        chain.firms.push_back(p0);
        chain.matchings.push_back(mu);

        for ( ; ; ) {
            const Matching & mu_k = chain.matchings.back();
            int p_k = chain.firms.back(), q_k = chain.workers.back();

            if (chain.matchings.size() > 1 && mu_k.worker_of(p_k) == -1)
                break;   // claimed position is vacant: the chain is complete

            int displaced = mu_k.worker_of(p_k);
            Matching mu_next = mu_k;
            mu_next.unmatch_firm(p_k);
            if (mu_next.firm_of(q_k) != -1)
                mu_next.unmatch_firm(mu_next.firm_of(q_k));
            mu_next.match(p_k, q_k);
            chain.matchings.push_back(mu_next);

            if (-1 == displaced)
                break;   // first claim took a vacant position; nobody displaced

            chain.workers.push_back(displaced);
            int claim = -1;
            for (int p : inst.worker_pref(displaced))
                if (inst.firm_prefers(p, displaced, mu_next.worker_of(p)) &&
                        inst.worker_prefers(displaced, p, mu_next.firm_of(displaced))) {
                    claim = p;
                    break;
                }
            if (-1 == claim) {
                chain.truncated = true;   // displaced worker cannot claim anywhere
                break;
            }
            chain.firms.push_back(claim);
        }

        chain.vacuous = chain.matchings.back().firm_of(q0) != p0;
        return chain;
    }

    namespace
    {
        auto essentially_stable_workers(const MatchingInstance & inst, const Matching & mu) -> bool
        {
            for (auto blocker : blocking_pairs(inst, mu))
                if (! reassignment_chain(inst, mu, blocker).vacuous)
                    return false;
            return true;
        }
    }

    auto is_essentially_stable(const MatchingInstance & inst, const Matching & mu, Side side) -> bool
    {
        if (side == Side::Workers)
            return essentially_stable_workers(inst, mu);
        return essentially_stable_workers(inst.transposed(), transpose_matching(inst, mu));
    }

    auto is_first_choice_stable(const MatchingInstance & inst, const Matching & mu, Side side) -> bool
    {
        for (auto [p, q] : blocking_pairs(inst, mu)) {
            if (side == Side::Firms && inst.firm_pref(p).front() == q)
                return false;
            if (side == Side::Workers && inst.worker_pref(q).front() == p)
                return false;
        }
        return true;
    }

    namespace
    {
        // mu' side-dominates mu: everyone on the side weakly prefers mu',
        // and the matchings differ
        auto side_dominates(const MatchingInstance & inst, const Matching & mu_prime,
                const Matching & mu, Side side) -> bool
        {
            if (mu_prime == mu)
                return false;
            if (side == Side::Firms) {
                for (int p = 0; p < inst.firm_count(); ++p)
                    if (mu_prime.worker_of(p) != mu.worker_of(p) &&
                            ! inst.firm_prefers(p, mu_prime.worker_of(p), mu.worker_of(p)))
                        return false;
            }
            else {
                for (int q = 0; q < inst.worker_count(); ++q)
                    if (mu_prime.firm_of(q) != mu.firm_of(q) &&
                            ! inst.worker_prefers(q, mu_prime.firm_of(q), mu.firm_of(q)))
                        return false;
            }
            return true;
        }
    }

    auto is_pareto_efficient(const MatchingInstance & inst, const Matching & mu, Side side,
            size_t cap) -> bool
    {
        check_matching(inst, mu);
        for (auto & candidate : enumerate_matchings(inst, cap))
            if (side_dominates(inst, candidate, mu, side))
                return false;
        return true;
    }

    auto pareto_set(const MatchingInstance & inst, Side side, size_t cap) -> vector<Matching>
    {
        auto all = enumerate_matchings(inst, cap);
        vector<Matching> out;
        for (auto & mu : all) {
            bool efficient = true;
            for (auto & candidate : all)
                if (side_dominates(inst, candidate, mu, side)) {
                    efficient = false;
                    break;
                }
            if (efficient)
                out.push_back(mu);
        }
        return out;
    }

    auto first_choice_maximal_set(const MatchingInstance & inst, Side side, size_t cap)
        -> vector<Matching>
    {
        auto top_count = [&] (const Matching & mu) {
            int n = 0;
            for (auto [p, q] : mu.pairs()) {
                if (side == Side::Firms && inst.firm_pref(p).front() == q)
                    ++n;
                if (side == Side::Workers && inst.worker_pref(q).front() == p)
                    ++n;
            }
            return n;
        };

        auto all = enumerate_matchings(inst, cap);
        int best = 0;
        for (auto & mu : all)
            best = std::max(best, top_count(mu));
        vector<Matching> out;
        for (auto & mu : all)
            if (top_count(mu) == best)
                out.push_back(mu);
        return out;
    }

    auto enumerate_spe_set(const MatchingInstance & inst, unsigned long long order_cap)
        -> set<NamedMatching>
    {
        set<NamedMatching> out;
        enumerate_consistent_orders(inst, order_cap, [&] (const OfferingOrder & sigma) {
                out.insert(named_pairs(inst, solve_spe(inst, sigma).matching));
            });
        if (0 == inst.pair_count())
            out.insert(NamedMatching{});
        return out;
    }

    auto analyze(const MatchingInstance & inst, const Matching & mu, size_t matching_cap)
        -> AnalysisReport
    {
        check_matching(inst, mu);
        AnalysisReport report;
        report.blocking = blocking_pairs(inst, mu);
        report.stable = report.blocking.empty();

        auto vnm = vnm_stable_set(inst, matching_cap);
        report.vnm_member = std::find(vnm.begin(), vnm.end(), mu) != vnm.end();

        report.essentially_stable_workers = is_essentially_stable(inst, mu, Side::Workers);
        report.essentially_stable_firms = is_essentially_stable(inst, mu, Side::Firms);
        report.first_choice_stable_firms = is_first_choice_stable(inst, mu, Side::Firms);
        report.first_choice_stable_workers = is_first_choice_stable(inst, mu, Side::Workers);
        report.pareto_P = is_pareto_efficient(inst, mu, Side::Firms, matching_cap);
        report.pareto_Q = is_pareto_efficient(inst, mu, Side::Workers, matching_cap);

        auto in_set = [&] (const vector<Matching> & s) {
            return std::find(s.begin(), s.end(), mu) != s.end();
        };
        report.fcm_P = in_set(first_choice_maximal_set(inst, Side::Firms, matching_cap));
        report.fcm_Q = in_set(first_choice_maximal_set(inst, Side::Workers, matching_cap));
        return report;
    }

    auto impossibility_report(const MatchingInstance & inst, unsigned long long order_cap,
            size_t matching_cap) -> ImpossibilityReport
    {
        ImpossibilityReport report;
        report.spe_set = enumerate_spe_set(inst, order_cap);
        report.qopt = named_pairs(inst, q_oriented_da(inst).matching);
        report.popt = named_pairs(inst, p_oriented_da(inst));
        report.qopt_in_spe = report.spe_set.contains(report.qopt);
        report.popt_in_spe = report.spe_set.contains(report.popt);

        auto meets = [&] (const vector<Matching> & family) {
            for (auto & mu : family)
                if (report.spe_set.contains(named_pairs(inst, mu)))
                    return true;
            return false;
        };
        report.spe_meets_pareto_P = meets(pareto_set(inst, Side::Firms, matching_cap));
        report.spe_meets_pareto_Q = meets(pareto_set(inst, Side::Workers, matching_cap));
        report.spe_meets_fcm_P = meets(first_choice_maximal_set(inst, Side::Firms, matching_cap));
        report.spe_meets_fcm_Q = meets(first_choice_maximal_set(inst, Side::Workers, matching_cap));
        return report;
    }
}
