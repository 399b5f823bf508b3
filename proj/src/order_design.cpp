#include <seqmatch/order_design.hpp>

#include <seqmatch/da.hpp>
#include <seqmatch/spe.hpp>

#include <algorithm>

using std::pair;
using std::string;
using std::vector;

namespace seqmatch
{
    auto design_order(const MatchingInstance & inst) -> DesignPlan
    {
        DesignPlan plan;
        auto qopt = q_oriented_da(inst).matching;

        // F: each firm's offers strictly above its stable partner (everything,
        // for firms unmatched in QOPT)
        for (int p = 0; p < inst.firm_count(); ++p)
            for (int q : inst.firm_pref(p)) {
                if (q == qopt.worker_of(p))
                    break;
                plan.f_set.push_back(Pair{ p, q });
            }

        MatchingInstance pruned = inst;   // I': deletion keeps agent indices
        for (auto e : plan.f_set)
            pruned = pruned.delete_pair(e);

        // fix QOPT pairs in deferred-acceptance acceptance order; ties broken
        // towards the smallest input-index firm
        MatchingInstance current = pruned;
        for ( ; ; ) {
            auto da = q_oriented_da(current);
            if (0 == da.matching.size())
                break;
            int best_orig = -1, best_cur = -1;
            for (int p : alpha_set(da)) {
                int orig = *inst.firm_index(current.firm_name(p));
                if (best_orig == -1 || orig < best_orig) {
                    best_orig = orig;
                    best_cur = p;
                }
            }
            int q_cur = da.matching.worker_of(best_cur);
            plan.fixed_sequence.push_back(Pair{ best_orig,
                    *inst.worker_index(current.worker_name(q_cur)) });
            current = current.contract_pair(Pair{ best_cur, q_cur });
        }

        vector<bool> placed(inst.firm_count(), false);
        for (auto e : plan.fixed_sequence) {
            plan.pi.firms.push_back(e.firm);
            placed[e.firm] = true;
        }
        for (int p = 0; p < inst.firm_count(); ++p)
            if (! placed[p])
                plan.pi.firms.push_back(p);

        plan.sigma.sequence = plan.f_set;
        for (int p : plan.pi.firms)
            for (int q : pruned.firm_pref(p))
                plan.sigma.sequence.push_back(Pair{ p, q });

        return plan;
    }

    auto verify_design(const MatchingInstance & inst, std::size_t node_budget) -> DesignReport
    {
        DesignReport report;
        report.plan = design_order(inst);
        const auto & plan = report.plan;

        try {
            check_order(inst, plan.sigma);
        }
        catch (const DomainError & e) {
            report.notes.push_back(string("designed order invalid: ") + e.what());
        }

        auto qopt = q_oriented_da(inst).matching;
        report.qopt_matching = named_pairs(inst, qopt);

        // the first |F| positions are exactly F
        std::set<Pair> f_set(plan.f_set.begin(), plan.f_set.end());
        std::set<Pair> head(plan.sigma.sequence.begin(),
                plan.sigma.sequence.begin() + std::min(plan.f_set.size(), plan.sigma.sequence.size()));
        if (head != f_set)
            report.notes.push_back("F is not the prefix of the designed order");
        for (auto e : plan.f_set)
            if (qopt.worker_of(e.firm) == e.worker)
                report.notes.push_back("F intersects the stable matching");

        MatchingInstance pruned = inst;
        for (auto e : plan.f_set)
            pruned = pruned.delete_pair(e);

        auto qopt_pruned = q_oriented_da(pruned).matching;
        if (named_pairs(pruned, qopt_pruned) != report.qopt_matching)
            report.notes.push_back("QOPT changed when deleting F");
        for (auto e : qopt_pruned.pairs())
            if (pruned.firm_pref(e.firm).front() != e.worker)
                report.notes.push_back("a stable partner does not top its firm's pruned list");

        // the fixed sequence must peel QOPT one pair at a time, and each
        // fixed pair must be accepted in the residual subgame
        {
            MatchingInstance current = pruned;
            vector<pair<string, string>> order;   // sigma' at the current step
            for (std::size_t i = plan.f_set.size(); i < plan.sigma.sequence.size(); ++i) {
                auto e = plan.sigma.sequence[i];
                order.emplace_back(inst.firm_name(e.firm), inst.worker_name(e.worker));
            }

            auto expected = named_pairs(pruned, qopt_pruned);
            for (auto e_orig : plan.fixed_sequence) {
                string fname = inst.firm_name(e_orig.firm), wname = inst.worker_name(e_orig.worker);
                if (! expected.contains({ fname, wname })) {
                    report.notes.push_back("fixed pair (" + fname + ", " + wname +
                            ") not in the residual stable matching");
                    break;
                }

                int p = *current.firm_index(fname), q = *current.worker_index(wname);

                // acceptance checkpoint: q prefers p to her assignment in the
                // subgame where this offer is declined
                {
                    auto declined = current.delete_pair(Pair{ p, q });
                    OfferingOrder declined_order;
                    for (auto & [f2, w2] : order)
                        if (! (f2 == fname && w2 == wname))
                            declined_order.sequence.push_back(Pair{ *declined.firm_index(f2),
                                    *declined.worker_index(w2) });
                    auto spe_declined = solve_spe(declined, declined_order,
                            SpeOptions{ node_budget, false });
                    int alt = spe_declined.matching.firm_of(q);
                    if (! current.worker_prefers(q, p, alt))
                        report.notes.push_back("worker " + wname +
                                " would not accept the fixed offer from " + fname);
                }

                current = current.contract_pair(Pair{ p, q });
                std::erase_if(order, [&] (const pair<string, string> & x) {
                        return x.first == fname || x.second == wname;
                    });
                expected.erase({ fname, wname });

                auto residual = named_pairs(current, q_oriented_da(current).matching);
                if (residual != expected) {
                    report.notes.push_back("contraction by (" + fname + ", " + wname +
                            ") did not peel exactly one stable pair");
                    break;
                }
            }
        }

        // checkpoint on the pruned game, then the full equality
        {
            OfferingOrder pruned_order = induced_order(pruned, plan.pi);
            auto spe_pruned = solve_spe(pruned, pruned_order, SpeOptions{ node_budget, false });
            if (named_pairs(pruned, spe_pruned.matching) != report.qopt_matching)
                report.notes.push_back("SPE of the pruned game differs from QOPT");
        }

        auto spe = solve_spe(inst, plan.sigma, SpeOptions{ node_budget, false });
        report.spe_matching = named_pairs(inst, spe.matching);
        report.ok = report.notes.empty() && report.spe_matching == report.qopt_matching;
        return report;
    }
}
