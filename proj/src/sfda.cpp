#include <seqmatch/sfda.hpp>

#include <seqmatch/da.hpp>
#include <seqmatch/spe.hpp>

#include <algorithm>
#include <cassert>

using std::pair;
using std::string;
using std::vector;

namespace seqmatch
{
    auto classify(const MatchingInstance & inst) -> ListWidth
    {
        ListWidth width;
        for (int p = 0; p < inst.firm_count(); ++p)
            width.max_firm_list = std::max(width.max_firm_list, int(inst.firm_pref(p).size()));
        for (int q = 0; q < inst.worker_count(); ++q)
            width.max_worker_list = std::max(width.max_worker_list, int(inst.worker_pref(q).size()));
        return width;
    }

    auto run_sfda(const MatchingInstance & inst, const OfferingOrder & sigma) -> Matching
    {
        check_order(inst, sigma);

        MatchingInstance current = inst;
        vector<pair<string, string>> order;   // name-level view survives contraction
        for (auto e : sigma.sequence)
            order.emplace_back(inst.firm_name(e.firm), inst.worker_name(e.worker));

        NamedMatching fixed;
        for ( ; ; ) {
            auto qopt = q_oriented_da(current).matching;
            if (0 == qopt.size()) {
                // only possible with no pairs left: any single pair would
                // block the empty matching
                assert(0 == current.pair_count());
                break;
            }

            // the QOPT pair earliest in sigma (restriction preserves order)
            Pair chosen{ -1, -1 };
            for (auto & [fname, wname] : order) {
                int p = *current.firm_index(fname), q = *current.worker_index(wname);
                if (qopt.worker_of(p) == q) {
                    chosen = Pair{ p, q };
                    break;
                }
            }
            assert(chosen.firm != -1);

            string fname = current.firm_name(chosen.firm), wname = current.worker_name(chosen.worker);
            fixed.emplace(fname, wname);
            current = current.contract_pair(chosen);
            std::erase_if(order, [&] (const pair<string, string> & e) {
                    return e.first == fname || e.second == wname;
                });
        }

        return matching_from_named(inst, fixed);
    }

    auto verify_tractable_equivalence(const MatchingInstance & inst, const OfferingOrder & sigma)
        -> EquivalenceReport
    {
        auto width = classify(inst);
        if (width.max_firm_list > 2 && width.max_worker_list > 2)
            throw DomainError("verify_tractable_equivalence: instance is neither (2,*) nor (*,2)");

        EquivalenceReport report;
        report.sfda_matching = named_pairs(inst, run_sfda(inst, sigma));
        report.spe_matching = named_pairs(inst, solve_spe(inst, sigma).matching);
        report.equal = report.sfda_matching == report.spe_matching;
        return report;
    }
}
