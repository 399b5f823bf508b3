#include <seqmatch/random_gen.hpp>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

using std::vector;

namespace seqmatch
{
    auto random_instance(std::mt19937 & rng, const RandomInstanceConfig & cfg)
            -> MatchingInstance
    {
        std::uniform_int_distribution<int> nf(1, cfg.max_firms), nw(1, cfg.max_workers);
        int firms = nf(rng), workers = nw(rng);

        vector<Pair> candidates;
        for (int p = 0; p < firms; ++p)
            for (int q = 0; q < workers; ++q)
                candidates.push_back(Pair{ p, q });
        std::shuffle(candidates.begin(), candidates.end(), rng);

        std::bernoulli_distribution keep(cfg.density);
        vector<int> fdeg(firms, 0), wdeg(workers, 0);
        vector<vector<int>> accept_f(firms), accept_w(workers);
        int pairs = 0;
        for (auto e : candidates) {
            if (pairs >= cfg.max_pairs)
                break;
            if (fdeg[e.firm] >= cfg.max_firm_list || wdeg[e.worker] >= cfg.max_worker_list)
                continue;
            if (! keep(rng))
                continue;
            ++fdeg[e.firm];
            ++wdeg[e.worker];
            ++pairs;
            accept_f[e.firm].push_back(e.worker);
            accept_w[e.worker].push_back(e.firm);
        }

        RawInstance raw;
        for (int p = 0; p < firms; ++p) {
            raw.firms.push_back("p" + std::to_string(p + 1));
            std::shuffle(accept_f[p].begin(), accept_f[p].end(), rng);
            raw.firm_prefs.emplace_back();
            for (int q : accept_f[p])
                raw.firm_prefs.back().push_back("q" + std::to_string(q + 1));
        }
        for (int q = 0; q < workers; ++q) {
            raw.workers.push_back("q" + std::to_string(q + 1));
            std::shuffle(accept_w[q].begin(), accept_w[q].end(), rng);
            raw.worker_prefs.emplace_back();
            for (int p : accept_w[q])
                raw.worker_prefs.back().push_back("p" + std::to_string(p + 1));
        }
        return MatchingInstance::validate(raw);
    }

    auto random_order(std::mt19937 & rng, const MatchingInstance & inst) -> OfferingOrder
    {
        vector<int> next(inst.firm_count(), 0), open;
        for (int p = 0; p < inst.firm_count(); ++p)
            if (! inst.firm_pref(p).empty())
                open.push_back(p);

        OfferingOrder sigma;
        while (! open.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
            std::size_t i = pick(rng);
            int p = open[i];
            sigma.sequence.push_back(Pair{ p, inst.firm_pref(p)[next[p]] });
            if (++next[p] == int(inst.firm_pref(p).size())) {
                open[i] = open.back();
                open.pop_back();
            }
        }
        return sigma;
    }

    auto seed_from_env(std::uint64_t default_seed) -> std::uint64_t
    {
        if (const char * env = std::getenv("SEQMATCH_SEED"))
            return std::strtoull(env, nullptr, 10);
        return default_seed;
    }
}
