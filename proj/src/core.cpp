#include <seqmatch/core.hpp>

#include <algorithm>
#include <sstream>
#include <unordered_map>

using std::function;
using std::nullopt;
using std::optional;
using std::set;
using std::string;
using std::to_string;
using std::vector;

namespace seqmatch
{
    namespace
    {
        auto join_violations(const vector<string> & v) -> string
        {
            std::ostringstream out;
            out << "invalid instance (" << v.size() << " violation" << (v.size() == 1 ? "" : "s") << "):";
            for (auto & s : v)
                out << "\n  - " << s;
            return out.str();
        }
    }

    ValidationError::ValidationError(vector<string> v) :
        DomainError(join_violations(v)),
        violations(move(v))
    {
    }

    auto MatchingInstance::validate(const RawInstance & raw) -> MatchingInstance
    {
        vector<string> bad;

        if (raw.firm_prefs.size() != raw.firms.size())
            bad.push_back("firm_prefs has " + to_string(raw.firm_prefs.size()) +
                    " entries for " + to_string(raw.firms.size()) + " firms");
        if (raw.worker_prefs.size() != raw.workers.size())
            bad.push_back("worker_prefs has " + to_string(raw.worker_prefs.size()) +
                    " entries for " + to_string(raw.workers.size()) + " workers");
        if (! bad.empty())
            throw ValidationError(move(bad));

        std::unordered_map<string, int> firm_idx, worker_idx;
        for (int p = 0; p < int(raw.firms.size()); ++p)
            if (! firm_idx.emplace(raw.firms[p], p).second)
                bad.push_back("duplicate firm identifier '" + raw.firms[p] + "'");
        for (int q = 0; q < int(raw.workers.size()); ++q)
            if (! worker_idx.emplace(raw.workers[q], q).second)
                bad.push_back("duplicate worker identifier '" + raw.workers[q] + "'");
        for (auto & [name, _] : firm_idx)
            if (worker_idx.contains(name))
                bad.push_back("identifier '" + name + "' used on both sides");
        if (! bad.empty())
            throw ValidationError(move(bad));

        MatchingInstance inst;
        inst._firm_names = raw.firms;
        inst._worker_names = raw.workers;
        inst._firm_prefs.resize(raw.firms.size());
        inst._worker_prefs.resize(raw.workers.size());

        for (int p = 0; p < int(raw.firms.size()); ++p) {
            set<int> seen;
            for (auto & wname : raw.firm_prefs[p]) {
                auto it = worker_idx.find(wname);
                if (it == worker_idx.end()) {
                    bad.push_back("firm '" + raw.firms[p] + "' lists unknown worker '" + wname + "'");
                    continue;
                }
                if (! seen.insert(it->second).second)
                    bad.push_back("firm '" + raw.firms[p] + "' lists worker '" + wname + "' twice");
                else
                    inst._firm_prefs[p].push_back(it->second);
            }
        }
        for (int q = 0; q < int(raw.workers.size()); ++q) {
            set<int> seen;
            for (auto & fname : raw.worker_prefs[q]) {
                auto it = firm_idx.find(fname);
                if (it == firm_idx.end()) {
                    bad.push_back("worker '" + raw.workers[q] + "' lists unknown firm '" + fname + "'");
                    continue;
                }
                if (! seen.insert(it->second).second)
                    bad.push_back("worker '" + raw.workers[q] + "' lists firm '" + fname + "' twice");
                else
                    inst._worker_prefs[q].push_back(it->second);
            }
        }

        // symmetry: (p,q) is a pair iff both sides mention it
        for (int p = 0; p < inst.firm_count(); ++p)
            for (int q : inst._firm_prefs[p])
                if (std::find(inst._worker_prefs[q].begin(), inst._worker_prefs[q].end(), p) ==
                        inst._worker_prefs[q].end())
                    bad.push_back("firm '" + inst._firm_names[p] + "' lists worker '" +
                            inst._worker_names[q] + "' but not vice versa");
        for (int q = 0; q < inst.worker_count(); ++q)
            for (int p : inst._worker_prefs[q])
                if (std::find(inst._firm_prefs[p].begin(), inst._firm_prefs[p].end(), q) ==
                        inst._firm_prefs[p].end())
                    bad.push_back("worker '" + inst._worker_names[q] + "' lists firm '" +
                            inst._firm_names[p] + "' but not vice versa");

        if (! bad.empty())
            throw ValidationError(move(bad));

        inst.rebuild_ranks();
        return inst;
    }

    void MatchingInstance::rebuild_ranks()
    {
        _firm_rank.assign(firm_count(), vector<int>(worker_count(), -1));
        _worker_rank.assign(worker_count(), vector<int>(firm_count(), -1));
        _pair_count = 0;
        for (int p = 0; p < firm_count(); ++p)
            for (int r = 0; r < int(_firm_prefs[p].size()); ++r) {
                _firm_rank[p][_firm_prefs[p][r]] = r;
                ++_pair_count;
            }
        for (int q = 0; q < worker_count(); ++q)
            for (int r = 0; r < int(_worker_prefs[q].size()); ++r)
                _worker_rank[q][_worker_prefs[q][r]] = r;
    }

    auto MatchingInstance::firm_index(const string & name) const -> optional<int>
    {
        for (int p = 0; p < firm_count(); ++p)
            if (_firm_names[p] == name)
                return p;
        return nullopt;
    }

    auto MatchingInstance::worker_index(const string & name) const -> optional<int>
    {
        for (int q = 0; q < worker_count(); ++q)
            if (_worker_names[q] == name)
                return q;
        return nullopt;
    }

    auto MatchingInstance::firm_prefers(int p, int q1, int q2) const -> bool
    {
        int r1 = q1 < 0 ? -1 : _firm_rank[p][q1];
        int r2 = q2 < 0 ? -1 : _firm_rank[p][q2];
        if (r1 < 0)
            return false;
        return r2 < 0 || r1 < r2;
    }

    auto MatchingInstance::worker_prefers(int q, int p1, int p2) const -> bool
    {
        int r1 = p1 < 0 ? -1 : _worker_rank[q][p1];
        int r2 = p2 < 0 ? -1 : _worker_rank[q][p2];
        if (r1 < 0)
            return false;
        return r2 < 0 || r1 < r2;
    }

    auto MatchingInstance::pairs() const -> vector<Pair>
    {
        vector<Pair> out;
        out.reserve(_pair_count);
        for (int p = 0; p < firm_count(); ++p)
            for (int q : _firm_prefs[p])
                out.push_back(Pair{ p, q });
        return out;
    }

    auto MatchingInstance::to_raw() const -> RawInstance
    {
        RawInstance raw;
        raw.firms = _firm_names;
        raw.workers = _worker_names;
        raw.firm_prefs.resize(firm_count());
        raw.worker_prefs.resize(worker_count());
        for (int p = 0; p < firm_count(); ++p)
            for (int q : _firm_prefs[p])
                raw.firm_prefs[p].push_back(_worker_names[q]);
        for (int q = 0; q < worker_count(); ++q)
            for (int p : _worker_prefs[q])
                raw.worker_prefs[q].push_back(_firm_names[p]);
        return raw;
    }

    auto MatchingInstance::delete_pair(Pair e) const -> MatchingInstance
    {
        if (e.firm < 0 || e.firm >= firm_count() || e.worker < 0 || e.worker >= worker_count() ||
                ! acceptable(e.firm, e.worker))
            throw DomainError("delete_pair: pair not in E");
        MatchingInstance out = *this;
        std::erase(out._firm_prefs[e.firm], e.worker);
        std::erase(out._worker_prefs[e.worker], e.firm);
        out.rebuild_ranks();
        return out;
    }

    auto MatchingInstance::contract_pair(Pair e) const -> MatchingInstance
    {
        if (e.firm < 0 || e.firm >= firm_count() || e.worker < 0 || e.worker >= worker_count() ||
                ! acceptable(e.firm, e.worker))
            throw DomainError("contract_pair: pair not in E");

        MatchingInstance out;
        vector<int> firm_map(firm_count(), -1), worker_map(worker_count(), -1);
        for (int p = 0; p < firm_count(); ++p)
            if (p != e.firm) {
                firm_map[p] = int(out._firm_names.size());
                out._firm_names.push_back(_firm_names[p]);
            }
        for (int q = 0; q < worker_count(); ++q)
            if (q != e.worker) {
                worker_map[q] = int(out._worker_names.size());
                out._worker_names.push_back(_worker_names[q]);
            }
        out._firm_prefs.resize(out._firm_names.size());
        out._worker_prefs.resize(out._worker_names.size());
        for (int p = 0; p < firm_count(); ++p)
            if (p != e.firm)
                for (int q : _firm_prefs[p])
                    if (q != e.worker)
                        out._firm_prefs[firm_map[p]].push_back(worker_map[q]);
        for (int q = 0; q < worker_count(); ++q)
            if (q != e.worker)
                for (int p : _worker_prefs[q])
                    if (p != e.firm)
                        out._worker_prefs[worker_map[q]].push_back(firm_map[p]);
        out.rebuild_ranks();
        return out;
    }

    auto MatchingInstance::transposed() const -> MatchingInstance
    {
        MatchingInstance out;
        out._firm_names = _worker_names;
        out._worker_names = _firm_names;
        out._firm_prefs = _worker_prefs;
        out._worker_prefs = _firm_prefs;
        out.rebuild_ranks();
        return out;
    }

    auto disjoint_union(const MatchingInstance & a, const MatchingInstance & b) -> MatchingInstance
    {
        RawInstance ra = a.to_raw(), rb = b.to_raw();
        RawInstance out = ra;
        out.firms.insert(out.firms.end(), rb.firms.begin(), rb.firms.end());
        out.workers.insert(out.workers.end(), rb.workers.begin(), rb.workers.end());
        out.firm_prefs.insert(out.firm_prefs.end(), rb.firm_prefs.begin(), rb.firm_prefs.end());
        out.worker_prefs.insert(out.worker_prefs.end(), rb.worker_prefs.begin(), rb.worker_prefs.end());
        return MatchingInstance::validate(out);
    }

    Matching::Matching(int firm_count, int worker_count) :
        _worker_of_firm(firm_count, -1),
        _firm_of_worker(worker_count, -1)
    {
    }

    void Matching::match(int p, int q)
    {
        if (_worker_of_firm.at(p) != -1 || _firm_of_worker.at(q) != -1)
            throw DomainError("match: agent already matched");
        _worker_of_firm[p] = q;
        _firm_of_worker[q] = p;
    }

    void Matching::unmatch_firm(int p)
    {
        int q = _worker_of_firm.at(p);
        if (q != -1) {
            _firm_of_worker[q] = -1;
            _worker_of_firm[p] = -1;
        }
    }

    auto Matching::size() const -> int
    {
        int n = 0;
        for (int q : _worker_of_firm)
            if (q != -1)
                ++n;
        return n;
    }

    auto Matching::pairs() const -> vector<Pair>
    {
        vector<Pair> out;
        for (int p = 0; p < firm_count(); ++p)
            if (_worker_of_firm[p] != -1)
                out.push_back(Pair{ p, _worker_of_firm[p] });
        return out;
    }

    auto named_pairs(const MatchingInstance & inst, const Matching & mu) -> NamedMatching
    {
        NamedMatching out;
        for (auto e : mu.pairs())
            out.emplace(inst.firm_name(e.firm), inst.worker_name(e.worker));
        return out;
    }

    auto matching_from_named(const MatchingInstance & inst, const NamedMatching & named) -> Matching
    {
        Matching mu(inst.firm_count(), inst.worker_count());
        for (auto & [fname, wname] : named) {
            auto p = inst.firm_index(fname), q = inst.worker_index(wname);
            if (! p || ! q || ! inst.acceptable(*p, *q))
                throw DomainError("matching pair (" + fname + ", " + wname + ") not in instance");
            mu.match(*p, *q);
        }
        return mu;
    }

    void check_matching(const MatchingInstance & inst, const Matching & mu)
    {
        if (mu.firm_count() != inst.firm_count() || mu.worker_count() != inst.worker_count())
            throw DomainError("matching has wrong agent counts for instance");
        for (auto e : mu.pairs())
            if (! inst.acceptable(e.firm, e.worker))
                throw DomainError("matched pair (" + inst.firm_name(e.firm) + ", " +
                        inst.worker_name(e.worker) + ") is not acceptable");
    }

    void check_order(const MatchingInstance & inst, const OfferingOrder & sigma)
    {
        if (int(sigma.sequence.size()) != inst.pair_count())
            throw DomainError("offering order has " + to_string(sigma.sequence.size()) +
                    " entries for |E| = " + to_string(inst.pair_count()));
        set<Pair> seen;
        vector<int> last_rank(inst.firm_count(), -1);
        for (auto e : sigma.sequence) {
            if (e.firm < 0 || e.firm >= inst.firm_count() || e.worker < 0 ||
                    e.worker >= inst.worker_count() || ! inst.acceptable(e.firm, e.worker))
                throw DomainError("offering order contains a pair outside E");
            if (! seen.insert(e).second)
                throw DomainError("offering order repeats pair (" + inst.firm_name(e.firm) +
                        ", " + inst.worker_name(e.worker) + ")");
            int r = inst.firm_rank(e.firm, e.worker);
            if (r <= last_rank[e.firm])
                throw DomainError("offering order is inconsistent with firm '" +
                        inst.firm_name(e.firm) + "''s preferences");
            last_rank[e.firm] = r;
        }
    }

    auto delete_from_order(const OfferingOrder & sigma, Pair e) -> OfferingOrder
    {
        OfferingOrder out;
        bool found = false;
        for (auto x : sigma.sequence) {
            if (x == e)
                found = true;
            else
                out.sequence.push_back(x);
        }
        if (! found)
            throw DomainError("delete_from_order: pair not in order");
        return out;
    }

    auto contract_order(const OfferingOrder & sigma, Pair e) -> OfferingOrder
    {
        OfferingOrder out;
        bool found = false;
        for (auto x : sigma.sequence) {
            if (x == e)
                found = true;
            if (x.firm != e.firm && x.worker != e.worker)
                // indices above the removed agents shift down by one
                out.sequence.push_back(Pair{ x.firm - (x.firm > e.firm ? 1 : 0),
                        x.worker - (x.worker > e.worker ? 1 : 0) });
        }
        if (! found)
            throw DomainError("contract_order: pair not in order");
        return out;
    }

    auto induced_order(const MatchingInstance & inst, const PositionOrder & pi) -> OfferingOrder
    {
        if (int(pi.firms.size()) != inst.firm_count())
            throw DomainError("position order has wrong length");
        vector<bool> seen(inst.firm_count(), false);
        OfferingOrder out;
        for (int p : pi.firms) {
            if (p < 0 || p >= inst.firm_count() || seen[p])
                throw DomainError("position order is not a permutation of the firms");
            seen[p] = true;
            for (int q : inst.firm_pref(p))
                out.sequence.push_back(Pair{ p, q });
        }
        return out;
    }

    auto is_position_based(const MatchingInstance & inst, const OfferingOrder & sigma)
        -> optional<PositionOrder>
    {
        check_order(inst, sigma);
        PositionOrder pi;
        vector<bool> closed(inst.firm_count(), false);
        int current = -1;
        for (auto e : sigma.sequence) {
            if (e.firm != current) {
                if (closed[e.firm])
                    return nullopt;
                if (current != -1)
                    closed[current] = true;
                current = e.firm;
                pi.firms.push_back(current);
            }
        }
        // firms with empty lists never appear; append them in input order
        for (int p = 0; p < inst.firm_count(); ++p)
            if (inst.firm_pref(p).empty())
                pi.firms.push_back(p);
        if (int(pi.firms.size()) != inst.firm_count())
            return nullopt;
        return pi;
    }

    auto count_consistent_orders(const MatchingInstance & inst, unsigned long long saturate)
        -> unsigned long long
    {
        // |E|! / prod |delta(p)|! computed as a product of binomials
        unsigned long long count = 1;
        unsigned long long placed = 0;
        for (int p = 0; p < inst.firm_count(); ++p) {
            unsigned long long d = inst.firm_pref(p).size();
            // choose which of the next d slots among placed+d go to firm p:
            // C(placed + d, d)
            for (unsigned long long i = 1; i <= d; ++i) {
                unsigned __int128 c = (unsigned __int128)(count) * (placed + i);
                c /= i;   // binomial prefix products are exactly divisible
                if (c > saturate)
                    return saturate;
                count = (unsigned long long)(c);
            }
            placed += d;
        }
        return count;
    }

    namespace
    {
        void enum_orders_rec(const MatchingInstance & inst, vector<unsigned> & next_rank,
                OfferingOrder & partial, int remaining,
                const function<void (const OfferingOrder &)> & yield)
        {
            if (0 == remaining) {
                yield(partial);
                return;
            }
            for (int p = 0; p < inst.firm_count(); ++p) {
                if (next_rank[p] < inst.firm_pref(p).size()) {
                    int q = inst.firm_pref(p)[next_rank[p]];
                    ++next_rank[p];
                    partial.sequence.push_back(Pair{ p, q });
                    enum_orders_rec(inst, next_rank, partial, remaining - 1, yield);
                    partial.sequence.pop_back();
                    --next_rank[p];
                }
            }
        }
    }

    void enumerate_consistent_orders(const MatchingInstance & inst, unsigned long long cap,
            const function<void (const OfferingOrder &)> & yield)
    {
        auto total = count_consistent_orders(inst, cap + 1);
        if (total > cap)
            throw CapExceeded("|Sigma_I| = " +
                    (total == cap + 1 ? ("more than " + to_string(cap)) : to_string(total)) +
                    " exceeds cap " + to_string(cap));
        vector<unsigned> next_rank(inst.firm_count(), 0);
        OfferingOrder partial;
        enum_orders_rec(inst, next_rank, partial, inst.pair_count(), yield);
    }

    auto all_consistent_orders(const MatchingInstance & inst, unsigned long long cap)
        -> vector<OfferingOrder>
    {
        vector<OfferingOrder> out;
        enumerate_consistent_orders(inst, cap, [&] (const OfferingOrder & s) { out.push_back(s); });
        return out;
    }

    auto blocking_pairs(const MatchingInstance & inst, const Matching & mu) -> vector<Pair>
    {
        check_matching(inst, mu);
        vector<Pair> out;
        for (int p = 0; p < inst.firm_count(); ++p)
            for (int q : inst.firm_pref(p))
                if (inst.firm_prefers(p, q, mu.worker_of(p)) &&
                        inst.worker_prefers(q, p, mu.firm_of(q)))
                    out.push_back(Pair{ p, q });
        return out;
    }

    auto is_stable(const MatchingInstance & inst, const Matching & mu) -> bool
    {
        return blocking_pairs(inst, mu).empty();
    }
}
