#include <seqmatch/spe.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <future>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

using std::atomic;
using std::nullopt;
using std::optional;
using std::shared_ptr;
using std::string;
using std::uint16_t;
using std::uint64_t;
using std::vector;

namespace seqmatch
{
    namespace
    {
        // subset of sigma positions; inline fixed width keeps memo keys cheap
        constexpr int mask_words = 4;
        constexpr int max_positions = mask_words * 64;

        struct Mask
        {
            std::array<uint64_t, mask_words> words{};

            bool operator==(const Mask &) const = default;

            bool test(int i) const { return (words[i >> 6] >> (i & 63)) & 1; }
            void set(int i) { words[i >> 6] |= uint64_t{ 1 } << (i & 63); }
            void reset(int i) { words[i >> 6] &= ~(uint64_t{ 1 } << (i & 63)); }

            int first_set() const
            {
                for (int w = 0; w < mask_words; ++w)
                    if (words[w])
                        return w * 64 + std::countr_zero(words[w]);
                return -1;
            }

            Mask and_not(const Mask & other) const
            {
                Mask out = *this;
                for (int w = 0; w < mask_words; ++w)
                    out.words[w] &= ~other.words[w];
                return out;
            }
        };

        struct MaskHash
        {
            auto operator() (const Mask & m) const -> std::size_t
            {
                std::size_t h = 0xcbf29ce484222325ull;
                for (auto w : m.words)
                    h = (h ^ w) * 0x100000001b3ull;
                return h;
            }
        };

        // SPE of a subgame, as the sorted list of matched sigma positions
        using Outcome = shared_ptr<const vector<uint16_t>>;

        struct Engine
        {
            const MatchingInstance & inst;
            vector<Pair> seq;
            vector<Mask> conflict;   // positions sharing a firm or worker (incl. self)
            std::size_t budget;
            bool parallel;

            std::unordered_map<Mask, Outcome, MaskHash> memo;
            std::mutex memo_mutex;
            atomic<uint64_t> visited{ 0 }, hits{ 0 };

            Engine(const MatchingInstance & i, const OfferingOrder & sigma,
                    const SpeOptions & opts) :
                inst(i),
                seq(sigma.sequence),
                budget(opts.node_budget),
                parallel(opts.parallel)
            {
                int m = int(seq.size());
                if (m > max_positions)
                    throw CapExceeded("solver limited to " + std::to_string(max_positions) +
                            " pairs, instance has " + std::to_string(m));
                conflict.assign(m, Mask{});
                for (int i2 = 0; i2 < m; ++i2)
                    for (int j = 0; j < m; ++j)
                        if (seq[i2].firm == seq[j].firm || seq[i2].worker == seq[j].worker)
                            conflict[i2].set(j);
            }

            // firm matched to worker q in the outcome, or -1
            auto assigned_firm(const Outcome & o, int q) const -> int
            {
                for (auto pos : *o)
                    if (seq[pos].worker == q)
                        return seq[pos].firm;
                return -1;
            }

            auto lookup(const Mask & mask) -> optional<Outcome>
            {
                std::unique_lock lock(memo_mutex, std::defer_lock);
                if (parallel)
                    lock.lock();
                auto it = memo.find(mask);
                if (it != memo.end())
                    return it->second;
                return nullopt;
            }

            auto store(const Mask & mask, Outcome o) -> Outcome
            {
                std::unique_lock lock(memo_mutex, std::defer_lock);
                if (parallel)
                    lock.lock();
                if (memo.size() >= budget)
                    throw CapExceeded("subgame memo budget of " + std::to_string(budget) +
                            " entries exceeded");
                return memo.emplace(mask, std::move(o)).first->second;
            }

            auto solve(const Mask & mask, int depth) -> Outcome
            {
                if (auto found = lookup(mask)) {
                    ++hits;
                    return *found;
                }
                ++visited;

                int i = mask.first_set();
                if (-1 == i)
                    return store(mask, std::make_shared<vector<uint16_t>>());

                auto [p, q] = seq[i];
                Mask reject_mask = mask;
                reject_mask.reset(i);
                Mask accept_mask = mask.and_not(conflict[i]);

                Outcome reject_outcome, accept_outcome;
                if (parallel && depth < 3) {
                    // speculative: evaluate both subgames concurrently
                    auto fut = std::async(std::launch::async,
                            [&] { return solve(accept_mask, depth + 1); });
                    reject_outcome = solve(reject_mask, depth + 1);
                    accept_outcome = fut.get();
                }
                else
                    reject_outcome = solve(reject_mask, depth + 1);

                // q accepts p unless rejecting leads somewhere she likes more
                if (inst.worker_prefers(q, assigned_firm(reject_outcome, q), p))
                    return store(mask, reject_outcome);

                if (! accept_outcome)
                    accept_outcome = solve(accept_mask, depth + 1);
                auto result = std::make_shared<vector<uint16_t>>(*accept_outcome);
                result->insert(std::lower_bound(result->begin(), result->end(), uint16_t(i)),
                        uint16_t(i));
                return store(mask, std::move(result));
            }
        };
    }

    auto solve_spe(const MatchingInstance & inst, const OfferingOrder & sigma,
            const SpeOptions & opts) -> SpeResult
    {
        check_order(inst, sigma);
        Engine engine(inst, sigma, opts);

        int m = inst.pair_count();
        Mask all;
        for (int i = 0; i < m; ++i)
            all.set(i);

        auto outcome = engine.solve(all, 0);

        SpeResult result{ Matching(inst.firm_count(), inst.worker_count()),
            FirstAction::Reject, SpeStats{} };
        for (auto pos : *outcome)
            result.matching.match(engine.seq[pos].firm, engine.seq[pos].worker);
        if (! outcome->empty() && 0 == outcome->front())
            result.first_action = FirstAction::Accept;
        result.stats.visited = engine.visited;
        result.stats.memo_hits = engine.hits;
        return result;
    }

    namespace
    {
        using NamedSeq = vector<std::pair<string, string>>;

        auto spe_by_values(const MatchingInstance & inst, const NamedSeq & order,
                uint64_t & visited) -> NamedMatching
        {
            ++visited;
            if (order.empty())
                return {};

            auto & [fname, wname] = order.front();
            int p = *inst.firm_index(fname), q = *inst.worker_index(wname);

            auto rest = NamedSeq(order.begin() + 1, order.end());
            auto reject = spe_by_values(inst.delete_pair(Pair{ p, q }), rest, visited);

            int reject_partner = -1;
            for (auto & [f2, w2] : reject)
                if (w2 == wname)
                    reject_partner = *inst.firm_index(f2);
            if (inst.worker_prefers(q, reject_partner, p))
                return reject;

            NamedSeq contracted_order;
            for (auto & e : rest)
                if (e.first != fname && e.second != wname)
                    contracted_order.push_back(e);
            auto accept = spe_by_values(inst.contract_pair(Pair{ p, q }), contracted_order, visited);
            accept.emplace(fname, wname);
            return accept;
        }
    }

    auto solve_spe_unmemoized(const MatchingInstance & inst, const OfferingOrder & sigma,
            int max_pairs) -> SpeResult
    {
        check_order(inst, sigma);
        if (inst.pair_count() > max_pairs)
            throw CapExceeded("solve_spe_unmemoized limited to |E| <= " + std::to_string(max_pairs));

        NamedSeq order;
        for (auto e : sigma.sequence)
            order.emplace_back(inst.firm_name(e.firm), inst.worker_name(e.worker));

        uint64_t visited = 0;
        auto named = spe_by_values(inst, order, visited);

        SpeResult result{ matching_from_named(inst, named), FirstAction::Reject, SpeStats{} };
        result.stats.visited = visited;
        if (! sigma.sequence.empty()) {
            auto first = sigma.sequence.front();
            if (result.matching.worker_of(first.firm) == first.worker)
                result.first_action = FirstAction::Accept;
        }
        return result;
    }

    auto spem_decide(const MatchingInstance & inst, const OfferingOrder & sigma,
            const SpeOptions & opts) -> bool
    {
        if (0 == inst.pair_count())
            throw DomainError("spem_decide: instance has no acceptable pairs");
        return solve_spe(inst, sigma, opts).first_action == FirstAction::Accept;
    }

    namespace
    {
        struct TreeWriter
        {
            Engine & engine;
            std::size_t cap;
            std::size_t leaves = 0;
            std::size_t next_id = 0;
            std::ostringstream out;
            bool emit_dot;

            auto matching_label(const vector<int> & accepted) -> string
            {
                std::ostringstream label;
                label << "{";
                bool first = true;
                for (int pos : accepted) {
                    if (! first)
                        label << ", ";
                    first = false;
                    label << "(" << engine.inst.firm_name(engine.seq[pos].firm) << ","
                        << engine.inst.worker_name(engine.seq[pos].worker) << ")";
                }
                label << "}";
                return label.str();
            }

            // returns this node's id
            auto walk(const Mask & mask, vector<int> & accepted, bool on_spe_path) -> std::size_t
            {
                std::size_t id = next_id++;
                if (next_id > cap)
                    throw CapExceeded("game tree exceeds node cap of " + std::to_string(cap));

                int i = mask.first_set();
                if (-1 == i) {
                    ++leaves;
                    if (emit_dot)
                        out << "  n" << id << " [shape=box,label=\"" << matching_label(accepted)
                            << "\"];\n";
                    return id;
                }

                auto [p, q] = engine.seq[i];
                if (emit_dot)
                    out << "  n" << id << " [label=\"(" << engine.inst.firm_name(p) << ","
                        << engine.inst.worker_name(q) << ")\"];\n";

                Mask reject_mask = mask;
                reject_mask.reset(i);
                Mask accept_mask = mask.and_not(engine.conflict[i]);

                bool spe_accepts = false;
                if (on_spe_path) {
                    auto reject_outcome = engine.solve(reject_mask, 0);
                    spe_accepts = ! engine.inst.worker_prefers(q,
                            engine.assigned_firm(reject_outcome, q), p);
                }

                accepted.push_back(i);
                auto accept_id = walk(accept_mask, accepted, on_spe_path && spe_accepts);
                accepted.pop_back();
                auto reject_id = walk(reject_mask, accepted, on_spe_path && ! spe_accepts);

                if (emit_dot) {
                    out << "  n" << id << " -> n" << accept_id << " [label=\"A\""
                        << (on_spe_path && spe_accepts ? ",color=red,penwidth=2" : "") << "];\n";
                    out << "  n" << id << " -> n" << reject_id << " [label=\"R\""
                        << (on_spe_path && ! spe_accepts ? ",color=red,penwidth=2" : "") << "];\n";
                }
                return id;
            }
        };
    }

    auto export_game_tree(const MatchingInstance & inst, const OfferingOrder & sigma,
            std::size_t node_cap, const SpeOptions & opts) -> string
    {
        check_order(inst, sigma);
        Engine engine(inst, sigma, opts);
        int m = inst.pair_count();
        Mask all;
        for (int i = 0; i < m; ++i)
            all.set(i);

        TreeWriter writer{ engine, node_cap, 0, 0, {}, true };
        writer.out << "digraph game_tree {\n  node [shape=ellipse];\n";
        vector<int> accepted;
        writer.walk(all, accepted, true);
        writer.out << "}\n";
        return writer.out.str();
    }

    auto count_game_tree_leaves(const MatchingInstance & inst, const OfferingOrder & sigma,
            std::size_t node_cap) -> std::size_t
    {
        check_order(inst, sigma);
        SpeOptions opts;
        Engine engine(inst, sigma, opts);
        int m = inst.pair_count();
        Mask all;
        for (int i = 0; i < m; ++i)
            all.set(i);
        TreeWriter writer{ engine, node_cap, 0, 0, {}, false };
        vector<int> accepted;
        writer.walk(all, accepted, false);
        return writer.leaves;
    }

    auto check_eeckhout(const MatchingInstance & inst) -> optional<Reindexing>
    {
        MatchingInstance current = inst;
        Reindexing order;
        vector<bool> firm_used(inst.firm_count(), false), worker_used(inst.worker_count(), false);

        while (current.pair_count() > 0) {
            // find a mutually-top pair; peeling preserves any others
            optional<Pair> top;
            for (int p = 0; p < current.firm_count() && ! top; ++p) {
                if (current.firm_pref(p).empty())
                    continue;
                int q = current.firm_pref(p).front();
                if (current.worker_pref(q).front() == p)
                    top = Pair{ p, q };
            }
            if (! top)
                return nullopt;
            int orig_p = *inst.firm_index(current.firm_name(top->firm));
            int orig_q = *inst.worker_index(current.worker_name(top->worker));
            order.firms.push_back(orig_p);
            order.workers.push_back(orig_q);
            firm_used[orig_p] = true;
            worker_used[orig_q] = true;
            current = current.contract_pair(*top);
        }

        for (int p = 0; p < inst.firm_count(); ++p)
            if (! firm_used[p])
                order.firms.push_back(p);
        for (int q = 0; q < inst.worker_count(); ++q)
            if (! worker_used[q])
                order.workers.push_back(q);
        return order;
    }
}
