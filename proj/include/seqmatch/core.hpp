/* Core value types for sequential matching games: instances, matchings,
 * offering orders, and the deletion/contraction calculus. */

#ifndef SEQMATCH_CORE_HPP
#define SEQMATCH_CORE_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seqmatch
{
    // Domain errors (bad input, broken invariants): CLI exit code 1.
    class DomainError : public std::runtime_error
    {
    public:
        explicit DomainError(const std::string & what) : std::runtime_error(what) {}
    };

    // A configured resource cap was hit: CLI exit code 2.
    class CapExceeded : public std::runtime_error
    {
    public:
        explicit CapExceeded(const std::string & what) : std::runtime_error(what) {}
    };

    // Instance validation failure carrying every violation found.
    class ValidationError : public DomainError
    {
    public:
        std::vector<std::string> violations;
        explicit ValidationError(std::vector<std::string> v);
    };

    // An acceptable pair, by dense indices into an instance's firm/worker lists.
    struct Pair
    {
        int firm;
        int worker;
        auto operator<=>(const Pair &) const = default;
    };

    // Raw, unvalidated instance description (what the file format carries).
    struct RawInstance
    {
        std::vector<std::string> firms;
        std::vector<std::string> workers;
        // preference lists by name, in input order of the owning agent
        std::vector<std::vector<std::string>> firm_prefs;
        std::vector<std::vector<std::string>> worker_prefs;
    };

    // The immutable instance I = (P, Q, E, >). Identifiers are opaque strings
    // at the boundary; everything internal uses dense indices in input order.
    class MatchingInstance
    {
    public:
        MatchingInstance() = default;   // the empty market

        static MatchingInstance validate(const RawInstance &);

        int firm_count() const { return static_cast<int>(_firm_names.size()); }
        int worker_count() const { return static_cast<int>(_worker_names.size()); }
        int pair_count() const { return _pair_count; }

        const std::string & firm_name(int p) const { return _firm_names.at(p); }
        const std::string & worker_name(int q) const { return _worker_names.at(q); }
        std::optional<int> firm_index(const std::string &) const;
        std::optional<int> worker_index(const std::string &) const;

        // preference lists as index vectors, most preferred first
        const std::vector<int> & firm_pref(int p) const { return _firm_prefs.at(p); }
        const std::vector<int> & worker_pref(int q) const { return _worker_prefs.at(q); }

        bool acceptable(int p, int q) const { return _firm_rank[p][q] >= 0; }

        // rank of q in p's list (0 = top), or -1 if unacceptable
        int firm_rank(int p, int q) const { return _firm_rank.at(p).at(q); }
        int worker_rank(int q, int p) const { return _worker_rank.at(q).at(p); }

        // strict comparison; -1 stands for "unmatched" and loses to any
        // acceptable partner
        bool firm_prefers(int p, int q1, int q2) const;
        bool worker_prefers(int q, int p1, int p2) const;

        // E in canonical order: firm-major input order, each firm's pairs in
        // preference order
        std::vector<Pair> pairs() const;

        MatchingInstance delete_pair(Pair e) const;
        MatchingInstance contract_pair(Pair e) const;

        // role-swapped copy (firms become workers and vice versa)
        MatchingInstance transposed() const;

        RawInstance to_raw() const;

        bool operator==(const MatchingInstance &) const = default;

    private:
        void rebuild_ranks();

        std::vector<std::string> _firm_names, _worker_names;
        std::vector<std::vector<int>> _firm_prefs, _worker_prefs;
        std::vector<std::vector<int>> _firm_rank, _worker_rank;
        int _pair_count = 0;
    };

    // Side-by-side union of two instances with disjoint identifier sets.
    // Experimental support for product-structure experiments on SPE sets.
    MatchingInstance disjoint_union(const MatchingInstance &, const MatchingInstance &);

    // A partial one-to-one assignment; unmatched agents map to themselves
    // (represented internally as -1).
    class Matching
    {
    public:
        Matching() = default;
        Matching(int firm_count, int worker_count);

        void match(int p, int q);
        void unmatch_firm(int p);

        int worker_of(int p) const { return _worker_of_firm.at(p); }
        int firm_of(int q) const { return _firm_of_worker.at(q); }
        int firm_count() const { return static_cast<int>(_worker_of_firm.size()); }
        int worker_count() const { return static_cast<int>(_firm_of_worker.size()); }
        int size() const;

        std::vector<Pair> pairs() const;

        bool operator==(const Matching &) const = default;

    private:
        std::vector<int> _worker_of_firm, _firm_of_worker;
    };

    // name-level view of a matching, comparable across instances derived from
    // one another by deletion/contraction
    using NamedMatching = std::set<std::pair<std::string, std::string>>;

    NamedMatching named_pairs(const MatchingInstance &, const Matching &);
    Matching matching_from_named(const MatchingInstance &, const NamedMatching &);

    // requires every pair to be in E; throws DomainError otherwise
    void check_matching(const MatchingInstance &, const Matching &);

    // sigma: a permutation of E, consistent with every firm's list
    struct OfferingOrder
    {
        std::vector<Pair> sequence;
        bool operator==(const OfferingOrder &) const = default;
    };

    // pi: a permutation of P
    struct PositionOrder
    {
        std::vector<int> firms;
        bool operator==(const PositionOrder &) const = default;
    };

    // throws DomainError unless sigma is a bijection on E consistent with
    // firm preferences
    void check_order(const MatchingInstance &, const OfferingOrder &);

    OfferingOrder delete_from_order(const OfferingOrder &, Pair e);
    OfferingOrder contract_order(const OfferingOrder &, Pair e);

    OfferingOrder induced_order(const MatchingInstance &, const PositionOrder &);
    std::optional<PositionOrder> is_position_based(const MatchingInstance &, const OfferingOrder &);

    // |Sigma_I| = |E|! / prod_p |delta(p)|!, saturated at `saturate`
    unsigned long long count_consistent_orders(const MatchingInstance &,
            unsigned long long saturate = ~0ull);

    // Yields every sigma in Sigma_I exactly once, deterministically (at each
    // step the earliest-input-order firm's next offer is tried first). Throws
    // CapExceeded when |Sigma_I| > cap before yielding anything.
    void enumerate_consistent_orders(const MatchingInstance &,
            unsigned long long cap,
            const std::function<void (const OfferingOrder &)> & yield);

    std::vector<OfferingOrder> all_consistent_orders(const MatchingInstance &,
            unsigned long long cap = 100000);

    std::vector<Pair> blocking_pairs(const MatchingInstance &, const Matching &);
    bool is_stable(const MatchingInstance &, const Matching &);
}

#endif
