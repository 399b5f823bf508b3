#include <doctest.h>

#include "support.hpp"

#include <seqmatch/core.hpp>

#include <algorithm>

using namespace seqmatch;
using ts::make_instance;

namespace
{
    auto intro_instance() -> MatchingInstance
    {
        return make_instance(
                { { "p1", { "q1" } },
                  { "p2", { "q2", "q1", "q3" } },
                  { "p3", { "q3", "q2" } } },
                { { "q1", { "p2", "p1" } },
                  { "q2", { "p3", "p2" } },
                  { "q3", { "p2", "p3" } } });
    }

    auto cycle_2x2() -> MatchingInstance
    {
        return make_instance(
                { { "p1", { "q2", "q1" } }, { "p2", { "q1", "q2" } } },
                { { "q1", { "p1", "p2" } }, { "q2", { "p2", "p1" } } });
    }
}

TEST_CASE("validation collects every violation at once")
{
    // naming problems are all reported together
    RawInstance raw;
    raw.firms = { "p1", "p1", "q1" };
    raw.workers = { "q1", "q2" };
    raw.firm_prefs = { { "q1", "q1" }, { "qx" }, {} };
    raw.worker_prefs = { { "p1" }, { "p1" } };
    try {
        MatchingInstance::validate(raw);
        FAIL("expected a validation error");
    }
    catch (const ValidationError & e) {
        CHECK(e.violations.size() == 2);   // dup firm name, cross-side dup
    }

    // with names intact, every list problem is reported together
    RawInstance lists;
    lists.firms = { "p1", "p2" };
    lists.workers = { "q1", "q2" };
    lists.firm_prefs = { { "q1", "q1" }, { "qx" } };
    lists.worker_prefs = { {}, { "p2" } };
    try {
        MatchingInstance::validate(lists);
        FAIL("expected a validation error");
    }
    catch (const ValidationError & e) {
        CHECK(e.violations.size() >= 3);   // dup entry, unknown entry,
                                           // two asymmetric mentions
    }
}

TEST_CASE("asymmetric mentions are rejected")
{
    RawInstance raw;
    raw.firms = { "p1" };
    raw.workers = { "q1" };
    raw.firm_prefs = { { "q1" } };
    raw.worker_prefs = { {} };
    CHECK_THROWS_AS(MatchingInstance::validate(raw), ValidationError);
}

TEST_CASE("accessors, ranks and comparisons")
{
    auto inst = intro_instance();
    CHECK(inst.firm_count() == 3);
    CHECK(inst.worker_count() == 3);
    CHECK(inst.pair_count() == 6);
    CHECK(inst.firm_index("p2") == 1);
    CHECK(! inst.firm_index("nope"));
    CHECK(inst.firm_rank(1, 1) == 0);
    CHECK(inst.firm_rank(0, 1) == -1);
    CHECK(inst.worker_prefers(0, 1, 0));        // q1: p2 over p1
    CHECK(inst.worker_prefers(0, 0, -1));       // matched beats unmatched
    CHECK(! inst.worker_prefers(0, -1, 0));
    auto pairs = inst.pairs();
    CHECK(pairs.front() == Pair{ 0, 0 });
    CHECK(pairs.size() == 6);
    CHECK(std::is_sorted(pairs.begin(), pairs.end(),
            [] (Pair a, Pair b) { return a.firm < b.firm; }));
}

TEST_CASE("deletion keeps agents, contraction removes them")
{
    auto inst = intro_instance();
    auto del = inst.delete_pair(Pair{ 1, 0 });   // (p2, q1)
    CHECK(del.firm_count() == 3);
    CHECK(del.pair_count() == 5);
    CHECK(del.firm_rank(1, 0) == -1);
    CHECK(del.firm_pref(1).size() == 2);

    auto con = inst.contract_pair(Pair{ 1, 0 });  // remove p2 and q1
    CHECK(con.firm_count() == 2);
    CHECK(con.worker_count() == 2);
    CHECK(con.firm_index("p2") == std::nullopt);
    CHECK(con.worker_index("q1") == std::nullopt);
    CHECK(con.pair_count() == 2);                // (p3,q3),(p3,q2)
    CHECK(con.firm_index("p1").has_value());
    CHECK(con.firm_pref(*con.firm_index("p1")).empty());
}

TEST_CASE("deletion and contraction commute on disjoint pairs")
{
    auto rng = ts::seeded_rng(11);
    for (int it = 0; it < 50; ++it) {
        auto inst = random_instance(rng);
        auto pairs = inst.pairs();
        if (pairs.size() < 2)
            continue;
        for (auto a : pairs)
            for (auto b : pairs)
                if (a.firm != b.firm && a.worker != b.worker) {
                    // contraction shifts the indices of agents above the
                    // removed ones, so a must be remapped on that side
                    Pair shifted{ a.firm - (a.firm > b.firm ? 1 : 0),
                            a.worker - (a.worker > b.worker ? 1 : 0) };
                    CHECK(inst.delete_pair(a).contract_pair(b).to_raw().firms
                            == inst.contract_pair(b).delete_pair(shifted).to_raw().firms);
                    CHECK(inst.delete_pair(a).contract_pair(b)
                            == inst.contract_pair(b).delete_pair(shifted));
                }
    }
}

TEST_CASE("to_raw round-trips through validate")
{
    auto rng = ts::seeded_rng(12);
    for (int it = 0; it < 30; ++it) {
        auto inst = random_instance(rng);
        CHECK(MatchingInstance::validate(inst.to_raw()) == inst);
    }
}

TEST_CASE("order validity: bijection and per-firm monotonicity")
{
    auto inst = intro_instance();
    OfferingOrder good{ { { 0, 0 }, { 1, 1 }, { 1, 0 }, { 1, 2 }, { 2, 2 }, { 2, 1 } } };
    CHECK_NOTHROW(check_order(inst, good));

    OfferingOrder swapped = good;
    std::swap(swapped.sequence[1], swapped.sequence[2]);  // p2's offers out of order
    CHECK_THROWS_AS(check_order(inst, swapped), DomainError);

    OfferingOrder missing = good;
    missing.sequence.pop_back();
    CHECK_THROWS_AS(check_order(inst, missing), DomainError);

    OfferingOrder duplicated = good;
    duplicated.sequence[5] = duplicated.sequence[0];
    CHECK_THROWS_AS(check_order(inst, duplicated), DomainError);
}

TEST_CASE("induced orders and position-based recognition")
{
    auto inst = intro_instance();
    PositionOrder pi{ { 0, 1, 2 } };
    auto sigma = induced_order(inst, pi);
    CHECK(sigma.sequence.size() == 6);
    auto recovered = is_position_based(inst, sigma);
    REQUIRE(recovered);
    CHECK(recovered->firms == pi.firms);

    OfferingOrder interleaved{ { { 0, 0 }, { 1, 1 }, { 2, 2 }, { 1, 0 }, { 1, 2 }, { 2, 1 } } };
    check_order(inst, interleaved);
    CHECK(! is_position_based(inst, interleaved));
}

TEST_CASE("order counting matches enumeration")
{
    auto rng = ts::seeded_rng(13);
    for (int it = 0; it < 30; ++it) {
        RandomInstanceConfig cfg;
        cfg.max_firms = 3;
        cfg.max_workers = 3;
        cfg.max_pairs = 6;
        auto inst = random_instance(rng, cfg);
        auto count = count_consistent_orders(inst);
        if (count > 5000)
            continue;
        auto all = all_consistent_orders(inst, 5000);
        CHECK(all.size() == count);
        for (auto & sigma : all)
            CHECK_NOTHROW(check_order(inst, sigma));
        std::set<std::vector<Pair>> dedup;
        for (auto & sigma : all)
            dedup.insert(sigma.sequence);
        CHECK(dedup.size() == all.size());
    }
}

TEST_CASE("enumeration cap throws before yielding")
{
    auto inst = intro_instance();
    CHECK_THROWS_AS(all_consistent_orders(inst, 2), CapExceeded);
}

TEST_CASE("full 2x2 market: three orders start with a fixed first offer")
{
    auto inst = cycle_2x2();
    auto all = all_consistent_orders(inst);
    int with_first = 0;
    for (auto & sigma : all)
        if (sigma.sequence.front() == Pair{ 0, 1 })   // (p1, q2) is p1's top
            ++with_first;
    CHECK(with_first == 3);
}

TEST_CASE("blocking pairs and stability")
{
    auto inst = cycle_2x2();
    Matching popt(2, 2);
    popt.match(0, 0);   // p1-q2
    popt.match(1, 1);   // p2-q1
    CHECK(blocking_pairs(inst, popt).empty());
    CHECK(is_stable(inst, popt));

    Matching swapped(2, 2);
    swapped.match(0, 1);
    swapped.match(1, 0);
    CHECK(is_stable(inst, swapped));

    Matching empty(2, 2);
    CHECK(! is_stable(inst, empty));
    CHECK(blocking_pairs(inst, empty).size() == 4);
}

TEST_CASE("named matchings round-trip")
{
    auto inst = intro_instance();
    Matching mu(3, 3);
    mu.match(1, 2);
    mu.match(2, 1);
    auto named = named_pairs(inst, mu);
    CHECK(named == NamedMatching{ { "p2", "q3" }, { "p3", "q2" } });
    CHECK(matching_from_named(inst, named) == mu);

    Matching bad(3, 3);
    bad.match(0, 2);   // (p1,q3) is not acceptable
    CHECK_THROWS_AS(check_matching(inst, bad), DomainError);
}

TEST_CASE("disjoint union stacks instances side by side")
{
    auto a = cycle_2x2();
    auto b = make_instance({ { "r1", { "w1" } } }, { { "w1", { "r1" } } });
    auto u = disjoint_union(a, b);
    CHECK(u.firm_count() == 3);
    CHECK(u.worker_count() == 3);
    CHECK(u.pair_count() == a.pair_count() + 1);
    CHECK_THROWS_AS(disjoint_union(a, a), DomainError);
}

TEST_CASE("order surgery mirrors instance surgery")
{
    auto inst = intro_instance();
    OfferingOrder sigma{ { { 0, 0 }, { 1, 1 }, { 1, 0 }, { 1, 2 }, { 2, 2 }, { 2, 1 } } };

    auto deleted = delete_from_order(sigma, Pair{ 1, 0 });
    CHECK(deleted.sequence.size() == 5);
    CHECK_NOTHROW(check_order(inst.delete_pair(Pair{ 1, 0 }), deleted));

    auto contracted = contract_order(sigma, Pair{ 1, 0 });
    CHECK_NOTHROW(check_order(inst.contract_pair(Pair{ 1, 0 }), contracted));
}
