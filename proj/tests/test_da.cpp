#include <doctest.h>

#include "support.hpp"

#include <seqmatch/core.hpp>
#include <seqmatch/da.hpp>

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
}

TEST_CASE("worker-proposing DA on the 3x3 benchmark")
{
    auto inst = intro_instance();
    auto res = q_oriented_da(inst);
    CHECK(named_pairs(inst, res.matching)
            == NamedMatching{ { "p1", "q1" }, { "p2", "q2" }, { "p3", "q3" } });

    // final-partner acceptance rounds: p3 in round 2, p2 in round 3, p1 in 4
    CHECK(res.trace.acceptance_round.at(*inst.firm_index("p3")) == 2);
    CHECK(res.trace.acceptance_round.at(*inst.firm_index("p2")) == 3);
    CHECK(res.trace.acceptance_round.at(*inst.firm_index("p1")) == 4);
    CHECK(alpha_set(res) == std::set<int>{ *inst.firm_index("p3") });

    CHECK(named_pairs(inst, p_oriented_da(inst))
            == NamedMatching{ { "p1", "q1" }, { "p2", "q2" }, { "p3", "q3" } });
}

TEST_CASE("scan order inside a round does not change the outcome")
{
    auto rng = ts::seeded_rng(21);
    for (int it = 0; it < 200; ++it) {
        auto inst = random_instance(rng);
        CHECK(q_oriented_da(inst, false).matching == q_oriented_da(inst, true).matching);
    }
}

TEST_CASE("DA outputs are the lattice extremes of the brute-force stable set")
{
    auto rng = ts::seeded_rng(22);
    for (int it = 0; it < 60; ++it) {
        RandomInstanceConfig cfg;
        cfg.max_firms = 4;
        cfg.max_workers = 4;
        auto inst = random_instance(rng, cfg);
        auto stable = ts::stable_matchings(inst);
        REQUIRE(! stable.empty());

        auto qopt = q_oriented_da(inst).matching;
        auto popt = p_oriented_da(inst);
        CHECK(is_stable(inst, qopt));
        CHECK(is_stable(inst, popt));
        for (auto & mu : stable) {
            CHECK(ts::weakly_better_for_workers(inst, qopt, mu));
            CHECK(ts::weakly_better_for_firms(inst, popt, mu));
        }
    }
}

TEST_CASE("matched agents are invariant across stable matchings")
{
    auto rng = ts::seeded_rng(23);
    for (int it = 0; it < 60; ++it) {
        RandomInstanceConfig cfg;
        cfg.max_firms = 5;
        cfg.max_workers = 5;
        cfg.max_pairs = 14;
        auto inst = random_instance(rng, cfg);
        auto stable = ts::stable_matchings(inst);
        REQUIRE(! stable.empty());
        auto base = matched_agents(stable.front());
        for (auto & mu : stable)
            CHECK(matched_agents(mu) == base);
    }
}

TEST_CASE("stable-partner invariants under deletion and contraction")
{
    auto rng = ts::seeded_rng(24);
    for (int it = 0; it < 100; ++it) {
        auto inst = random_instance(rng);
        auto qopt = q_oriented_da(inst).matching;

        for (auto e : inst.pairs()) {
            auto [p, q] = std::pair(e.firm, e.worker);
            // top-of-list guarantee
            if (inst.firm_pref(p).front() == q)
                CHECK(! inst.worker_prefers(q, p, qopt.firm_of(q)));
            if (qopt.firm_of(q) == p) {
                // q strictly loses when its stable pair is deleted
                auto del = inst.delete_pair(e);
                auto qopt_del = q_oriented_da(del).matching;
                CHECK(inst.worker_prefers(q, p,
                        qopt_del.firm_of(q) == -1 ? -1 : *inst.firm_index(
                                del.firm_name(qopt_del.firm_of(q)))));
                // contracting a stable pair weakly helps every other worker
                auto con = inst.contract_pair(e);
                auto qopt_con = q_oriented_da(con).matching;
                auto named = named_pairs(con, qopt_con);
                named.insert({ inst.firm_name(p), inst.worker_name(q) });
                CHECK(ts::weakly_better_for_workers(inst,
                        matching_from_named(inst, named), qopt));
            }
            else if (inst.worker_prefers(q, qopt.firm_of(q), p)) {
                // deleting a pair below q's stable partner changes nothing
                auto del = inst.delete_pair(e);
                CHECK(named_pairs(del, q_oriented_da(del).matching)
                        == named_pairs(inst, qopt));
            }
        }
    }
}

TEST_CASE("strengthened blocking pair for worker-dominating matchings")
{
    auto rng = ts::seeded_rng(25);
    int exercised = 0;
    for (int it = 0; it < 10000 && exercised < 200; ++it) {
        RandomInstanceConfig cfg;
        cfg.max_firms = 4;
        cfg.max_workers = 4;
        cfg.max_pairs = 16;
        cfg.density = 1.0;   // dense markets make dominating matchings common
        auto inst = random_instance(rng, cfg);
        auto qopt = q_oriented_da(inst).matching;

        for (auto & mu : enumerate_matchings(inst)) {
            if (mu == qopt || ! ts::weakly_better_for_workers(inst, mu, qopt))
                continue;
            ++exercised;
            auto found = strengthened_blocking_pair(inst, mu);
            REQUIRE(found);
            auto [p, q] = std::pair(found->firm, found->worker);

            // (p, q) blocks mu
            CHECK(inst.worker_prefers(q, p, mu.firm_of(q)));
            CHECK(inst.firm_prefers(p, q, mu.worker_of(p)));
            // p is matched in mu to a strictly improving worker
            int qp = mu.worker_of(p);
            REQUIRE(qp >= 0);
            CHECK(inst.worker_prefers(qp, p, qopt.firm_of(qp)));
            // q itself does not improve
            CHECK(! inst.worker_prefers(q, mu.firm_of(q), qopt.firm_of(q)));
            // no admissible worker sits strictly between qopt(p) and q
            for (int qt : inst.firm_pref(p))
                if (inst.firm_prefers(p, qopt.worker_of(p), qt)
                        && inst.firm_prefers(p, qt, q))
                    CHECK(! inst.worker_prefers(qt, p, qopt.firm_of(qt)));
        }
    }
    CHECK(exercised >= 200);
}

TEST_CASE("strengthened blocking pair rejects non-dominating input")
{
    auto inst = intro_instance();
    auto qopt = q_oriented_da(inst).matching;
    CHECK_THROWS_AS(strengthened_blocking_pair(inst, qopt), DomainError);
    Matching worse(3, 3);
    worse.match(*inst.firm_index("p2"), *inst.worker_index("q1"));
    CHECK_THROWS_AS(strengthened_blocking_pair(inst, worse), DomainError);
}
