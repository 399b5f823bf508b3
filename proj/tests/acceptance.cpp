/* Acceptance gate: one pass/fail line per criterion, exact equality
 * throughout, nonzero exit on any failure. */

#include <seqmatch/core.hpp>
#include <seqmatch/da.hpp>
#include <seqmatch/fixtures.hpp>
#include <seqmatch/order_design.hpp>
#include <seqmatch/qsat.hpp>
#include <seqmatch/random_gen.hpp>
#include <seqmatch/sfda.hpp>
#include <seqmatch/spe.hpp>
#include <seqmatch/stability.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace seqmatch;

namespace
{
    struct Gate
    {
        int failed = 0;
        std::vector<std::string> issues;

        void check(bool ok, const std::string & what)
        {
            if (! ok)
                issues.push_back(what);
        }

        void run(const std::string & name, double budget_seconds,
                const std::function<void (Gate &)> & body)
        {
            issues.clear();
            auto start = std::chrono::steady_clock::now();
            try {
                body(*this);
            }
            catch (const std::exception & e) {
                issues.push_back(std::string("exception: ") + e.what());
            }
            double elapsed = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start).count();
            bool ok = issues.empty() && elapsed < budget_seconds;
            std::printf("%s: %s (%.2f s, budget %.0f s)\n", name.c_str(),
                    ok ? "PASS" : "FAIL", elapsed, budget_seconds);
            if (! ok) {
                ++failed;
                if (elapsed >= budget_seconds)
                    std::printf("    over time budget\n");
                for (std::size_t i = 0; i < issues.size() && i < 10; ++i)
                    std::printf("    %s\n", issues[i].c_str());
                if (issues.size() > 10)
                    std::printf("    ... and %zu more\n", issues.size() - 10);
            }
        }
    };

    auto rng_for(std::uint64_t salt) -> std::mt19937
    {
        return std::mt19937(static_cast<unsigned>(seed_from_env(424242) * 1000003u + salt));
    }

    auto weakly_better_workers(const MatchingInstance & inst, const Matching & a,
            const Matching & b) -> bool
    {
        for (int q = 0; q < inst.worker_count(); ++q)
            if (a.firm_of(q) != b.firm_of(q)
                    && ! inst.worker_prefers(q, a.firm_of(q), b.firm_of(q)))
                return false;
        return true;
    }

    auto weakly_better_firms(const MatchingInstance & inst, const Matching & a,
            const Matching & b) -> bool
    {
        for (int p = 0; p < inst.firm_count(); ++p)
            if (a.worker_of(p) != b.worker_of(p)
                    && ! inst.firm_prefers(p, a.worker_of(p), b.worker_of(p)))
                return false;
        return true;
    }

    void criterion_fixtures(Gate & g)
    {
        for (auto & result : run_all_fixtures()) {
            g.check(result.checks > 0, result.name + ": no checks ran");
            for (auto & f : result.failures)
                g.check(false, result.name + ": " + f);
        }
    }

    void criterion_tractable(Gate & g)
    {
        auto rng = rng_for(1);
        for (bool narrow_firms : { true, false }) {
            RandomInstanceConfig cfg;
            (narrow_firms ? cfg.max_firm_list : cfg.max_worker_list) = 2;
            for (int it = 0; it < 500; ++it) {
                auto inst = random_instance(rng, cfg);
                auto sigma = random_order(rng, inst);
                auto rep = verify_tractable_equivalence(inst, sigma);
                g.check(rep.equal, std::string(narrow_firms ? "(2,inf)" : "(inf,2)") +
                        " iterated fixing != SPE at case " + std::to_string(it));

                if (narrow_firms && count_consistent_orders(inst, 201) <= 200) {
                    auto qopt = q_oriented_da(inst).matching;
                    for (auto & s2 : all_consistent_orders(inst, 200))
                        g.check(solve_spe(inst, s2).matching == qopt,
                                "(2,inf) SPE != worker-optimal at case " + std::to_string(it));
                }
            }
        }
    }

    void criterion_design(Gate & g)
    {
        auto rng = rng_for(2);
        for (int it = 0; it < 500; ++it) {
            auto inst = random_instance(rng);
            auto rep = verify_design(inst);
            g.check(rep.ok, "design failed at case " + std::to_string(it));
            for (auto & note : rep.notes)
                g.check(false, "case " + std::to_string(it) + ": " + note);
            g.check(rep.spe_matching == rep.qopt_matching,
                    "designed order misses the target at case " + std::to_string(it));
        }
    }

    void criterion_da(Gate & g)
    {
        auto rng = rng_for(3);
        RandomInstanceConfig cfg;
        cfg.max_firms = 5;
        cfg.max_workers = 5;
        cfg.max_pairs = 25;
        for (int it = 0; it < 200; ++it) {
            auto inst = random_instance(rng, cfg);
            std::vector<Matching> stable;
            for (auto & mu : enumerate_matchings(inst))
                if (is_stable(inst, mu))
                    stable.push_back(mu);
            g.check(! stable.empty(), "no stable matching at case " + std::to_string(it));
            if (stable.empty())
                continue;

            auto qopt = q_oriented_da(inst).matching;
            auto popt = p_oriented_da(inst);
            bool q_best = is_stable(inst, qopt), p_best = is_stable(inst, popt);
            auto agents = matched_agents(stable.front());
            for (auto & mu : stable) {
                q_best = q_best && weakly_better_workers(inst, qopt, mu);
                p_best = p_best && weakly_better_firms(inst, popt, mu);
                if (! (matched_agents(mu) == agents))
                    g.check(false, "matched set varies at case " + std::to_string(it));
            }
            g.check(q_best, "worker-proposing DA not worker-best at case " + std::to_string(it));
            g.check(p_best, "firm-proposing DA not firm-best at case " + std::to_string(it));
        }
    }

    void criterion_reduction(Gate & g)
    {
        // gate truth tables in their standalone harnesses
        auto spe_of = [] (const GadgetHarness & h) {
            return named_pairs(h.instance,
                    solve_spe(h.instance, induced_order(h.instance, h.pi)).matching);
        };
        for (bool a : { false, true })
            for (bool b : { false, true }) {
                auto mu = spe_of(build_gadget_harness(GadgetKind::Or, { a, b }));
                g.check(mu.contains({ "p_1", "a3_g" }) == ! (a && b), "OR gate table");
                if (a && b)
                    g.check(mu.contains({ "ahat3_g", "a3_g" }), "OR gate table (internal)");
                auto nu = spe_of(build_gadget_harness(GadgetKind::And, { a, b }));
                g.check(nu.contains({ "p_1", "b2_g" }) == ! (a || b), "AND gate table");
            }
        for (bool a : { false, true }) {
            auto mu = spe_of(build_gadget_harness(GadgetKind::Not, { a }));
            g.check(mu.contains({ "p_1", "g4_g" }) == a, "NOT gate table");
            auto nu = spe_of(build_gadget_harness(GadgetKind::Branching, { a }));
            g.check(nu.contains({ "p_1", "d1_g" }) == ! a, "BRANCHING gate table");
            g.check(nu.contains({ "p_2", "d2_g" }) == ! a, "BRANCHING gate table");
        }

        // exhaustive sweep: every single-clause formula on three real
        // variables (the clause needs three distinct variables), every
        // quantifier pattern and literal polarity
        std::vector<QuantifiedFormula> sweep;
        for (int quants = 0; quants < 8; ++quants)
            for (int signs = 0; signs < 8; ++signs) {
                QuantifiedFormula f;
                f.quantifiers.push_back(Quantifier::Exists);   // dummy
                for (int i = 0; i < 3; ++i)
                    f.quantifiers.push_back((quants >> i) & 1 ? Quantifier::ForAll
                                                              : Quantifier::Exists);
                std::array<int, 3> clause{ 2, 3, 4 };
                for (int i = 0; i < 3; ++i)
                    if ((signs >> i) & 1)
                        clause[i] = -clause[i];
                f.clauses.push_back(clause);
                sweep.push_back(normalize(f));
            }

        unsigned workers = std::max(2u, std::thread::hardware_concurrency());
        std::vector<std::future<std::vector<std::string>>> batches;
        for (unsigned w = 0; w < workers; ++w)
            batches.push_back(std::async(std::launch::async, [&, w] {
                std::vector<std::string> bad;
                for (std::size_t i = w; i < sweep.size(); i += workers) {
                    auto rep = verify_reduction(sweep[i]);
                    if (! rep.ok) {
                        std::string msg = "sweep formula " + std::to_string(i) + ":";
                        for (auto & fail : rep.failures)
                            msg += " " + fail;
                        bad.push_back(msg);
                    }
                    if (rep.formula_true != evaluate_qbf(sweep[i]))
                        bad.push_back("sweep formula " + std::to_string(i) +
                                ": decision mismatch");
                }
                return bad;
            }));
        for (auto & b : batches)
            for (auto & msg : b.get())
                g.check(false, msg);

        // structural checks on a three-clause build
        QuantifiedFormula big;
        big.quantifiers = { Quantifier::Exists, Quantifier::ForAll,
                Quantifier::Exists, Quantifier::ForAll };
        big.clauses = { { 2, 3, 4 }, { -2, 3, -4 }, { 2, -3, 4 } };
        auto red = reduce_qsat(big);
        auto width = classify(red.instance);
        g.check(width.max_firm_list <= 3 && width.max_worker_list <= 3,
                "three-clause build exceeds degree three");
        auto sigma = induced_order(red.instance, red.pi);
        try {
            check_order(red.instance, sigma);
        }
        catch (const DomainError & e) {
            g.check(false, std::string("three-clause order invalid: ") + e.what());
        }
        g.check(is_position_based(red.instance, sigma).has_value(),
                "three-clause order is not position-based");
    }

    void criterion_properties(Gate & g)
    {
        // partner monotonicity under deletion/contraction of a stable pair
        {
            auto rng = rng_for(6);
            for (int it = 0; it < 200; ++it) {
                auto inst = random_instance(rng);
                auto qopt = q_oriented_da(inst).matching;
                for (auto e : inst.pairs()) {
                    int p = e.firm, q = e.worker;
                    if (inst.firm_pref(p).front() == q
                            && inst.worker_prefers(q, p, qopt.firm_of(q)))
                        g.check(false, "a first-choice worker beaten at case " +
                                std::to_string(it));
                    if (qopt.firm_of(q) == p) {
                        auto del = inst.delete_pair(e);
                        auto qd = q_oriented_da(del).matching;
                        g.check(inst.worker_prefers(q, p, qd.firm_of(q)),
                                "deleting a stable pair failed to hurt its worker");
                        auto con = inst.contract_pair(e);
                        auto named = named_pairs(con, q_oriented_da(con).matching);
                        named.insert({ inst.firm_name(p), inst.worker_name(q) });
                        g.check(weakly_better_workers(inst,
                                        matching_from_named(inst, named), qopt),
                                "contracting a stable pair hurt another worker");
                    }
                    else if (inst.worker_prefers(q, qopt.firm_of(q), p)) {
                        auto del = inst.delete_pair(e);
                        g.check(named_pairs(del, q_oriented_da(del).matching)
                                        == named_pairs(inst, qopt),
                                "deleting a dominated pair changed the outcome");
                    }
                }
            }
        }

        // iterated fixing: worker-side improvement, matched-set preservation,
        // and the first-offer recursion
        {
            auto rng = rng_for(7);
            for (int it = 0; it < 200; ++it) {
                auto inst = random_instance(rng);
                auto sigma = random_order(rng, inst);
                auto fixed = run_sfda(inst, sigma);
                auto qopt = q_oriented_da(inst).matching;
                g.check(weakly_better_workers(inst, fixed, qopt),
                        "iterated fixing hurt a worker at case " + std::to_string(it));
                g.check(matched_agents(fixed) == matched_agents(qopt),
                        "iterated fixing changed the matched set at case " + std::to_string(it));
                if (sigma.sequence.empty())
                    continue;
                auto e = sigma.sequence.front();
                auto whole = named_pairs(inst, fixed);
                if (qopt.firm_of(e.worker) != e.firm) {
                    auto del = inst.delete_pair(e);
                    g.check(whole == named_pairs(del,
                                    run_sfda(del, delete_from_order(sigma, e))),
                            "deletion recursion failed at case " + std::to_string(it));
                }
                else {
                    auto con = inst.contract_pair(e);
                    auto part = named_pairs(con, run_sfda(con, contract_order(sigma, e)));
                    part.insert({ inst.firm_name(e.firm), inst.worker_name(e.worker) });
                    g.check(whole == part,
                            "contraction recursion failed at case " + std::to_string(it));
                }
            }
        }

        // narrow lists: the fixed first offer strictly beats declining it
        {
            auto rng = rng_for(8);
            int exercised = 0;
            for (int it = 0; it < 4000 && exercised < 200; ++it) {
                RandomInstanceConfig cfg;
                ((it & 1) ? cfg.max_firm_list : cfg.max_worker_list) = 2;
                auto inst = random_instance(rng, cfg);
                auto sigma = random_order(rng, inst);
                if (sigma.sequence.empty())
                    continue;
                auto e = sigma.sequence.front();
                if (q_oriented_da(inst).matching.firm_of(e.worker) != e.firm)
                    continue;
                ++exercised;
                auto del = inst.delete_pair(e);
                auto fallback = run_sfda(del, delete_from_order(sigma, e));
                g.check(inst.worker_prefers(e.worker, e.firm, fallback.firm_of(e.worker)),
                        "declining the fixed offer was not worse at case " + std::to_string(it));
            }
            g.check(exercised >= 200, "too few narrow-list premises exercised");
        }

        // SPE: late blockers and safety of first-choice workers
        {
            auto rng = rng_for(9);
            for (int it = 0; it < 200; ++it) {
                auto inst = random_instance(rng);
                auto sigma = random_order(rng, inst);
                auto mu = solve_spe(inst, sigma).matching;
                auto pos = [&] (Pair e) {
                    return std::find(sigma.sequence.begin(), sigma.sequence.end(), e)
                            - sigma.sequence.begin();
                };
                for (auto b : blocking_pairs(inst, mu)) {
                    int holder = mu.firm_of(b.worker);
                    g.check(holder >= 0 && pos(b) > pos(Pair{ holder, b.worker }),
                            "a blocking pair precedes the realized offer at case " +
                                    std::to_string(it));
                }
                for (int p = 0; p < inst.firm_count(); ++p)
                    if (! inst.firm_pref(p).empty()) {
                        int q = inst.firm_pref(p).front();
                        g.check(! inst.worker_prefers(q, p, mu.firm_of(q)),
                                "a first-choice worker lost out at case " + std::to_string(it));
                    }
            }
        }

        // a mutually-top pair factors out of the game under every order
        {
            auto rng = rng_for(10);
            int exercised = 0;
            for (int it = 0; it < 4000 && exercised < 200; ++it) {
                RandomInstanceConfig cfg;
                cfg.max_firms = 3;
                cfg.max_workers = 3;
                cfg.max_pairs = 6;
                auto inst = random_instance(rng, cfg);
                std::optional<Pair> top;
                for (int p = 0; p < inst.firm_count() && ! top; ++p)
                    if (! inst.firm_pref(p).empty()) {
                        int q = inst.firm_pref(p).front();
                        if (inst.worker_pref(q).front() == p)
                            top = Pair{ p, q };
                    }
                if (! top || count_consistent_orders(inst, 201) > 200)
                    continue;
                ++exercised;
                auto reduced = inst.contract_pair(*top);
                for (auto & sigma : all_consistent_orders(inst, 200)) {
                    auto whole = named_pairs(inst, solve_spe(inst, sigma).matching);
                    auto part = named_pairs(reduced,
                            solve_spe(reduced, contract_order(sigma, *top)).matching);
                    part.insert({ inst.firm_name(top->firm), inst.worker_name(top->worker) });
                    g.check(whole == part, "mutually-top pair did not factor at case " +
                            std::to_string(it));
                }
            }
            g.check(exercised >= 200, "too few mutually-top premises exercised");
        }

        // stability implies every weaker notion in the report
        {
            auto rng = rng_for(11);
            int exercised = 0;
            for (int it = 0; exercised < 200 && it < 2000; ++it) {
                RandomInstanceConfig cfg;
                cfg.max_firms = 3;
                cfg.max_workers = 3;
                auto inst = random_instance(rng, cfg);
                auto qopt = q_oriented_da(inst).matching;
                ++exercised;
                auto report = analyze(inst, qopt);
                g.check(report.stable && report.vnm_member
                                && report.essentially_stable_workers
                                && report.essentially_stable_firms
                                && report.first_choice_stable_firms
                                && report.first_choice_stable_workers,
                        "a stable matching failed a weaker notion at case " +
                                std::to_string(it));
            }
        }
    }

    void criterion_engines(Gate & g)
    {
        auto rng = rng_for(12);
        for (int it = 0; it < 200; ++it) {
            auto inst = random_instance(rng);
            auto sigma = random_order(rng, inst);
            auto fast = solve_spe(inst, sigma);
            auto slow = solve_spe_unmemoized(inst, sigma);
            g.check(fast.matching == slow.matching
                            && fast.first_action == slow.first_action,
                    "memoized and reference solvers disagree at case " + std::to_string(it));
        }

        SpeOptions par;
        par.parallel = true;
        for (auto & fixture : fixture_catalog())
            for (auto & [name, sigma] : fixture.orders) {
                auto seq = solve_spe(fixture.instance, sigma);
                auto both = solve_spe(fixture.instance, sigma, par);
                g.check(seq.matching == both.matching
                                && seq.first_action == both.first_action,
                        fixture.name + "/" + name + ": parallel run differs");
            }
    }
}

int main()
{
    Gate gate;
    gate.run("criterion 1 (fixture reproduction)", 1, criterion_fixtures);
    gate.run("criterion 2 (narrow-list equivalence)", 60, criterion_tractable);
    gate.run("criterion 3 (order design)", 60, criterion_design);
    gate.run("criterion 4 (deferred-acceptance oracle)", 30, criterion_da);
    gate.run("criterion 5 (formula-game reduction sweep)", 600, criterion_reduction);
    gate.run("criterion 6 (invariant property suites)", 120, criterion_properties);
    gate.run("criterion 7 (solver cross-validation)", 120, criterion_engines);
    return gate.failed == 0 ? 0 : 1;
}
