#include <seqmatch/fixtures.hpp>

#include <seqmatch/da.hpp>
#include <seqmatch/io.hpp>
#include <seqmatch/spe.hpp>
#include <seqmatch/stability.hpp>

#include <algorithm>
#include <set>

using std::string;
using std::vector;

namespace seqmatch
{
    namespace
    {
        auto instance(vector<std::pair<string, vector<string>>> firms,
                vector<std::pair<string, vector<string>>> workers) -> MatchingInstance
        {
            RawInstance raw;
            for (auto & [name, prefs] : firms) {
                raw.firms.push_back(name);
                raw.firm_prefs.push_back(prefs);
            }
            for (auto & [name, prefs] : workers) {
                raw.workers.push_back(name);
                raw.worker_prefs.push_back(prefs);
            }
            return MatchingInstance::validate(raw);
        }

        auto by_position(const MatchingInstance & inst, const vector<string> & firms)
                -> OfferingOrder
        {
            PositionOrder pi;
            for (auto & f : firms)
                pi.firms.push_back(*inst.firm_index(f));
            return induced_order(inst, pi);
        }

        auto by_pairs(const MatchingInstance & inst,
                const vector<std::pair<string, string>> & pairs) -> OfferingOrder
        {
            OfferingOrder sigma;
            for (auto & [f, w] : pairs)
                sigma.sequence.push_back(Pair{ *inst.firm_index(f), *inst.worker_index(w) });
            check_order(inst, sigma);
            return sigma;
        }

        auto named_set(const MatchingInstance & inst, const vector<Matching> & ms)
                -> std::set<NamedMatching>
        {
            std::set<NamedMatching> out;
            for (auto & m : ms)
                out.insert(named_pairs(inst, m));
            return out;
        }
    }

    void expect(FixtureResult & res, bool condition, const string & description)
    {
        ++res.checks;
        if (! condition)
            res.failures.push_back(description);
    }

    auto fixture_catalog() -> const vector<Fixture> &
    {
        static const vector<Fixture> catalog = [] {
            vector<Fixture> fs;

            {
                Fixture f;
                f.name = "intro_3x3";
                f.instance = instance(
                        { { "p1", { "q1" } },
                          { "p2", { "q2", "q1", "q3" } },
                          { "p3", { "q3", "q2" } } },
                        { { "q1", { "p2", "p1" } },
                          { "q2", { "p3", "p2" } },
                          { "q3", { "p2", "p3" } } });
                f.orders["sigma"] = by_pairs(f.instance,
                        { { "p1", "q1" }, { "p2", "q2" }, { "p2", "q1" },
                          { "p2", "q3" }, { "p3", "q3" }, { "p3", "q2" } });
                f.orders["sigma_prime"] = by_pairs(f.instance,
                        { { "p2", "q2" }, { "p2", "q1" }, { "p2", "q3" },
                          { "p3", "q3" }, { "p3", "q2" }, { "p1", "q1" } });
                f.expected_spe["sigma"] =
                        { { "p1", "q1" }, { "p2", "q3" }, { "p3", "q2" } };
                f.expected_spe["sigma_prime"] =
                        { { "p1", "q1" }, { "p2", "q2" }, { "p3", "q3" } };
                f.extra = [] (const Fixture & fx, FixtureResult & res) {
                    // both printed orders are position-based
                    expect(res, is_position_based(fx.instance, fx.orders.at("sigma"))
                            .has_value(), "sigma should be position-based");
                    expect(res, is_position_based(fx.instance, fx.orders.at("sigma_prime"))
                            .has_value(), "sigma_prime should be position-based");
                };
                fs.push_back(std::move(f));
            }

            {
                Fixture f;
                f.name = "matched_set_shrinks";
                f.instance = instance(
                        { { "p1", { "q2", "q1", "q4" } },
                          { "p2", { "q4", "q2" } },
                          { "p3", { "q1", "q3" } },
                          { "p4", { "q4" } } },
                        { { "q1", { "p1", "p3" } },
                          { "q2", { "p2", "p1" } },
                          { "q3", { "p3" } },
                          { "q4", { "p1", "p4", "p2" } } });
                f.orders["sigma1"] = by_position(f.instance, { "p1", "p2", "p3", "p4" });
                f.orders["sigma2"] = by_position(f.instance, { "p4", "p3", "p2", "p1" });
                f.expected_spe["sigma1"] =
                        { { "p1", "q1" }, { "p2", "q2" }, { "p3", "q3" }, { "p4", "q4" } };
                f.expected_spe["sigma2"] =
                        { { "p1", "q4" }, { "p2", "q2" }, { "p3", "q1" } };
                fs.push_back(std::move(f));
            }

            {
                Fixture f;
                f.name = "matched_set_grows";
                f.instance = instance(
                        { { "p1", { "q2", "q1", "q3" } },
                          { "p2", { "q2", "q4" } },
                          { "p3", { "q3", "q2" } },
                          { "p4", { "q1" } } },
                        { { "q1", { "p1", "p4" } },
                          { "q2", { "p3", "p2", "p1" } },
                          { "q3", { "p1", "p3" } },
                          { "q4", { "p2" } } });
                f.orders["sigma1"] = by_position(f.instance, { "p1", "p2", "p3", "p4" });
                f.orders["sigma2"] = by_position(f.instance, { "p2", "p4", "p1", "p3" });
                f.expected_spe["sigma1"] =
                        { { "p1", "q1" }, { "p2", "q2" }, { "p3", "q3" } };
                f.expected_spe["sigma2"] =
                        { { "p1", "q3" }, { "p2", "q4" }, { "p3", "q2" }, { "p4", "q1" } };
                fs.push_back(std::move(f));
            }

            {
                Fixture f;
                f.name = "beyond_vnm";
                f.instance = instance(
                        { { "p1", { "q1", "q2" } },
                          { "p2", { "q1", "q2", "q3" } },
                          { "p3", { "q3", "q1" } } },
                        { { "q1", { "p3", "p1", "p2" } },
                          { "q2", { "p2", "p1" } },
                          { "q3", { "p2", "p3" } } });
                f.orders["sigma"] = by_position(f.instance, { "p1", "p2", "p3" });
                f.expected_spe["sigma"] =
                        { { "p1", "q2" }, { "p2", "q3" }, { "p3", "q1" } };
                f.extra = [] (const Fixture & fx, FixtureResult & res) {
                    const auto & inst = fx.instance;
                    auto spe = solve_spe(inst, fx.orders.at("sigma")).matching;

                    auto blocking = blocking_pairs(inst, spe);
                    Pair b{ *inst.firm_index("p2"), *inst.worker_index("q2") };
                    expect(res, blocking == vector<Pair>{ b },
                            "blocking set should be exactly {(p2,q2)}");

                    auto vnm = named_set(inst, vnm_stable_set(inst));
                    std::set<NamedMatching> want{
                            { { "p1", "q1" }, { "p2", "q2" }, { "p3", "q3" } } };
                    expect(res, vnm == want, "vNM-stable set should be the printed singleton");

                    expect(res, ! is_essentially_stable(inst, spe, Side::Workers),
                            "SPE matching should not be worker-side essentially stable");
                    expect(res, ! is_essentially_stable(inst, spe, Side::Firms),
                            "SPE matching should not be firm-side essentially stable");
                    expect(res, ! reassignment_chain(inst, spe, b).vacuous,
                            "the blocking pair should be non-vacuous for the workers");
                };
                fs.push_back(std::move(f));
            }

            {
                Fixture f;
                f.name = "cycle_2x2";
                f.instance = instance(
                        { { "p1", { "q2", "q1" } },
                          { "p2", { "q1", "q2" } } },
                        { { "q1", { "p1", "p2" } },
                          { "q2", { "p2", "p1" } } });
                f.orders["sigma1"] = by_pairs(f.instance,
                        { { "p1", "q2" }, { "p1", "q1" }, { "p2", "q1" }, { "p2", "q2" } });
                f.orders["sigma2"] = by_pairs(f.instance,
                        { { "p1", "q2" }, { "p2", "q1" }, { "p1", "q1" }, { "p2", "q2" } });
                f.orders["sigma3"] = by_pairs(f.instance,
                        { { "p1", "q2" }, { "p2", "q1" }, { "p2", "q2" }, { "p1", "q1" } });
                NamedMatching qopt{ { "p1", "q1" }, { "p2", "q2" } };
                f.expected_spe["sigma1"] = qopt;
                f.expected_spe["sigma2"] = qopt;
                f.expected_spe["sigma3"] = qopt;
                f.extra = [] (const Fixture & fx, FixtureResult & res) {
                    auto rep = impossibility_report(fx.instance);
                    NamedMatching qopt{ { "p1", "q1" }, { "p2", "q2" } };
                    NamedMatching popt{ { "p1", "q2" }, { "p2", "q1" } };
                    expect(res, rep.spe_set == std::set<NamedMatching>{ qopt },
                            "SPE set over all orders should be {QOPT}");
                    expect(res, rep.qopt == qopt && rep.popt == popt,
                            "QOPT/POPT should be the two printed matchings");
                    expect(res, ! rep.popt_in_spe, "POPT should be outside the SPE set");
                    auto pe_p = named_set(fx.instance,
                            pareto_set(fx.instance, Side::Firms));
                    auto fcm_p = named_set(fx.instance,
                            first_choice_maximal_set(fx.instance, Side::Firms));
                    expect(res, pe_p == std::set<NamedMatching>{ popt },
                            "firm-side Pareto set should be {POPT}");
                    expect(res, fcm_p == std::set<NamedMatching>{ popt },
                            "firm-side first-choice-maximal set should be {POPT}");
                    expect(res, ! rep.spe_meets_pareto_P && ! rep.spe_meets_fcm_P,
                            "SPE set should miss the firm-side efficiency sets");
                };
                fs.push_back(std::move(f));
            }

            {
                Fixture f;
                f.name = "worker_side_2x3";
                f.instance = instance(
                        { { "p1", { "q1", "q3", "q2" } },
                          { "p2", { "q2", "q3", "q1" } } },
                        { { "q1", { "p2", "p1" } },
                          { "q2", { "p1", "p2" } },
                          { "q3", { "p1", "p2" } } });
                f.extra = [] (const Fixture & fx, FixtureResult & res) {
                    auto rep = impossibility_report(fx.instance);
                    NamedMatching qopt{ { "p1", "q1" }, { "p2", "q2" } };
                    expect(res, rep.spe_set == std::set<NamedMatching>{ qopt },
                            "SPE set over all orders should be {QOPT}");
                    auto pe_q = named_set(fx.instance,
                            pareto_set(fx.instance, Side::Workers));
                    std::set<NamedMatching> want_pe{
                            { { "p1", "q2" }, { "p2", "q1" } },
                            { { "p1", "q3" }, { "p2", "q1" } },
                            { { "p1", "q2" }, { "p2", "q3" } },
                            { { "p1", "q3" }, { "p2", "q2" } } };
                    expect(res, pe_q == want_pe,
                            "worker-side Pareto set should be the four printed matchings");
                    auto fcm_q = named_set(fx.instance,
                            first_choice_maximal_set(fx.instance, Side::Workers));
                    std::set<NamedMatching> want_fcm{
                            { { "p1", "q2" }, { "p2", "q1" } },
                            { { "p1", "q3" }, { "p2", "q1" } } };
                    expect(res, fcm_q == want_fcm,
                            "worker-side first-choice-maximal set should be the printed pair");
                    expect(res, ! rep.spe_meets_pareto_Q && ! rep.spe_meets_fcm_Q,
                            "SPE set should miss the worker-side efficiency sets");
                };
                fs.push_back(std::move(f));
            }

            return fs;
        }();
        return catalog;
    }

    auto run_fixture(const Fixture & f) -> FixtureResult
    {
        FixtureResult res;
        res.name = f.name;

        // round-trip through the file format is the identity on normalized text
        auto text = serialize_instance(f.instance);
        expect(res, serialize_instance(parse_instance(text)) == text,
                "instance file round-trip should be byte-identical");
        expect(res, parse_instance(text) == f.instance,
                "instance file round-trip should reproduce the instance");

        for (auto & [name, sigma] : f.orders) {
            auto otext = serialize_order(f.instance, sigma);
            expect(res, parse_order(f.instance, otext).sigma == sigma,
                    "order file round-trip should reproduce " + name);
        }

        for (auto & [name, want] : f.expected_spe) {
            auto got = named_pairs(f.instance, solve_spe(f.instance, f.orders.at(name)).matching);
            expect(res, got == want, "SPE under " + name + " should be " +
                    format_named_matching_text(want) + ", got " +
                    format_named_matching_text(got));
        }

        if (f.extra)
            f.extra(f, res);
        return res;
    }

    auto run_all_fixtures() -> vector<FixtureResult>
    {
        vector<FixtureResult> out;
        for (auto & f : fixture_catalog())
            out.push_back(run_fixture(f));
        return out;
    }
}
