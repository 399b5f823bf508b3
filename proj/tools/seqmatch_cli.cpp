#include <seqmatch/da.hpp>
#include <seqmatch/fixtures.hpp>
#include <seqmatch/io.hpp>
#include <seqmatch/order_design.hpp>
#include <seqmatch/qsat.hpp>
#include <seqmatch/sfda.hpp>
#include <seqmatch/spe.hpp>
#include <seqmatch/stability.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using std::string;
using std::vector;
using namespace seqmatch;

namespace
{
    auto load_instance(const string & path) -> MatchingInstance
    {
        return parse_instance(read_file(path));
    }

    // defaults to the order induced by the firms' input order (reduced games
    // are written that way)
    auto load_order(const MatchingInstance & inst, const string & path) -> OfferingOrder
    {
        if (path.empty()) {
            PositionOrder pi;
            pi.firms.resize(inst.firm_count());
            std::iota(pi.firms.begin(), pi.firms.end(), 0);
            return induced_order(inst, pi);
        }
        return parse_order(inst, read_file(path)).sigma;
    }

    auto matching_json(const MatchingInstance & inst, const Matching & mu) -> json
    {
        json pairs = json::array();
        for (int p = 0; p < mu.firm_count(); ++p)
            if (mu.worker_of(p) >= 0)
                pairs.push_back({ inst.firm_name(p), inst.worker_name(mu.worker_of(p)) });
        return pairs;
    }

    auto named_matching_json(const NamedMatching & mu) -> json
    {
        json pairs = json::array();
        for (auto & [f, w] : mu)
            pairs.push_back({ f, w });
        return pairs;
    }

    void emit(const string & format, const json & j, const string & text)
    {
        if (format == "json")
            std::cout << j.dump(2) << "\n";
        else
            std::cout << text << "\n";
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{ "sequential matching game toolkit" };
    app.require_subcommand(1);

    string instance_path, order_path, format = "text", matching_path;
    std::size_t node_budget = 5000000;
    bool parallel = false;

    auto add_common = [&] (CLI::App * cmd, bool with_order, bool with_format = true) {
        cmd->add_option("--instance", instance_path, "instance file")->required();
        if (with_order)
            cmd->add_option("--order", order_path, "order file (default: firm input order)");
        if (with_format)
            cmd->add_option("--format", format, "text or json")
                    ->check(CLI::IsMember({ "text", "json" }));
        cmd->add_option("--node-budget", node_budget, "memoized-subgame cap");
        cmd->add_flag("--parallel", parallel, "evaluate sibling subtrees concurrently");
    };

    auto * solve = app.add_subcommand("solve", "SPE matching of (I, sigma)");
    add_common(solve, true);

    auto * spem = app.add_subcommand("spem", "first-offer decision: ACCEPT or REJECT");
    add_common(spem, true);

    auto * qopt_cmd = app.add_subcommand("qopt", "worker-optimal stable matching");
    add_common(qopt_cmd, false);
    auto * popt_cmd = app.add_subcommand("popt", "firm-optimal stable matching");
    add_common(popt_cmd, false);

    auto * sfda_cmd = app.add_subcommand("sfda", "sequentially-fixing deferred acceptance");
    add_common(sfda_cmd, true);

    auto * design = app.add_subcommand("design-order",
            "construct an order whose SPE is the worker-optimal stable matching");
    add_common(design, false);
    bool design_verify = false, search_pb = false;
    design->add_flag("--verify", design_verify, "run the structural checkpoints");
    design->add_flag("--search-position-based", search_pb,
            "also search all position orders for one with the same SPE");
    string design_order_out;
    design->add_option("--order-out", design_order_out, "write the designed order here");

    auto * analyze_cmd = app.add_subcommand("analyze", "stability/efficiency checks");
    add_common(analyze_cmd, false);
    analyze_cmd->add_option("--matching", matching_path, "matching file")->required();
    string checks = "all";
    analyze_cmd->add_option("--checks", checks,
            "comma list: stable,vnm,essential,first-choice,pareto,fcm,all");

    auto * enum_cmd = app.add_subcommand("enumerate-spe",
            "SPE matchings over every consistent order");
    add_common(enum_cmd, false);
    unsigned long long max_orders = 100000;
    enum_cmd->add_option("--max-orders", max_orders, "cap on |Sigma_I|");

    auto * reduce = app.add_subcommand("reduce",
            "compile a QDIMACS formula into a matching game");
    string qbf_path, out_path, order_out_path;
    reduce->add_option("--qbf", qbf_path, "QDIMACS file")->required();
    reduce->add_option("--out", out_path, "instance output file")->required();
    reduce->add_option("--order-out", order_out_path, "order output file")->required();
    reduce->add_option("--format", format, "text or json")
            ->check(CLI::IsMember({ "text", "json" }));

    auto * tree = app.add_subcommand("export-tree", "DOT game tree with the SPE path marked");
    add_common(tree, true, false);
    string tree_format = "dot";
    std::size_t node_cap = 100000;
    tree->add_option("--format", tree_format, "only 'dot'")->check(CLI::IsMember({ "dot" }));
    tree->add_option("--node-cap", node_cap, "tree node cap");

    auto * fixtures_cmd = app.add_subcommand("fixtures", "benchmark-game assertions");
    bool run_all = false;
    fixtures_cmd->add_flag("--run-all", run_all, "run every fixture");
    fixtures_cmd->add_option("--format", format, "text or json")
            ->check(CLI::IsMember({ "text", "json" }));

    CLI11_PARSE(app, argc, argv);

    try {
        SpeOptions opts{ node_budget, parallel };

        if (*solve) {
            auto inst = load_instance(instance_path);
            auto sigma = load_order(inst, order_path);
            auto res = solve_spe(inst, sigma, opts);
            json j;
            j["matching"] = matching_json(inst, res.matching);
            j["first_action"] = res.first_action == FirstAction::Accept ? "ACCEPT" : "REJECT";
            j["visited"] = res.stats.visited;
            emit(format, j, format_matching_text(inst, res.matching));
        }
        else if (*spem) {
            auto inst = load_instance(instance_path);
            auto sigma = load_order(inst, order_path);
            bool accept = spem_decide(inst, sigma, opts);
            json j;
            j["decision"] = accept ? "ACCEPT" : "REJECT";
            emit(format, j, accept ? "ACCEPT" : "REJECT");
        }
        else if (*qopt_cmd || *popt_cmd) {
            auto inst = load_instance(instance_path);
            auto mu = *qopt_cmd ? q_oriented_da(inst).matching : p_oriented_da(inst);
            json j;
            j["matching"] = matching_json(inst, mu);
            emit(format, j, format_matching_text(inst, mu));
        }
        else if (*sfda_cmd) {
            auto inst = load_instance(instance_path);
            auto sigma = load_order(inst, order_path);
            auto mu = run_sfda(inst, sigma);
            json j;
            j["matching"] = matching_json(inst, mu);
            emit(format, j, format_matching_text(inst, mu));
        }
        else if (*design) {
            auto inst = load_instance(instance_path);
            auto report = verify_design(inst, node_budget);
            const auto & plan = report.plan;

            json j;
            json fset = json::array();
            for (auto e : plan.f_set)
                fset.push_back({ inst.firm_name(e.firm), inst.worker_name(e.worker) });
            json fixed = json::array();
            for (auto e : plan.fixed_sequence)
                fixed.push_back({ inst.firm_name(e.firm), inst.worker_name(e.worker) });
            json pi = json::array();
            for (int p : plan.pi.firms)
                pi.push_back(inst.firm_name(p));
            json sig = json::array();
            for (auto e : plan.sigma.sequence)
                sig.push_back({ inst.firm_name(e.firm), inst.worker_name(e.worker) });
            j["f_set"] = fset;
            j["fixed_sequence"] = fixed;
            j["pi"] = pi;
            j["sigma"] = sig;
            j["qopt"] = named_matching_json(report.qopt_matching);

            std::ostringstream text;
            text << "F:";
            for (auto e : plan.f_set)
                text << " (" << inst.firm_name(e.firm) << ","
                        << inst.worker_name(e.worker) << ")";
            text << "\nfixed:";
            for (auto e : plan.fixed_sequence)
                text << " (" << inst.firm_name(e.firm) << ","
                        << inst.worker_name(e.worker) << ")";
            text << "\npi:";
            for (int p : plan.pi.firms)
                text << " " << inst.firm_name(p);
            text << "\nsigma:";
            for (auto e : plan.sigma.sequence)
                text << " (" << inst.firm_name(e.firm) << ","
                        << inst.worker_name(e.worker) << ")";

            if (design_verify) {
                j["verified"] = report.ok;
                j["spe"] = named_matching_json(report.spe_matching);
                j["notes"] = report.notes;
                text << "\nverified: " << (report.ok ? "yes" : "NO");
                for (auto & note : report.notes)
                    text << "\n  note: " << note;
            }

            if (search_pb) {
                auto qopt = q_oriented_da(inst).matching;
                vector<int> perm(inst.firm_count());
                std::iota(perm.begin(), perm.end(), 0);
                if (inst.firm_count() > 9)
                    throw CapExceeded("position-order search limited to nine firms");
                std::optional<vector<int>> found;
                do {
                    PositionOrder cand{ perm };
                    auto res = solve_spe(inst, induced_order(inst, cand), opts);
                    if (res.matching == qopt) {
                        found = perm;
                        break;
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
                json pb = json::array();
                if (found)
                    for (int p : *found)
                        pb.push_back(inst.firm_name(p));
                j["position_based"] = found ? pb : json();
                text << "\nposition-based:";
                if (found)
                    for (int p : *found)
                        text << " " << inst.firm_name(p);
                else
                    text << " none";
            }

            if (! design_order_out.empty())
                write_file(design_order_out, serialize_order(inst, plan.sigma));
            emit(format, j, text.str());
            if (design_verify && ! report.ok)
                return 1;
        }
        else if (*analyze_cmd) {
            auto inst = load_instance(instance_path);
            auto mu = parse_matching(inst, read_file(matching_path));
            auto rep = analyze(inst, mu);

            std::set<string> on;
            std::istringstream cs(checks);
            for (string item; std::getline(cs, item, ','); )
                on.insert(item);
            bool all = on.contains("all");

            json j;
            std::ostringstream text;
            auto put = [&] (const string & key, bool value) {
                j[key] = value;
                text << key << ": " << (value ? "yes" : "no") << "\n";
            };
            if (all || on.contains("stable")) {
                put("stable", rep.stable);
                json bl = json::array();
                for (auto e : rep.blocking)
                    bl.push_back({ inst.firm_name(e.firm), inst.worker_name(e.worker) });
                j["blocking"] = bl;
            }
            if (all || on.contains("vnm"))
                put("vnm_member", rep.vnm_member);
            if (all || on.contains("essential")) {
                put("essentially_stable_workers", rep.essentially_stable_workers);
                put("essentially_stable_firms", rep.essentially_stable_firms);
            }
            if (all || on.contains("first-choice")) {
                put("first_choice_stable_firms", rep.first_choice_stable_firms);
                put("first_choice_stable_workers", rep.first_choice_stable_workers);
            }
            if (all || on.contains("pareto")) {
                put("pareto_firms", rep.pareto_P);
                put("pareto_workers", rep.pareto_Q);
            }
            if (all || on.contains("fcm")) {
                put("first_choice_maximal_firms", rep.fcm_P);
                put("first_choice_maximal_workers", rep.fcm_Q);
            }
            string t = text.str();
            if (! t.empty())
                t.pop_back();
            emit(format, j, t);
        }
        else if (*enum_cmd) {
            auto inst = load_instance(instance_path);
            auto spe_set = enumerate_spe_set(inst, max_orders);
            json arr = json::array();
            std::ostringstream text;
            for (auto & mu : spe_set) {
                arr.push_back(named_matching_json(mu));
                text << format_named_matching_text(mu) << "\n";
            }
            json j;
            j["spe_set"] = arr;
            string t = text.str();
            if (! t.empty())
                t.pop_back();
            emit(format, j, t);
        }
        else if (*reduce) {
            auto f = parse_qdimacs(read_file(qbf_path));
            auto red = reduce_qsat(f);
            write_file(out_path, serialize_instance(red.instance));
            write_file(order_out_path, serialize_position_order(red.instance, red.pi));
            json j;
            j["variables"] = f.variable_count();
            j["clauses"] = f.clause_count();
            j["firms"] = red.instance.firm_count();
            j["workers"] = red.instance.worker_count();
            j["pairs"] = red.instance.pair_count();
            std::ostringstream text;
            text << "variables: " << f.variable_count() << "\nclauses: " << f.clause_count()
                    << "\nfirms: " << red.instance.firm_count()
                    << "\nworkers: " << red.instance.worker_count()
                    << "\npairs: " << red.instance.pair_count();
            emit(format, j, text.str());
        }
        else if (*tree) {
            auto inst = load_instance(instance_path);
            auto sigma = load_order(inst, order_path);
            std::cout << export_game_tree(inst, sigma, node_cap, opts);
        }
        else if (*fixtures_cmd) {
            if (! run_all)
                throw DomainError("fixtures: pass --run-all");
            auto results = run_all_fixtures();
            int total = 0;
            bool ok = true;
            json arr = json::array();
            std::ostringstream text;
            for (auto & r : results) {
                total += r.checks;
                ok = ok && r.failures.empty();
                json item;
                item["name"] = r.name;
                item["checks"] = r.checks;
                item["failures"] = r.failures;
                arr.push_back(item);
                text << (r.failures.empty() ? "PASS" : "FAIL") << " " << r.name
                        << " (" << r.checks << " checks)\n";
                for (auto & msg : r.failures)
                    text << "  " << msg << "\n";
            }
            text << total << " checks across " << results.size() << " fixtures";
            json j;
            j["fixtures"] = arr;
            j["total_checks"] = total;
            j["ok"] = ok;
            emit(format, j, text.str());
            if (! ok)
                return 1;
        }
    }
    catch (const CapExceeded & e) {
        std::cerr << "resource cap exceeded: " << e.what() << "\n";
        return 2;
    }
    catch (const ValidationError & e) {
        std::cerr << "invalid input:\n";
        for (auto & v : e.violations)
            std::cerr << "  " << v << "\n";
        return 1;
    }
    catch (const DomainError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
