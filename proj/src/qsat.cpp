#include <seqmatch/qsat.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

using std::map;
using std::string;
using std::to_string;
using std::vector;

namespace seqmatch
{
    namespace
    {
        void check_clauses(const QuantifiedFormula & f)
        {
            int n = f.variable_count();
            for (auto & c : f.clauses) {
                std::set<int> vars;
                for (int lit : c) {
                    int v = std::abs(lit);
                    if (lit == 0 || v > n)
                        throw DomainError("clause literal out of range");
                    vars.insert(v);
                }
                if (vars.size() != 3)
                    throw DomainError("every clause needs exactly three distinct variables");
            }
        }

        bool var_used(const QuantifiedFormula & f, int v)
        {
            for (auto & c : f.clauses)
                for (int lit : c)
                    if (std::abs(lit) == v)
                        return true;
            return false;
        }
    }

    auto normalize(const QuantifiedFormula & f) -> QuantifiedFormula
    {
        check_clauses(f);
        QuantifiedFormula out = f;
        for (auto & c : out.clauses)
            std::sort(c.begin(), c.end(), [] (int a, int b) {
                    return std::abs(a) < std::abs(b);
                });

        bool shell_ok = ! out.quantifiers.empty()
                && out.quantifiers.front() == Quantifier::Exists
                && ! var_used(out, 1);
        if (! shell_ok) {
            out.quantifiers.insert(out.quantifiers.begin(), Quantifier::Exists);
            for (auto & c : out.clauses)
                for (int & lit : c)
                    lit += lit > 0 ? 1 : -1;
        }
        return out;
    }

    auto is_normalized(const QuantifiedFormula & f) -> bool
    {
        if (f.quantifiers.empty() || f.quantifiers.front() != Quantifier::Exists)
            return false;
        if (var_used(f, 1))
            return false;
        int n = f.variable_count();
        for (auto & c : f.clauses) {
            for (int lit : c)
                if (lit == 0 || std::abs(lit) > n)
                    return false;
            if (! (std::abs(c[0]) < std::abs(c[1]) && std::abs(c[1]) < std::abs(c[2])))
                return false;
        }
        return true;
    }

    auto parse_qdimacs(const string & text) -> QuantifiedFormula
    {
        // strip comment lines, then tokenize
        std::istringstream lines(text);
        std::ostringstream body;
        for (string line; std::getline(lines, line); )
            if (! line.starts_with("c"))
                body << line << '\n';
        std::istringstream in(body.str());

        string tok;
        if (! (in >> tok) || tok != "p")
            throw DomainError("malformed header: expected 'p cnf <vars> <clauses>'");
        int nvars = 0, nclauses = 0;
        if (! (in >> tok >> nvars >> nclauses) || tok != "cnf" || nvars < 0 || nclauses < 0)
            throw DomainError("malformed header: expected 'p cnf <vars> <clauses>'");

        // prefix: variable -> position in the quantifier sequence
        vector<std::pair<Quantifier, int>> prefix;
        vector<int> position(nvars + 1, 0);
        for ( ; ; ) {
            auto at = in.tellg();
            if (! (in >> tok))
                break;
            if (tok != "e" && tok != "a") {
                in.clear();
                in.seekg(at);
                break;
            }
            Quantifier q = tok == "e" ? Quantifier::Exists : Quantifier::ForAll;
            for (int v; in >> v && v != 0; ) {
                if (v < 0 || v > nvars)
                    throw DomainError("quantified variable out of range: " + to_string(v));
                if (position[v] != 0)
                    throw DomainError("variable quantified twice: " + to_string(v));
                prefix.emplace_back(q, v);
                position[v] = int(prefix.size());
            }
        }

        QuantifiedFormula f;
        for (auto & [q, v] : prefix)
            f.quantifiers.push_back(q);

        vector<int> clause;
        int lit;
        while (in >> lit) {
            if (lit == 0) {
                if (clause.size() != 3)
                    throw DomainError("clause with " + to_string(clause.size()) +
                            " literals; exactly three distinct variables required");
                f.clauses.push_back({ clause[0], clause[1], clause[2] });
                clause.clear();
                continue;
            }
            int v = std::abs(lit);
            if (v > nvars)
                throw DomainError("literal references variable beyond header: " + to_string(lit));
            if (position[v] == 0)
                throw DomainError("free variable: " + to_string(v));
            clause.push_back(lit > 0 ? position[v] : -position[v]);
        }
        if (! clause.empty())
            throw DomainError("unterminated clause");
        if (int(f.clauses.size()) != nclauses)
            throw DomainError("header announces " + to_string(nclauses) + " clauses, found " +
                    to_string(f.clauses.size()));
        return normalize(f);
    }

    auto evaluate_matrix(const QuantifiedFormula & f, const vector<bool> & a) -> bool
    {
        for (auto & c : f.clauses) {
            bool sat = false;
            for (int lit : c)
                sat = sat || (a.at(std::abs(lit) - 1) == (lit > 0));
            if (! sat)
                return false;
        }
        return true;
    }

    auto evaluate_qbf(const QuantifiedFormula & f, int max_variables) -> bool
    {
        int n = f.variable_count();
        if (n > max_variables)
            throw CapExceeded("formula has " + to_string(n) + " variables (limit " +
                    to_string(max_variables) + ")");
        vector<bool> a(n, false);
        auto rec = [&] (auto && self, int i) -> bool {
            if (i == n)
                return evaluate_matrix(f, a);
            a[i] = false;
            bool lo = self(self, i + 1);
            a[i] = true;
            bool hi = self(self, i + 1);
            return f.quantifiers[i] == Quantifier::Exists ? (lo || hi) : (lo && hi);
        };
        return rec(rec, 0);
    }

    auto build_gadget(GadgetKind kind, const string & tag,
            const vector<string> & in, const vector<string> & out) -> GadgetBlueprint
    {
        auto need = [&] (std::size_t ins, std::size_t outs) {
            if (in.size() != ins || out.size() != outs)
                throw DomainError("gadget socket arity mismatch");
        };
        GadgetBlueprint g;
        g.kind = kind;
        g.tag = tag;
        g.inputs = in;
        g.outputs = out;
        auto nm = [&] (const char * base) { return string(base) + "_" + tag; };

        switch (kind) {
        case GadgetKind::Or: {
            need(2, 1);
            g.firms = { nm("ahat1"), nm("ahat2"), nm("ahat3") };
            g.workers = { nm("a1"), nm("a2"), nm("a3") };
            g.firm_prefs[nm("ahat1")] = { in[0], nm("a1") };
            g.firm_prefs[nm("ahat2")] = { in[1], nm("a2") };
            g.firm_prefs[nm("ahat3")] = { nm("a1"), nm("a2"), nm("a3") };
            g.worker_prefs[nm("a1")] = { nm("ahat1"), nm("ahat3") };
            g.worker_prefs[nm("a2")] = { nm("ahat2"), nm("ahat3") };
            g.worker_prefs[nm("a3")] = { nm("ahat3"), out[0] };
            break;
        }
        case GadgetKind::And: {
            need(2, 1);
            g.firms = { nm("bhat1"), nm("bhat2"), nm("bhat3") };
            g.workers = { nm("b1"), nm("b2") };
            g.firm_prefs[nm("bhat1")] = { in[0], nm("b1") };
            g.firm_prefs[nm("bhat2")] = { in[1], nm("b1") };
            g.firm_prefs[nm("bhat3")] = { nm("b1"), nm("b2") };
            g.worker_prefs[nm("b1")] = { nm("bhat1"), nm("bhat2"), nm("bhat3") };
            g.worker_prefs[nm("b2")] = { nm("bhat3"), out[0] };
            break;
        }
        case GadgetKind::Not: {
            need(1, 1);
            g.firms = { nm("ghat1"), nm("ghat2"), nm("ghat3"), nm("ghat4"), nm("ghat5") };
            g.workers = { nm("g1"), nm("g2"), nm("g3"), nm("g4") };
            g.firm_prefs[nm("ghat1")] = { in[0], nm("g1") };
            g.firm_prefs[nm("ghat2")] = { nm("g3"), nm("g4") };
            g.firm_prefs[nm("ghat3")] = { nm("g2") };
            g.firm_prefs[nm("ghat4")] = { nm("g1"), nm("g2"), nm("g3") };
            g.firm_prefs[nm("ghat5")] = { nm("g3"), nm("g1") };
            g.worker_prefs[nm("g1")] = { nm("ghat1"), nm("ghat5"), nm("ghat4") };
            g.worker_prefs[nm("g2")] = { nm("ghat4"), nm("ghat3") };
            g.worker_prefs[nm("g3")] = { nm("ghat4"), nm("ghat2"), nm("ghat5") };
            g.worker_prefs[nm("g4")] = { nm("ghat2"), out[0] };
            break;
        }
        case GadgetKind::Branching: {
            need(1, 2);
            g.firms = { nm("dhat1"), nm("dhat2"), nm("dhat3"), nm("dhat4"), nm("dhat5") };
            g.workers = { nm("d1"), nm("d2"), nm("d3"), nm("d4"), nm("d5") };
            g.firm_prefs[nm("dhat1")] = { in[0], nm("d1") };
            g.firm_prefs[nm("dhat2")] = { nm("d5"), nm("d2") };
            g.firm_prefs[nm("dhat3")] = { nm("d3") };
            g.firm_prefs[nm("dhat4")] = { nm("d5"), nm("d3"), nm("d4") };
            g.firm_prefs[nm("dhat5")] = { nm("d4"), nm("d1"), nm("d5") };
            g.worker_prefs[nm("d1")] = { nm("dhat1"), nm("dhat5"), out[0] };
            g.worker_prefs[nm("d2")] = { nm("dhat2"), out[1] };
            g.worker_prefs[nm("d3")] = { nm("dhat4"), nm("dhat3") };
            g.worker_prefs[nm("d4")] = { nm("dhat4"), nm("dhat5") };
            g.worker_prefs[nm("d5")] = { nm("dhat5"), nm("dhat2"), nm("dhat4") };
            break;
        }
        }
        return g;
    }

    namespace
    {
        struct Builder
        {
            RawInstance raw;
            std::set<string> seen;

            void firm(const string & name, vector<string> prefs)
            {
                claim(name);
                raw.firms.push_back(name);
                raw.firm_prefs.push_back(std::move(prefs));
            }

            void worker(const string & name, vector<string> prefs)
            {
                claim(name);
                raw.workers.push_back(name);
                raw.worker_prefs.push_back(std::move(prefs));
            }

            void add(const GadgetBlueprint & g)
            {
                for (auto & f : g.firms)
                    firm(f, g.firm_prefs.at(f));
                for (auto & w : g.workers)
                    worker(w, g.worker_prefs.at(w));
            }

            MatchingInstance build() const { return MatchingInstance::validate(raw); }

        private:
            void claim(const string & name)
            {
                if (! seen.insert(name).second)
                    throw DomainError("assembly bug: duplicate agent " + name);
            }
        };

        // the hat firm that consumes a gadget's k-th input socket
        auto input_consumer(GadgetKind kind, const string & tag, int k) -> string
        {
            switch (kind) {
            case GadgetKind::Or:        return (k == 0 ? "ahat1_" : "ahat2_") + tag;
            case GadgetKind::And:       return (k == 0 ? "bhat1_" : "bhat2_") + tag;
            case GadgetKind::Not:       return "ghat1_" + tag;
            case GadgetKind::Branching: return "dhat1_" + tag;
            }
            throw DomainError("unknown gadget kind");
        }

        // the internal worker wired to a gadget's k-th output socket
        auto output_worker(GadgetKind kind, const string & tag, int k) -> string
        {
            switch (kind) {
            case GadgetKind::Or:        return "a3_" + tag;
            case GadgetKind::And:       return "b2_" + tag;
            case GadgetKind::Not:       return "g4_" + tag;
            case GadgetKind::Branching: return (k == 0 ? "d1_" : "d2_") + tag;
            }
            throw DomainError("unknown gadget kind");
        }
    }

    auto build_gadget_harness(GadgetKind kind, const vector<bool> & inputs_matched)
            -> GadgetHarness
    {
        int n_in = (kind == GadgetKind::Or || kind == GadgetKind::And) ? 2 : 1;
        int n_out = kind == GadgetKind::Branching ? 2 : 1;
        if (int(inputs_matched.size()) != n_in)
            throw DomainError("gadget input state arity mismatch");

        GadgetHarness h;
        vector<string> ins, outs;
        for (int k = 0; k < n_in; ++k)
            ins.push_back("q_" + to_string(k + 1));
        for (int k = 0; k < n_out; ++k)
            outs.push_back("p_" + to_string(k + 1));
        h.blueprint = build_gadget(kind, "g", ins, outs);
        h.input_workers = ins;
        h.output_firms = outs;

        Builder b;
        vector<string> pi_names;
        for (int k = 0; k < n_in; ++k)
            if (inputs_matched[k]) {
                string stub = "h_" + to_string(k + 1);
                b.firm(stub, { ins[k] });
                pi_names.push_back(stub);
            }
        b.add(h.blueprint);
        for (auto & f : h.blueprint.firms)
            pi_names.push_back(f);
        for (int k = 0; k < n_out; ++k) {
            b.firm(outs[k], { output_worker(kind, "g", k) });
            pi_names.push_back(outs[k]);
        }
        for (int k = 0; k < n_in; ++k) {
            vector<string> prefs;
            if (inputs_matched[k])
                prefs.push_back("h_" + to_string(k + 1));
            prefs.push_back(input_consumer(kind, "g", k));
            b.worker(ins[k], std::move(prefs));
        }

        h.instance = b.build();
        for (auto & f : pi_names)
            h.pi.firms.push_back(*h.instance.firm_index(f));
        return h;
    }

    auto reduce_qsat(const QuantifiedFormula & f) -> Reduction
    {
        if (! is_normalized(f))
            throw DomainError("reduction requires a normalized formula");

        int n = f.variable_count(), m = f.clause_count();
        auto exists = [&] (int i) { return f.quantifiers[i - 1] == Quantifier::Exists; };
        auto s = [] (int i) { return "s_" + to_string(i); };
        auto t = [] (int i) { return "t_" + to_string(i); };
        auto r = [] (int i) { return "r_" + to_string(i); };
        auto x = [] (int i) { return "x_" + to_string(i); };
        auto xbar = [] (int i) { return "xbar_" + to_string(i); };
        auto z = [] (int i) { return "z_" + to_string(i); };
        auto ij = [] (int i, int j) { return to_string(i) + "_" + to_string(j); };
        auto yhat = [&] (int i, int j) { return "yhat_" + ij(i, j); };
        auto y = [&] (int i, int j) { return "y_" + ij(i, j); };
        auto lhat = [&] (int j, int k) { return "lhat_" + ij(j, k); };
        auto lw = [&] (int j, int k) { return "l_" + ij(j, k); };
        auto chat = [] (int j) { return "chat_" + to_string(j); };
        auto c = [] (int j) { return "c_" + to_string(j); };
        auto copy_tag = [&] (int i, int j) { return "c_" + ij(i, j); };
        auto spine_tag = [] (int i) { return "s_" + to_string(i); };
        auto lit_tag = [&] (int j, int k) { return "l_" + ij(j, k); };
        auto quant_tag = [] (int i) { return "q_" + to_string(i); };

        Builder b;
        vector<string> pi_names;

        if (m == 0) {
            // clause-free shell: the readout r_i is hard-wired to the matrix
            // value TRUE (taken for ForAll variables, left for Exists ones)
            for (int i = 1; i <= n; ++i) {
                b.firm(s(i), { x(i), xbar(i) });
                pi_names.push_back(s(i));
            }
            for (int i = 1; i <= n; ++i) {
                if (exists(i))
                    b.firm(r(i), { z(i) });
                else {
                    b.firm(r(i), { "wtop_" + to_string(i), z(i) });
                    b.worker("wtop_" + to_string(i), { r(i) });
                }
                pi_names.push_back(r(i));
            }
            for (int i = 1; i <= n; ++i) {
                b.firm(t(i), { z(i), x(i) });
                pi_names.push_back(t(i));
            }
            for (int i = 1; i <= n; ++i) {
                b.worker(x(i), { t(i), s(i) });
                b.worker(xbar(i), { s(i) });
                b.worker(z(i), { r(i), t(i) });
            }
        }
        else {
            // who consumes y_{i,j}: the literal firm for a positive occurrence,
            // the literal negator for a negative one
            map<std::pair<int, int>, string> y_consumer;
            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= 3; ++k) {
                    int lit = f.clauses[j - 1][k - 1];
                    y_consumer[{ std::abs(lit), j }] =
                            lit > 0 ? lhat(j, k) : "ghat1_" + lit_tag(j, k);
                }

            // assignment block
            for (int i = 1; i <= n; ++i) {
                b.firm(s(i), { x(i), xbar(i) });
                pi_names.push_back(s(i));
            }

            // copy chains fanning xbar_i out to every clause column
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= m - 1; ++j) {
                    string in = j == 1 ? xbar(i) : "d2_" + copy_tag(i, j - 1);
                    string out1 = yhat(i, j);
                    string out2 = j < m - 1 ? "dhat1_" + copy_tag(i, j + 1) : yhat(i, m);
                    auto g = build_gadget(GadgetKind::Branching, copy_tag(i, j),
                            { in }, { out1, out2 });
                    b.add(g);
                    for (auto & fm : g.firms)
                        pi_names.push_back(fm);
                }

            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= m; ++j) {
                    string top = m == 1 ? xbar(i)
                            : j <= m - 1 ? "d1_" + copy_tag(i, j)
                            : "d2_" + copy_tag(i, m - 1);
                    b.firm(yhat(i, j), { top, y(i, j) });
                    pi_names.push_back(yhat(i, j));
                }

            // literal negators for negative occurrences
            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= 3; ++k) {
                    int lit = f.clauses[j - 1][k - 1];
                    if (lit < 0) {
                        auto g = build_gadget(GadgetKind::Not, lit_tag(j, k),
                                { y(-lit, j) }, { lhat(j, k) });
                        b.add(g);
                        for (auto & fm : g.firms)
                            pi_names.push_back(fm);
                    }
                }

            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= 3; ++k) {
                    int lit = f.clauses[j - 1][k - 1];
                    string top = lit > 0 ? y(lit, j) : "g4_" + lit_tag(j, k);
                    b.firm(lhat(j, k), { top, lw(j, k) });
                    pi_names.push_back(lhat(j, k));
                }

            // per-clause OR pair
            for (int j = 1; j <= m; ++j) {
                auto g = build_gadget(GadgetKind::Or, ij(j, 1),
                        { lw(j, 1), lw(j, 2) }, { "ahat1_" + ij(j, 2) });
                b.add(g);
                for (auto & fm : g.firms)
                    pi_names.push_back(fm);
            }
            for (int j = 1; j <= m; ++j) {
                auto g = build_gadget(GadgetKind::Or, ij(j, 2),
                        { "a3_" + ij(j, 1), lw(j, 3) }, { chat(j) });
                b.add(g);
                for (auto & fm : g.firms)
                    pi_names.push_back(fm);
            }
            for (int j = 1; j <= m; ++j) {
                b.firm(chat(j), { "a3_" + ij(j, 2), c(j) });
                pi_names.push_back(chat(j));
            }

            // AND chain folding the clause outputs
            for (int u = 1; u <= m - 1; ++u) {
                string in1 = u == 1 ? c(1) : "b2_" + to_string(u - 1);
                string out = u < m - 1 ? "bhat1_" + to_string(u + 1) : "dhat1_" + spine_tag(1);
                auto g = build_gadget(GadgetKind::And, to_string(u),
                        { in1, c(u + 1) }, { out });
                b.add(g);
                for (auto & fm : g.firms)
                    pi_names.push_back(fm);
            }

            // quantifier spine distributing the matrix value to every readout
            auto branch_target = [&] (int i) {
                return exists(i) ? "ghat1_" + quant_tag(i) : r(i);
            };
            for (int i = 1; i <= n - 1; ++i) {
                string in = i == 1 ? (m == 1 ? c(1) : "b2_" + to_string(m - 1))
                        : "d2_" + spine_tag(i - 1);
                string out2 = i < n - 1 ? "dhat1_" + spine_tag(i + 1) : branch_target(n);
                auto g = build_gadget(GadgetKind::Branching, spine_tag(i),
                        { in }, { branch_target(i), out2 });
                b.add(g);
                for (auto & fm : g.firms)
                    pi_names.push_back(fm);
            }

            auto quant_signal = [&] (int i) {
                return i <= n - 1 ? "d1_" + spine_tag(i) : "d2_" + spine_tag(n - 1);
            };
            for (int i = 1; i <= n; ++i)
                if (exists(i)) {
                    auto g = build_gadget(GadgetKind::Not, quant_tag(i),
                            { quant_signal(i) }, { r(i) });
                    b.add(g);
                    for (auto & fm : g.firms)
                        pi_names.push_back(fm);
                }

            for (int i = 1; i <= n; ++i) {
                string top = exists(i) ? "g4_" + quant_tag(i) : quant_signal(i);
                b.firm(r(i), { top, z(i) });
                pi_names.push_back(r(i));
            }
            for (int i = 1; i <= n; ++i) {
                b.firm(t(i), { z(i), x(i) });
                pi_names.push_back(t(i));
            }

            // base workers
            for (int i = 1; i <= n; ++i) {
                b.worker(x(i), { t(i), s(i) });
                b.worker(xbar(i), { s(i),
                        m == 1 ? yhat(i, 1) : "dhat1_" + copy_tag(i, 1) });
                b.worker(z(i), { r(i), t(i) });
                for (int j = 1; j <= m; ++j) {
                    vector<string> prefs{ yhat(i, j) };
                    if (auto it = y_consumer.find({ i, j }); it != y_consumer.end())
                        prefs.push_back(it->second);
                    b.worker(y(i, j), std::move(prefs));
                }
            }
            for (int j = 1; j <= m; ++j) {
                for (int k = 1; k <= 3; ++k) {
                    string socket = k == 1 ? "ahat1_" + ij(j, 1)
                            : k == 2 ? "ahat2_" + ij(j, 1)
                            : "ahat2_" + ij(j, 2);
                    b.worker(lw(j, k), { lhat(j, k), socket });
                }
                string succ = m == 1 ? "dhat1_" + spine_tag(1)
                        : j == 1 ? "bhat1_1"
                        : "bhat2_" + to_string(j - 1);
                b.worker(c(j), { chat(j), succ });
            }
        }

        Reduction red{ b.build(), {} };
        if (int(pi_names.size()) != red.instance.firm_count())
            throw DomainError("assembly bug: position order does not cover the firms");
        for (auto & name : pi_names)
            red.pi.firms.push_back(*red.instance.firm_index(name));

        for (int p = 0; p < red.instance.firm_count(); ++p)
            if (red.instance.firm_pref(p).size() > 3)
                throw DomainError("assembly bug: firm degree exceeds three at " +
                        red.instance.firm_name(p));
        for (int q = 0; q < red.instance.worker_count(); ++q)
            if (red.instance.worker_pref(q).size() > 3)
                throw DomainError("assembly bug: worker degree exceeds three at " +
                        red.instance.worker_name(q));
        return red;
    }

    auto assignment_subgame(const Reduction & red, const QuantifiedFormula & f,
            const vector<bool> & a) -> AssignedSubgame
    {
        int n = f.variable_count();
        if (int(a.size()) != n)
            throw DomainError("assignment arity mismatch");

        MatchingInstance cur = red.instance;
        vector<std::pair<string, string>> order;
        for (auto e : induced_order(red.instance, red.pi).sequence)
            order.emplace_back(red.instance.firm_name(e.firm), red.instance.worker_name(e.worker));

        auto erase_pair = [&] (const string & fn, const string & wn) {
            std::erase_if(order, [&] (auto & o) { return o.first == fn && o.second == wn; });
        };
        auto erase_touching = [&] (const string & fn, const string & wn) {
            std::erase_if(order, [&] (auto & o) { return o.first == fn || o.second == wn; });
        };
        auto contract = [&] (const string & fn, const string & wn) {
            cur = cur.contract_pair(Pair{ *cur.firm_index(fn), *cur.worker_index(wn) });
            erase_touching(fn, wn);
        };

        for (int i = 1; i <= n; ++i) {
            string si = "s_" + to_string(i);
            string xi = "x_" + to_string(i);
            string xbi = "xbar_" + to_string(i);
            if (a[i - 1])
                contract(si, xi);
            else {
                cur = cur.delete_pair(Pair{ *cur.firm_index(si), *cur.worker_index(xi) });
                erase_pair(si, xi);
                contract(si, xbi);
            }
        }

        AssignedSubgame sub{ cur, {} };
        for (auto & [fn, wn] : order)
            sub.sigma.sequence.push_back(Pair{ *cur.firm_index(fn), *cur.worker_index(wn) });
        return sub;
    }

    namespace
    {
        auto assignment_string(const vector<bool> & a) -> string
        {
            string out;
            for (bool v : a)
                out += v ? '1' : '0';
            return out;
        }
    }

    auto verify_reduction(const QuantifiedFormula & f, const Reduction & red,
            std::size_t node_budget) -> ReductionReport
    {
        ReductionReport rep;
        rep.formula_true = evaluate_qbf(f);
        int n = f.variable_count(), m = f.clause_count();
        const auto & inst = red.instance;

        for (int p = 0; p < inst.firm_count(); ++p)
            if (inst.firm_pref(p).size() > 3)
                rep.failures.push_back("firm degree exceeds three at " + inst.firm_name(p));
        for (int q = 0; q < inst.worker_count(); ++q)
            if (inst.worker_pref(q).size() > 3)
                rep.failures.push_back("worker degree exceeds three at " + inst.worker_name(q));

        auto sigma = induced_order(inst, red.pi);
        if (! is_position_based(inst, sigma))
            rep.failures.push_back("offering order is not position-based");

        SpeOptions opts{ node_budget, false };
        auto spe = solve_spe(inst, sigma, opts);
        rep.first_action = spe.first_action;
        if ((spe.first_action == FirstAction::Reject) != rep.formula_true)
            rep.failures.push_back(string("decision mismatch: formula is ") +
                    (rep.formula_true ? "TRUE" : "FALSE") + " but the first offer is " +
                    (spe.first_action == FirstAction::Reject ? "rejected" : "accepted"));

        auto named = named_pairs(inst, spe.matching);
        auto nm2 = [] (const string & a, const string & b) { return std::pair(a, b); };

        // the assignment the equilibrium plays
        vector<bool> astar(n);
        for (int i = 1; i <= n; ++i)
            astar[i - 1] = named.contains(nm2("s_" + to_string(i), "x_" + to_string(i)));

        if (m >= 1) {
            for (int i = 1; i <= n; ++i) {
                bool xb = named.contains(nm2("s_" + to_string(i), "xbar_" + to_string(i)));
                for (int j = 1; j <= m; ++j) {
                    string tag = to_string(i) + "_" + to_string(j);
                    if (named.contains(nm2("yhat_" + tag, "y_" + tag)) != xb)
                        rep.failures.push_back("copy-chain mismatch at y_" + tag);
                }
            }
            for (int j = 1; j <= m; ++j) {
                bool sat = false;
                for (int lit : f.clauses[j - 1])
                    sat = sat || (astar[std::abs(lit) - 1] == (lit > 0));
                bool cm = named.contains(nm2("chat_" + to_string(j), "c_" + to_string(j)));
                if (cm != ! sat)
                    rep.failures.push_back("clause readout mismatch at c_" + to_string(j));
            }
        }

        for (unsigned bits = 0; bits < (1u << n); ++bits) {
            vector<bool> a(n);
            for (int i = 0; i < n; ++i)
                a[i] = (bits >> i) & 1;
            auto sub = assignment_subgame(red, f, a);
            auto sres = solve_spe(sub.instance, sub.sigma, opts);
            auto snamed = named_pairs(sub.instance, sres.matching);
            bool phi = evaluate_matrix(f, a);
            for (int i = 1; i <= n; ++i) {
                bool expected = f.quantifiers[i - 1] == Quantifier::Exists ? phi : ! phi;
                bool got = snamed.contains(nm2("r_" + to_string(i), "z_" + to_string(i)));
                if (got != expected)
                    rep.failures.push_back("readout mismatch for variable " + to_string(i) +
                            " under assignment " + assignment_string(a));
            }
        }

        rep.ok = rep.failures.empty();
        return rep;
    }

    auto verify_reduction(const QuantifiedFormula & f, std::size_t node_budget)
            -> ReductionReport
    {
        return verify_reduction(f, reduce_qsat(f), node_budget);
    }
}
