/* Compiling quantified Boolean formulas into position-based (3,3) sequential
 * matching games via OR/AND/NOT/BRANCHING gadget simulators, with end-to-end
 * validation of the truth/SPE correspondence at desk scale. */

#ifndef SEQMATCH_QSAT_HPP
#define SEQMATCH_QSAT_HPP

#include <seqmatch/core.hpp>
#include <seqmatch/spe.hpp>

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace seqmatch
{
    enum class Quantifier { Exists, ForAll };

    // Prenex 3-CNF: quantifiers[i] binds variable i+1; clauses hold signed
    // DIMACS literals. Normal form: literals sorted by variable and distinct
    // within each clause, the first quantifier is Exists, and variable 1
    // appears in no clause (a dummy is prepended to guarantee both).
    struct QuantifiedFormula
    {
        std::vector<Quantifier> quantifiers;
        std::vector<std::array<int, 3>> clauses;

        int variable_count() const { return int(quantifiers.size()); }
        int clause_count() const { return int(clauses.size()); }
    };

    // Sorts literals, then prepends a dummy Exists variable (shifting every
    // index) unless the formula already starts with an unused Exists variable.
    // Rejects clauses without three distinct variables.
    QuantifiedFormula normalize(const QuantifiedFormula &);

    bool is_normalized(const QuantifiedFormula &);

    // QDIMACS text -> normalized formula. Rejects clauses whose length is not
    // exactly three distinct variables (no padding), free or re-quantified
    // variables, and malformed headers.
    QuantifiedFormula parse_qdimacs(const std::string & text);

    // brute-force 2^n evaluation with Exists/ForAll semantics
    bool evaluate_qbf(const QuantifiedFormula &, int max_variables = 20);

    // the propositional matrix under a full assignment (true = satisfied)
    bool evaluate_matrix(const QuantifiedFormula &, const std::vector<bool> & assignment);

    enum class GadgetKind { Or, And, Not, Branching };

    // One gate simulator: internal hat firms and plain workers with their
    // preference lists, plus the externally wired sockets. Input sockets are
    // workers listed first by a hat firm; output sockets are firms listed
    // last by an internal worker.
    struct GadgetBlueprint
    {
        GadgetKind kind{};
        std::string tag;
        std::vector<std::string> firms, workers;    // internal, hat order
        std::vector<std::string> inputs, outputs;   // socket agent names
        std::map<std::string, std::vector<std::string>> firm_prefs, worker_prefs;
    };

    // Instantiates the gadget's agents and preferences verbatim for the given
    // sockets. Or/And take two inputs and one output, Not one input and one
    // output, Branching one input and two outputs.
    GadgetBlueprint build_gadget(GadgetKind, const std::string & tag,
            const std::vector<std::string> & input_workers,
            const std::vector<std::string> & output_firms);

    // A gadget embedded with stub agents: each "matched" input worker gets a
    // dedicated stub firm that claims it before the gadget moves, each output
    // firm is a stub listing only its socket worker. Used for the four gate
    // truth-table unit tests.
    struct GadgetHarness
    {
        MatchingInstance instance;
        PositionOrder pi;
        GadgetBlueprint blueprint;
        std::vector<std::string> input_workers;   // stub wire workers q, q'
        std::vector<std::string> output_firms;    // stub consumers p, p'
    };

    GadgetHarness build_gadget_harness(GadgetKind, const std::vector<bool> & inputs_matched);

    struct Reduction
    {
        MatchingInstance instance;
        PositionOrder pi;
    };

    // Full assembly: assignment block, per-variable copy chains, per-clause
    // literal and OR machinery, the AND chain, the branching spine, and the
    // quantifier readouts, together with the position order over firms.
    // Requires a normalized formula. The game's first offer is (s_1, x_1);
    // x_1 rejects it in the SPE iff the formula is TRUE.
    Reduction reduce_qsat(const QuantifiedFormula &);

    // The subgame reached when each variable block plays the given assignment:
    // contract (s_i, x_i) when a_i is true, otherwise delete (s_i, x_i) and
    // contract (s_i, xbar_i).
    struct AssignedSubgame
    {
        MatchingInstance instance;
        OfferingOrder sigma;
    };

    AssignedSubgame assignment_subgame(const Reduction &, const QuantifiedFormula &,
            const std::vector<bool> & assignment);

    struct ReductionReport
    {
        bool ok = false;
        bool formula_true = false;
        FirstAction first_action = FirstAction::Accept;
        std::vector<std::string> failures;
    };

    // Checks, against a pre-built game (normally reduce_qsat's output, or a
    // mutated copy in fault-injection tests):
    //   - the instance is (<=3, <=3) and the order is position-based;
    //   - x_1 rejects the first offer iff evaluate_qbf is TRUE;
    //   - in the full SPE, y_{i,j} is matched with yhat_{i,j} iff xbar_i is
    //     matched with s_i, and c_j is matched with chat_j iff clause j is
    //     unsatisfied under the equilibrium assignment;
    //   - for every full assignment, in the assigned subgame (r_i, z_i) is an
    //     SPE pair iff the matrix is true (Exists variables) resp. false
    //     (ForAll variables).
    ReductionReport verify_reduction(const QuantifiedFormula &, const Reduction &,
            std::size_t node_budget = 5000000);

    ReductionReport verify_reduction(const QuantifiedFormula &,
            std::size_t node_budget = 5000000);
}

#endif
