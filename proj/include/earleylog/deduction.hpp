// The deduction engine: instantiation, reduction, last literal resolution,
// initial and successor states, and the state-graph search that computes
// answers. Rules are processed at their selected literal; the selection
// strategy is pluggable in principle but only leftmost is implemented.
#pragma once

#include <deque>
#include <optional>

#include "earleylog/normalize.hpp"
#include "earleylog/unify.hpp"

namespace earleylog {

enum class engine_mode { basic, extended };

enum class selection_strategy { leftmost };

inline std::size_t selected_index(const rule&, selection_strategy = selection_strategy::leftmost) {
    return 0;
}

inline const literal& selected_literal(const rule& r) { return r.body.front(); }

// How a rule entered a state; drives the trace listings.
struct prov_entry {
    enum class kind {
        goal,
        instantiation,
        last_literal_resolution,
        edb_reduction,
        idb_reduction,
        copy,
    };
    kind k{};
    rule derived;
    std::optional<rule> source;               // consumed rule (parent-state rule or caller)
    std::optional<rule> via;                  // idb_reduction: fact; copy: rule depended on
    std::optional<std::size_t> program_rule;  // instantiation/llr: index into program rules;
                                              // goal: index into goals
};

// Instance of prog_rule whose (renamed) head unifies with the selected
// literal of state_rule; nullopt when they do not unify.
std::optional<rule> instantiate(const rule& state_rule, const rule& prog_rule);

// Resolves the selected literal of r against a ground fact, dropping it.
std::optional<rule> reduce(const rule& r, const literal& fact);

// Full resolution of a single-literal rule against prog_rule.
std::optional<rule> last_literal_resolve(const rule& r, const rule& prog_rule);

// True iff there is a dependency chain inside s from r to target: each link
// unifies a selected literal with the next rule's head. target itself need
// not be a member of s.
bool depends_on(const rule& r, const rule& target, const state& s);

state initial_state(const program& p, engine_mode mode,
                    std::vector<prov_entry>* prov = nullptr);

// One state transition on a ground EDB fact: reduction with the fact,
// closure under reduction with derived facts, instantiation closure, and
// dependency-based copying. nullopt when the fact reduces nothing.
std::optional<state> successor_state(const state& s, const literal& fact, const program& p,
                                     engine_mode mode, std::vector<prov_entry>* prov = nullptr);

struct eval_result {
    std::set<literal> answers;
    std::size_t states_visited{0};
    std::size_t transitions{0};
};

// Explores the state graph from the initial state, feeding each state every
// database fact that matches one of its selected EDB literals. States are
// deduplicated by canonical form, so evaluation terminates on cyclic data.
eval_result evaluate(const program& p, const database& d, engine_mode mode);

struct trace_record {
    state st;
    std::vector<prov_entry> listing;         // rules in derivation order
    std::optional<literal> fact;             // transition fact (none for the initial state)
    std::optional<std::size_t> fact_index;   // database index; true_fact_index for `true`
    std::size_t parent{0};                   // index of the source record
    std::optional<std::size_t> duplicate_of; // set when st repeats an earlier record's state
};

// Deterministic replay of evaluate: facts in file order, states expanded
// FIFO. Duplicate successors are recorded but not expanded.
std::vector<trace_record> trace(const program& p, const database& d, engine_mode mode);

}  // namespace earleylog
