// Partial evaluation: abstract execution over symbolic values compiles a
// program and goal into a finite automaton. Equivalent states (equal up to
// a bijective renaming of symbolic values) are fused; states whose rules
// share a schema are rejected, which keeps compilation finite.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "earleylog/deduction.hpp"

namespace earleylog {

// True iff the rules' schemata are pairwise distinct.
bool is_valid(const state& s);

// Selected EDB literals of the state, deduplicated up to variable renaming,
// in canonical order. Each one labels an outgoing transition.
std::vector<literal> symbolic_labels(const state& s, const program& p);

// Where a symbolic value of the canonical target state comes from: either a
// register of the source state or a variable position of the label.
struct register_origin {
    enum class kind { state_register, label_variable };
    kind from{kind::state_register};
    std::uint32_t index{0};

    static register_origin state_register(std::uint32_t i) { return {kind::state_register, i}; }
    static register_origin label_variable(std::uint32_t v) { return {kind::label_variable, v}; }

    auto operator<=>(const register_origin&) const = default;
};

struct register_map {
    std::vector<register_origin> targets;  // indexed by target symbolic id

    auto operator<=>(const register_map&) const = default;
};

struct invalid_state_error : std::runtime_error {
    invalid_state_error(state offending_, rule first_, rule second_);
    state offending;
    rule first;
    rule second;
};

struct symbolic_transition {
    state target;      // canonical
    state target_raw;  // as derived, before canonicalization
    register_map regs;
};

// Substitutes the label's variables with fresh symbolic values, runs the
// state transition on the resulting symbolic fact, and canonicalizes.
// Throws invalid_state_error if the successor has a schema collision.
symbolic_transition symbolic_successor(const state& s, const literal& label, const program& p,
                                       engine_mode mode);

struct transition {
    std::size_t source{0};
    literal label;
    register_map regs;
    std::size_t target{0};

    auto operator<=>(const transition&) const = default;
};

struct automaton {
    engine_mode mode{engine_mode::extended};
    std::vector<state> states;  // canonical, index = state id
    std::size_t initial{0};
    std::vector<transition> transitions;
    std::map<std::size_t, std::vector<literal>> finals;  // state id -> answer templates

    std::size_t register_count_of(std::size_t sid) const { return register_count(states.at(sid)); }
    bool is_final(std::size_t sid) const { return finals.count(sid) != 0; }
    std::vector<const transition*> transitions_from(std::size_t sid) const;

    bool operator==(const automaton&) const = default;
};

struct compile_failure {
    enum class reason { invalid_state, state_cap_exceeded };
    reason why{reason::invalid_state};
    state offending;  // the raw successor that failed
    std::optional<std::pair<rule, rule>> collision;
    std::vector<std::pair<std::size_t, literal>> path;  // (source state id, label) from initial

    std::string render(const symbol_table& tab) const;
};

struct compile_result {
    std::optional<automaton> machine;
    std::optional<compile_failure> failure;

    bool ok() const { return machine.has_value(); }
};

compile_result compile(const program& p, engine_mode mode = engine_mode::extended,
                       std::size_t state_cap = 10000);

std::string export_dot(const automaton& a, const symbol_table& tab);

// Deterministic text format; round-trips losslessly through parse_automaton.
std::string serialize_automaton(const automaton& a, const symbol_table& tab);
automaton parse_automaton(std::string_view text, symbol_table& tab);

}  // namespace earleylog
