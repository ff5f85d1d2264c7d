// Rule normalization, rule schemata, and canonical state forms. Two rules
// that differ only in variable names normalize identically; two states that
// differ only by a bijective renaming of symbolic values canonicalize
// identically (when they are valid, i.e. have pairwise distinct schemata).
#pragma once

#include <map>
#include <optional>
#include <utility>

#include "earleylog/core.hpp"

namespace earleylog {

// Variables renumbered 0..k-1 by first occurrence, head before body,
// arguments left to right. Constants and symbolic values are untouched.
rule normalize(const rule& r);

// Variables of a single literal renumbered by first occurrence; used for
// transition labels.
literal normalize(const literal& l);

// Symbolic values replaced by placeholders b0..bj-1 in first-occurrence
// order; everything else untouched.
rule schema_of(const rule& r);

// Symbolic value ids in first-occurrence order.
std::vector<std::uint32_t> symbolic_pattern(const rule& r);

// A set of normalized rules kept in a canonical total order (schema first,
// then symbolic-value pattern). Build through make_state.
struct state {
    std::vector<rule> rules;

    bool empty() const { return rules.empty(); }
    std::size_t size() const { return rules.size(); }
    bool contains(const rule& r) const;

    auto operator<=>(const state&) const = default;
};

state make_state(std::vector<rule> rules);

// Two member rules with the same schema, if any. A state is valid iff this
// is empty.
std::optional<std::pair<rule, rule>> schema_collision(const state& s);

// Sorts by schema and renumbers symbolic values densely by first occurrence,
// yielding the unique representative of the state's equivalence class.
// Requires a valid state (throws std::logic_error on schema collision).
// `renumbering`, when given, receives the old-id -> new-id map.
state canonicalize(const state& s, std::map<std::uint32_t, std::uint32_t>* renumbering = nullptr);

// True iff the states are equal up to a bijective renaming of symbolic
// values. Both states must be valid.
bool states_equivalent(const state& a, const state& b);

std::optional<std::uint32_t> max_symbolic_id(const state& s);
std::size_t register_count(const state& s);  // number of distinct symbolic values

std::string to_string(const state& s, const symbol_table& tab,
                      term_style style = term_style::display);

}  // namespace earleylog
