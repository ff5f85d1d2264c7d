// Text formats: .dl program files and .facts databases (UTF-8, % comments).
#pragma once

#include <string_view>

#include "earleylog/core.hpp"

namespace earleylog {

// Parses and validates a program: range restriction, arity consistency,
// `answer` only in heads, non-empty bodies. Head predicates become IDB,
// everything else EDB.
program parse_program(std::string_view text, symbol_table& tab);

database parse_database(std::string_view text, symbol_table& tab);

// Pairing checks that need both sides: database facts must use EDB
// predicates of the program with matching arities.
void check_database(const program& p, const database& d, const symbol_table& tab);

// One rule from text; handy for tests and for the automaton file format.
rule parse_rule_text(std::string_view text, symbol_table& tab, bool allow_symbolic = false);

std::string to_string(const program& p, const symbol_table& tab);
std::string to_string(const database& d, const symbol_table& tab);

}  // namespace earleylog
