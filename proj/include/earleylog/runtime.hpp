// Runs a compiled automaton against a concrete database. Symbolic values
// become registers holding actual data values; transitions query the
// database with their label instantiated from the register file. A visited
// set over (state, registers) pairs makes cyclic data terminate.
#pragma once

#include <memory>
#include <optional>

#include "earleylog/parteval.hpp"

namespace earleylog {

struct unknown_predicate_error : validation_error {
    using validation_error::validation_error;
};

struct run_stats {
    std::size_t frames_expanded{0};
    std::size_t facts_fetched{0};
    std::size_t visited_pairs{0};
};

struct run_result {
    std::set<literal> answers;
    run_stats stats;
    std::vector<std::string> warnings;
};

// Label predicates missing from the database schema (or carried with a
// different arity); such transitions match nothing.
std::vector<std::string> schema_warnings(const automaton& a, const database& d,
                                         const symbol_table& tab);

// Depth-first search from (initial, empty registers); answer templates are
// emitted on every arrival at a final state. With strict=true an unknown
// label predicate raises unknown_predicate_error instead of a warning.
run_result run(const automaton& a, const database& d, const symbol_table& tab,
               bool strict = false);

// Same traversal as run, but yields answers lazily in emission order,
// suppressing duplicates. Consuming the whole stream gives run's answers.
class answer_stream {
public:
    answer_stream(const automaton& a, const database& d, const symbol_table& tab,
                  bool strict = false);
    ~answer_stream();
    answer_stream(answer_stream&&) noexcept;
    answer_stream& operator=(answer_stream&&) noexcept;

    std::optional<literal> next();

private:
    struct impl;
    std::unique_ptr<impl> impl_;
};

}  // namespace earleylog
