// Core data model for function-free Datalog: interned symbols, terms,
// literals, rules, programs, and fact databases.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace earleylog {

using symbol_id = std::uint32_t;

// Reserved symbols; interned by every table at construction, so their ids
// are the same everywhere.
inline constexpr symbol_id true_symbol = 0;
inline constexpr symbol_id answer_symbol = 1;

class symbol_table {
public:
    symbol_table();

    symbol_id intern(std::string_view text);
    std::optional<symbol_id> lookup(std::string_view text) const;
    const std::string& text(symbol_id id) const;
    std::size_t size() const { return texts_.size(); }

private:
    std::vector<std::string> texts_;
    std::unordered_map<std::string, symbol_id> ids_;
};

enum class term_kind : std::uint8_t { variable, constant, symbolic };

// A term is a variable X<i>, an interned constant, or a symbolic value
// standing in for a data value that is unknown until run time. Symbolic
// values never occur in parsed programs or queries.
struct term {
    term_kind kind{term_kind::variable};
    std::uint32_t value{0};

    static term var(std::uint32_t index) { return {term_kind::variable, index}; }
    static term constant(symbol_id sym) { return {term_kind::constant, sym}; }
    static term symbolic(std::uint32_t id) { return {term_kind::symbolic, id}; }

    bool is_var() const { return kind == term_kind::variable; }
    bool is_constant() const { return kind == term_kind::constant; }
    bool is_symbolic() const { return kind == term_kind::symbolic; }

    auto operator<=>(const term&) const = default;
};

struct literal {
    symbol_id pred{0};
    std::vector<term> args;

    std::size_t arity() const { return args.size(); }
    bool ground() const;

    auto operator<=>(const literal&) const = default;
};

struct rule {
    literal head;
    std::vector<literal> body;

    bool is_fact() const { return body.empty(); }

    auto operator<=>(const rule&) const = default;
};

// `display` renders symbolic values paper-style (c0), `machine` uses $0 so
// that serialized files re-parse unambiguously, `schema` renders b0.
enum class term_style { display, machine, schema };

std::string to_string(const term& t, const symbol_table& tab, term_style style = term_style::display);
std::string to_string(const literal& l, const symbol_table& tab, term_style style = term_style::display);
std::string to_string(const rule& r, const symbol_table& tab, term_style style = term_style::display);

template <typename F>
void for_each_term(const literal& l, F&& f) {
    for (const term& t : l.args) f(t);
}

template <typename F>
void for_each_term(const rule& r, F&& f) {
    for_each_term(r.head, f);
    for (const literal& l : r.body) for_each_term(l, f);
}

std::set<std::uint32_t> variables_of(const rule& r);
std::set<std::uint32_t> symbolic_values_of(const rule& r);
bool rule_ground(const rule& r);

struct predicate_info {
    std::size_t arity{0};
    bool idb{false};
};

struct program {
    std::vector<rule> rules;  // program rules in file order
    std::vector<rule> goals;  // rules with head predicate `answer`, file order
    std::map<symbol_id, predicate_info> predicates;
    std::map<symbol_id, std::vector<std::size_t>> rules_by_head;

    bool is_idb(symbol_id pred) const;
    std::size_t max_body_length() const;
};

// Ground EDB facts, deduplicated, with (predicate, bound-position) lookup
// indexes built by freeze(). The 0-ary predicate `true` acts as an
// always-present fact and is reported via the sentinel index below.
class database {
public:
    static constexpr std::size_t true_fact_index = static_cast<std::size_t>(-1);

    void add(const literal& fact);
    void freeze();
    bool frozen() const { return frozen_; }

    const std::vector<literal>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }
    const literal& fact(std::size_t index) const;
    bool contains(const literal& fact) const;

    std::optional<std::size_t> predicate_arity(symbol_id pred) const;
    const std::map<symbol_id, std::size_t>& predicate_arities() const { return arity_; }

    // Indices (in file order) of facts matching `query`: constant positions
    // must be equal and repeated variables must bind consistently. Query
    // terms must not be symbolic.
    std::vector<std::size_t> match(const literal& query) const;

private:
    std::vector<literal> facts_;
    std::set<literal> seen_;
    bool frozen_{false};
    literal true_fact_{true_symbol, {}};
    std::map<symbol_id, std::vector<std::size_t>> by_pred_;
    std::map<std::pair<symbol_id, std::uint32_t>,
             std::map<std::vector<symbol_id>, std::vector<std::size_t>>>
        index_;
    std::map<symbol_id, std::size_t> arity_;
};

struct parse_error : std::runtime_error {
    parse_error(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line;
    std::size_t column;
};

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace earleylog
