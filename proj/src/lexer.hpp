// Shared tokenizer and term/literal/rule grammar for .dl program files,
// .facts files, and serialized automaton files. Internal to the library.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "earleylog/core.hpp"

namespace earleylog::detail {

enum class tok {
    ident,     // lowercase identifier
    variable,  // uppercase or '_' identifier
    integer,
    string,    // quoted, text holds the decoded content
    symbolic,  // $<n>, only when the lexer allows it
    lparen,
    rparen,
    comma,
    period,
    implies,  // :-
    assign,   // :=
    colon,
    arrow,  // ->
    semicolon,
    end,
};

struct token {
    tok kind{tok::end};
    std::string text;
    std::uint32_t number{0};
    std::size_t line{1};
    std::size_t column{1};
};

class lexer {
public:
    lexer(std::string_view text, bool allow_symbolic);

    const token& peek();
    token next();
    bool at_end();
    [[noreturn]] void fail(const token& at, const std::string& message) const;

private:
    token scan();

    std::string_view text_;
    std::size_t pos_{0};
    std::size_t line_{1};
    std::size_t column_{1};
    bool allow_symbolic_;
    bool have_peek_{false};
    token peek_;
};

// Per-rule variable numbering by first occurrence; `names` keeps the original
// spellings for diagnostics, indexed by variable number.
struct var_scope {
    std::map<std::string, std::uint32_t> indices;
    std::vector<std::string> names;

    std::uint32_t index_of(const std::string& name);
};

term parse_term(lexer& lx, symbol_table& tab, var_scope& vars);
literal parse_literal(lexer& lx, symbol_table& tab, var_scope& vars);
// head [:- body] .   (empty bodies are allowed here; callers restrict)
rule parse_rule(lexer& lx, symbol_table& tab, var_scope& vars);

}  // namespace earleylog::detail
