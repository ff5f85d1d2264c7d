#include "lexer.hpp"

#include <cctype>

namespace earleylog::detail {

lexer::lexer(std::string_view text, bool allow_symbolic)
    : text_(text), allow_symbolic_(allow_symbolic) {}

const token& lexer::peek() {
    if (!have_peek_) {
        peek_ = scan();
        have_peek_ = true;
    }
    return peek_;
}

token lexer::next() {
    peek();
    have_peek_ = false;
    return peek_;
}

bool lexer::at_end() { return peek().kind == tok::end; }

void lexer::fail(const token& at, const std::string& message) const {
    throw parse_error(at.line, at.column, message);
}

token lexer::scan() {
    // Skip whitespace and % line comments.
    while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (c == '\n') {
            ++line_;
            column_ = 1;
            ++pos_;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++column_;
            ++pos_;
        } else if (c == '%') {
            while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        } else {
            break;
        }
    }

    token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
        t.kind = tok::end;
        return t;
    }

    auto advance = [&](std::size_t n) {
        pos_ += n;
        column_ += n;
    };

    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            ++column_;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? tok::variable
                                                                           : tok::ident;
        return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            ++column_;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.kind = tok::integer;
        return t;
    }
    if (c == '"') {
        advance(1);
        std::string out;
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n')
                throw parse_error(t.line, t.column, "unterminated string constant");
            char d = text_[pos_];
            if (d == '"') {
                advance(1);
                break;
            }
            if (d == '\\') {
                advance(1);
                if (pos_ >= text_.size())
                    throw parse_error(t.line, t.column, "unterminated string constant");
                char e = text_[pos_];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default:
                        throw parse_error(line_, column_, std::string("unknown escape '\\") + e + "'");
                }
                advance(1);
            } else {
                out += d;
                advance(1);
            }
        }
        t.kind = tok::string;
        t.text = std::move(out);
        return t;
    }
    if (c == '$') {
        if (!allow_symbolic_)
            throw parse_error(t.line, t.column, "symbolic values are not allowed here");
        advance(1);
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw parse_error(t.line, t.column, "expected digits after '$'");
        std::uint32_t n = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            n = n * 10 + static_cast<std::uint32_t>(text_[pos_] - '0');
            advance(1);
        }
        t.kind = tok::symbolic;
        t.number = n;
        return t;
    }
    if (c == ':') {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            advance(2);
            t.kind = tok::implies;
            return t;
        }
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
            advance(2);
            t.kind = tok::assign;
            return t;
        }
        advance(1);
        t.kind = tok::colon;
        return t;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance(2);
        t.kind = tok::arrow;
        return t;
    }
    switch (c) {
        case '(': advance(1); t.kind = tok::lparen; return t;
        case ')': advance(1); t.kind = tok::rparen; return t;
        case ',': advance(1); t.kind = tok::comma; return t;
        case '.': advance(1); t.kind = tok::period; return t;
        case ';': advance(1); t.kind = tok::semicolon; return t;
        default:
            throw parse_error(t.line, t.column, std::string("unexpected character '") + c + "'");
    }
}

std::uint32_t var_scope::index_of(const std::string& name) {
    auto it = indices.find(name);
    if (it != indices.end()) return it->second;
    std::uint32_t idx = static_cast<std::uint32_t>(names.size());
    indices.emplace(name, idx);
    names.push_back(name);
    return idx;
}

term parse_term(lexer& lx, symbol_table& tab, var_scope& vars) {
    token t = lx.next();
    switch (t.kind) {
        case tok::variable:
            return term::var(vars.index_of(t.text));
        case tok::ident:
        case tok::integer:
        case tok::string:
            return term::constant(tab.intern(t.text));
        case tok::symbolic:
            return term::symbolic(t.number);
        default:
            lx.fail(t, "expected a term");
    }
}

literal parse_literal(lexer& lx, symbol_table& tab, var_scope& vars) {
    token t = lx.next();
    if (t.kind != tok::ident) lx.fail(t, "expected a predicate name");
    literal l;
    l.pred = tab.intern(t.text);
    if (lx.peek().kind != tok::lparen) return l;  // zero-arity literal
    lx.next();
    if (lx.peek().kind == tok::rparen) {
        lx.next();
        return l;
    }
    while (true) {
        l.args.push_back(parse_term(lx, tab, vars));
        token sep = lx.next();
        if (sep.kind == tok::rparen) break;
        if (sep.kind != tok::comma) lx.fail(sep, "expected ',' or ')' in argument list");
    }
    return l;
}

rule parse_rule(lexer& lx, symbol_table& tab, var_scope& vars) {
    rule r;
    r.head = parse_literal(lx, tab, vars);
    token t = lx.next();
    if (t.kind == tok::period) return r;
    if (t.kind != tok::implies) lx.fail(t, "expected ':-' or '.' after rule head");
    while (true) {
        r.body.push_back(parse_literal(lx, tab, vars));
        token sep = lx.next();
        if (sep.kind == tok::period) break;
        if (sep.kind != tok::comma) lx.fail(sep, "expected ',' or '.' after body literal");
    }
    return r;
}

}  // namespace earleylog::detail
