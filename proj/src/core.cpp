#include "earleylog/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace earleylog {

symbol_table::symbol_table() {
    intern("true");
    intern("answer");
}

symbol_id symbol_table::intern(std::string_view text) {
    auto it = ids_.find(std::string(text));
    if (it != ids_.end()) return it->second;
    symbol_id id = static_cast<symbol_id>(texts_.size());
    texts_.emplace_back(text);
    ids_.emplace(texts_.back(), id);
    return id;
}

std::optional<symbol_id> symbol_table::lookup(std::string_view text) const {
    auto it = ids_.find(std::string(text));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& symbol_table::text(symbol_id id) const {
    if (id >= texts_.size()) throw std::out_of_range("symbol_table::text: unknown symbol id");
    return texts_[id];
}

namespace {

bool is_plain_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

bool is_plain_integer(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string constant_text(symbol_id sym, const symbol_table& tab) {
    const std::string& s = tab.text(sym);
    if (is_plain_identifier(s) || is_plain_integer(s)) return s;
    return quoted(s);
}

}  // namespace

std::string to_string(const term& t, const symbol_table& tab, term_style style) {
    switch (t.kind) {
        case term_kind::variable:
            return "X" + std::to_string(t.value);
        case term_kind::constant:
            return constant_text(t.value, tab);
        case term_kind::symbolic: {
            const char* prefix = style == term_style::machine ? "$"
                               : style == term_style::schema  ? "b"
                                                              : "c";
            return prefix + std::to_string(t.value);
        }
    }
    return {};
}

std::string to_string(const literal& l, const symbol_table& tab, term_style style) {
    std::string out = tab.text(l.pred);
    if (l.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < l.args.size(); ++i) {
        if (i) out += ',';
        out += to_string(l.args[i], tab, style);
    }
    out += ')';
    return out;
}

std::string to_string(const rule& r, const symbol_table& tab, term_style style) {
    std::string out = to_string(r.head, tab, style);
    if (!r.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i) out += ", ";
            out += to_string(r.body[i], tab, style);
        }
    }
    out += '.';
    return out;
}

bool literal::ground() const {
    return std::none_of(args.begin(), args.end(), [](const term& t) { return t.is_var(); });
}

std::set<std::uint32_t> variables_of(const rule& r) {
    std::set<std::uint32_t> out;
    for_each_term(r, [&](const term& t) {
        if (t.is_var()) out.insert(t.value);
    });
    return out;
}

std::set<std::uint32_t> symbolic_values_of(const rule& r) {
    std::set<std::uint32_t> out;
    for_each_term(r, [&](const term& t) {
        if (t.is_symbolic()) out.insert(t.value);
    });
    return out;
}

bool rule_ground(const rule& r) {
    if (!r.head.ground()) return false;
    return std::all_of(r.body.begin(), r.body.end(), [](const literal& l) { return l.ground(); });
}

bool program::is_idb(symbol_id pred) const {
    auto it = predicates.find(pred);
    return it != predicates.end() && it->second.idb;
}

std::size_t program::max_body_length() const {
    std::size_t n = 0;
    for (const rule& r : rules) n = std::max(n, r.body.size());
    for (const rule& r : goals) n = std::max(n, r.body.size());
    return n;
}

void database::add(const literal& fact) {
    if (frozen_) throw std::logic_error("database::add: database is frozen");
    if (fact == true_fact_) return;  // built in, always present
    if (!seen_.insert(fact).second) return;
    auto [it, inserted] = arity_.try_emplace(fact.pred, fact.arity());
    if (!inserted && it->second != fact.arity())
        throw validation_error("predicate '" + std::to_string(fact.pred) +
                               "' used with conflicting arities in database");
    facts_.push_back(fact);
}

const literal& database::fact(std::size_t index) const {
    if (index == true_fact_index) return true_fact_;
    return facts_.at(index);
}

bool database::contains(const literal& f) const {
    if (f == true_fact_) return true;
    return seen_.count(f) != 0;
}

std::optional<std::size_t> database::predicate_arity(symbol_id pred) const {
    if (pred == true_symbol) return 0;
    auto it = arity_.find(pred);
    if (it == arity_.end()) return std::nullopt;
    return it->second;
}

namespace {
// Eagerly index every bound-position pattern for small arities; wider
// relations fall back to a scan of the predicate list.
constexpr std::size_t max_indexed_arity = 6;
}  // namespace

void database::freeze() {
    if (frozen_) return;
    frozen_ = true;
    for (std::size_t i = 0; i < facts_.size(); ++i) {
        const literal& f = facts_[i];
        by_pred_[f.pred].push_back(i);
        std::size_t a = f.arity();
        if (a > max_indexed_arity) continue;
        for (std::uint32_t mask = 0; mask < (1u << a); ++mask) {
            std::vector<symbol_id> key;
            for (std::size_t pos = 0; pos < a; ++pos)
                if (mask & (1u << pos)) key.push_back(f.args[pos].value);
            index_[{f.pred, mask}][key].push_back(i);
        }
    }
}

std::vector<std::size_t> database::match(const literal& query) const {
    if (!frozen_) throw std::logic_error("database::match: freeze() the database first");
    if (query.pred == true_symbol && query.args.empty()) return {true_fact_index};

    auto ar = predicate_arity(query.pred);
    if (!ar || *ar != query.arity()) return {};

    std::uint32_t mask = 0;
    std::vector<symbol_id> key;
    for (std::size_t pos = 0; pos < query.args.size(); ++pos) {
        const term& t = query.args[pos];
        if (t.is_symbolic())
            throw std::logic_error("database::match: symbolic term in query");
        if (t.is_constant()) {
            mask |= (1u << pos);
            key.push_back(t.value);
        }
    }

    const std::vector<std::size_t>* candidates = nullptr;
    std::vector<std::size_t> scanned;
    if (query.arity() <= max_indexed_arity) {
        auto it = index_.find({query.pred, mask});
        if (it == index_.end()) return {};
        auto kit = it->second.find(key);
        if (kit == it->second.end()) return {};
        candidates = &kit->second;
    } else {
        auto it = by_pred_.find(query.pred);
        if (it == by_pred_.end()) return {};
        for (std::size_t i : it->second) {
            const literal& f = facts_[i];
            bool ok = true;
            for (std::size_t pos = 0; pos < query.args.size() && ok; ++pos)
                if (query.args[pos].is_constant() && query.args[pos].value != f.args[pos].value)
                    ok = false;
            if (ok) scanned.push_back(i);
        }
        candidates = &scanned;
    }

    // Repeated query variables must match equal values.
    std::vector<std::size_t> out;
    for (std::size_t i : *candidates) {
        const literal& f = facts_[i];
        std::map<std::uint32_t, symbol_id> binding;
        bool ok = true;
        for (std::size_t pos = 0; pos < query.args.size() && ok; ++pos) {
            const term& t = query.args[pos];
            if (!t.is_var()) continue;
            auto [bit, inserted] = binding.try_emplace(t.value, f.args[pos].value);
            if (!inserted && bit->second != f.args[pos].value) ok = false;
        }
        if (ok) out.push_back(i);
    }
    return out;
}

parse_error::parse_error(std::size_t line_, std::size_t column_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                         ": " + message),
      line(line_),
      column(column_) {}

}  // namespace earleylog
