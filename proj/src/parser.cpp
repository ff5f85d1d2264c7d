#include "earleylog/parser.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace earleylog {

using detail::lexer;
using detail::tok;
using detail::var_scope;

namespace {

struct parsed_rule {
    rule r;
    var_scope vars;
    std::size_t line;
};

std::vector<parsed_rule> parse_rules(std::string_view text, symbol_table& tab) {
    lexer lx(text, /*allow_symbolic=*/false);
    std::vector<parsed_rule> out;
    while (!lx.at_end()) {
        parsed_rule pr;
        pr.line = lx.peek().line;
        pr.r = detail::parse_rule(lx, tab, pr.vars);
        out.push_back(std::move(pr));
    }
    return out;
}

void note_arity(std::map<symbol_id, predicate_info>& preds, const literal& l,
                const symbol_table& tab, std::size_t line) {
    auto [it, inserted] = preds.try_emplace(l.pred, predicate_info{l.arity(), false});
    if (!inserted && it->second.arity != l.arity())
        throw validation_error("line " + std::to_string(line) + ": predicate '" +
                               tab.text(l.pred) + "' used with arity " + std::to_string(l.arity()) +
                               " but declared with arity " + std::to_string(it->second.arity));
}

}  // namespace

program parse_program(std::string_view text, symbol_table& tab) {
    std::vector<parsed_rule> parsed = parse_rules(text, tab);

    program p;
    p.predicates[true_symbol] = predicate_info{0, false};

    for (const parsed_rule& pr : parsed) {
        note_arity(p.predicates, pr.r.head, tab, pr.line);
        for (const literal& l : pr.r.body) note_arity(p.predicates, l, tab, pr.line);
    }

    for (const parsed_rule& pr : parsed) {
        const rule& r = pr.r;
        std::string at = "line " + std::to_string(pr.line) + ": ";
        if (r.head.pred == true_symbol)
            throw validation_error(at + "'true' is a reserved built-in predicate");
        if (r.body.empty())
            throw validation_error(at + "rule has no body; use the built-in literal 'true'");
        for (const literal& l : r.body)
            if (l.pred == answer_symbol)
                throw validation_error(at + "'answer' must not appear in a rule body");

        std::set<std::uint32_t> body_vars;
        for (const literal& l : r.body)
            for (const term& t : l.args)
                if (t.is_var()) body_vars.insert(t.value);
        for (const term& t : r.head.args)
            if (t.is_var() && !body_vars.count(t.value))
                throw validation_error(at + "head variable " + pr.vars.names[t.value] +
                                       " does not occur in the body (range restriction)");
    }

    for (parsed_rule& pr : parsed) {
        if (pr.r.head.pred == answer_symbol)
            p.goals.push_back(std::move(pr.r));
        else
            p.rules.push_back(std::move(pr.r));
    }

    // Head predicates define the IDB partition.
    p.predicates[answer_symbol].idb = true;
    for (const rule& r : p.rules) p.predicates[r.head.pred].idb = true;
    for (std::size_t i = 0; i < p.rules.size(); ++i)
        p.rules_by_head[p.rules[i].head.pred].push_back(i);

    return p;
}

database parse_database(std::string_view text, symbol_table& tab) {
    std::vector<parsed_rule> parsed = parse_rules(text, tab);
    database d;
    std::map<symbol_id, predicate_info> arities;
    arities[true_symbol] = predicate_info{0, false};
    for (const parsed_rule& pr : parsed) {
        std::string at = "line " + std::to_string(pr.line) + ": ";
        if (!pr.r.body.empty())
            throw validation_error(at + "database entries must be facts without a body");
        for (const term& t : pr.r.head.args)
            if (t.is_var())
                throw validation_error(at + "fact contains variable " + pr.vars.names[t.value]);
        note_arity(arities, pr.r.head, tab, pr.line);
        d.add(pr.r.head);
    }
    d.freeze();
    return d;
}

void check_database(const program& p, const database& d, const symbol_table& tab) {
    for (const auto& [pred, arity] : d.predicate_arities()) {
        auto it = p.predicates.find(pred);
        if (it == p.predicates.end()) continue;  // unused EDB relation is fine
        if (it->second.idb)
            throw validation_error("database fact uses IDB predicate '" + tab.text(pred) + "'");
        if (it->second.arity != arity)
            throw validation_error("predicate '" + tab.text(pred) + "' has arity " +
                                   std::to_string(arity) + " in the database but arity " +
                                   std::to_string(it->second.arity) + " in the program");
    }
}

rule parse_rule_text(std::string_view text, symbol_table& tab, bool allow_symbolic) {
    lexer lx(text, allow_symbolic);
    var_scope vars;
    rule r = detail::parse_rule(lx, tab, vars);
    if (!lx.at_end()) lx.fail(lx.peek(), "trailing input after rule");
    return r;
}

std::string to_string(const program& p, const symbol_table& tab) {
    std::string out;
    for (const rule& r : p.rules) out += to_string(r, tab) + "\n";
    for (const rule& r : p.goals) out += to_string(r, tab) + "\n";
    return out;
}

std::string to_string(const database& d, const symbol_table& tab) {
    std::string out;
    for (const literal& f : d.facts()) out += to_string(rule{f, {}}, tab) + "\n";
    return out;
}

}  // namespace earleylog
