#include "earleylog/normalize.hpp"

#include <algorithm>
#include <tuple>

namespace earleylog {

namespace {

template <term_kind Kind>
rule renumber(const rule& r) {
    std::map<std::uint32_t, std::uint32_t> seen;
    auto map_term = [&](const term& t) {
        if (t.kind != Kind) return t;
        auto [it, inserted] =
            seen.try_emplace(t.value, static_cast<std::uint32_t>(seen.size()));
        return term{Kind, it->second};
    };
    rule out;
    out.head.pred = r.head.pred;
    for (const term& t : r.head.args) out.head.args.push_back(map_term(t));
    for (const literal& l : r.body) {
        literal nl;
        nl.pred = l.pred;
        for (const term& t : l.args) nl.args.push_back(map_term(t));
        out.body.push_back(std::move(nl));
    }
    return out;
}

}  // namespace

rule normalize(const rule& r) { return renumber<term_kind::variable>(r); }

literal normalize(const literal& l) {
    rule wrapped{l, {}};
    return normalize(wrapped).head;
}

rule schema_of(const rule& r) { return renumber<term_kind::symbolic>(r); }

std::vector<std::uint32_t> symbolic_pattern(const rule& r) {
    std::vector<std::uint32_t> out;
    std::set<std::uint32_t> seen;
    for_each_term(r, [&](const term& t) {
        if (t.is_symbolic() && seen.insert(t.value).second) out.push_back(t.value);
    });
    return out;
}

bool state::contains(const rule& r) const {
    return std::find(rules.begin(), rules.end(), r) != rules.end();
}

state make_state(std::vector<rule> rules) {
    std::vector<std::tuple<rule, std::vector<std::uint32_t>, rule>> keyed;
    keyed.reserve(rules.size());
    for (rule& r : rules) keyed.emplace_back(schema_of(r), symbolic_pattern(r), std::move(r));
    std::sort(keyed.begin(), keyed.end());
    keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
    state s;
    s.rules.reserve(keyed.size());
    for (auto& [schema, pattern, r] : keyed) s.rules.push_back(std::move(r));
    return s;
}

std::optional<std::pair<rule, rule>> schema_collision(const state& s) {
    // make_state orders rules by schema, so colliding schemata are adjacent.
    for (std::size_t i = 1; i < s.rules.size(); ++i)
        if (schema_of(s.rules[i - 1]) == schema_of(s.rules[i]))
            return std::make_pair(s.rules[i - 1], s.rules[i]);
    return std::nullopt;
}

state canonicalize(const state& s, std::map<std::uint32_t, std::uint32_t>* renumbering) {
    if (schema_collision(s))
        throw std::logic_error("canonicalize: state is not valid (two rules share a schema)");
    std::map<std::uint32_t, std::uint32_t> renum;
    for (const rule& r : s.rules)
        for_each_term(r, [&](const term& t) {
            if (t.is_symbolic())
                renum.try_emplace(t.value, static_cast<std::uint32_t>(renum.size()));
        });
    std::vector<rule> rules;
    rules.reserve(s.rules.size());
    for (const rule& r : s.rules) {
        rule nr;
        nr.head.pred = r.head.pred;
        auto map_term = [&](const term& t) {
            return t.is_symbolic() ? term::symbolic(renum.at(t.value)) : t;
        };
        for (const term& t : r.head.args) nr.head.args.push_back(map_term(t));
        for (const literal& l : r.body) {
            literal nl;
            nl.pred = l.pred;
            for (const term& t : l.args) nl.args.push_back(map_term(t));
            nr.body.push_back(std::move(nl));
        }
        rules.push_back(std::move(nr));
    }
    if (renumbering) *renumbering = std::move(renum);
    return make_state(std::move(rules));
}

bool states_equivalent(const state& a, const state& b) {
    if (schema_collision(a) || schema_collision(b))
        throw std::invalid_argument("states_equivalent requires valid states");
    return canonicalize(a) == canonicalize(b);
}

std::optional<std::uint32_t> max_symbolic_id(const state& s) {
    std::optional<std::uint32_t> out;
    for (const rule& r : s.rules)
        for_each_term(r, [&](const term& t) {
            if (t.is_symbolic() && (!out || t.value > *out)) out = t.value;
        });
    return out;
}

std::size_t register_count(const state& s) {
    std::set<std::uint32_t> ids;
    for (const rule& r : s.rules)
        for_each_term(r, [&](const term& t) {
            if (t.is_symbolic()) ids.insert(t.value);
        });
    return ids.size();
}

std::string to_string(const state& s, const symbol_table& tab, term_style style) {
    std::string out;
    for (const rule& r : s.rules) out += to_string(r, tab, style) + "\n";
    return out;
}

}  // namespace earleylog
