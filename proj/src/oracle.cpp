#include "earleylog/oracle.hpp"

#include <map>
#include <vector>

namespace earleylog {

namespace {

using binding_map = std::map<std::uint32_t, std::pair<term_kind, std::uint32_t>>;

bool match_literal(const literal& pattern, const literal& fact, binding_map& binds,
                   std::vector<std::uint32_t>& bound_here) {
    if (pattern.pred != fact.pred || pattern.arity() != fact.arity()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const term& pt = pattern.args[i];
        const term& ft = fact.args[i];
        if (pt.is_var()) {
            auto [it, inserted] = binds.try_emplace(pt.value, std::make_pair(ft.kind, ft.value));
            if (inserted)
                bound_here.push_back(pt.value);
            else if (it->second != std::make_pair(ft.kind, ft.value))
                return false;
        } else if (pt.kind != ft.kind || pt.value != ft.value) {
            return false;
        }
    }
    return true;
}

literal substitute(const literal& pattern, const binding_map& binds) {
    literal out;
    out.pred = pattern.pred;
    out.args.reserve(pattern.args.size());
    for (const term& t : pattern.args) {
        if (t.is_var()) {
            auto it = binds.find(t.value);
            if (it == binds.end())
                throw std::logic_error("oracle: unbound head variable (rule not range restricted?)");
            out.args.push_back(term{it->second.first, it->second.second});
        } else {
            out.args.push_back(t);
        }
    }
    return out;
}

struct evaluator {
    std::set<literal> facts;
    std::map<symbol_id, std::vector<literal>> by_pred;
    std::vector<literal> derived;

    void match_body(const rule& r, std::size_t i, binding_map& binds) {
        if (i == r.body.size()) {
            literal head = substitute(r.head, binds);
            if (!facts.count(head)) derived.push_back(std::move(head));
            return;
        }
        auto it = by_pred.find(r.body[i].pred);
        if (it == by_pred.end()) return;
        for (const literal& f : it->second) {
            std::vector<std::uint32_t> bound_here;
            if (match_literal(r.body[i], f, binds, bound_here))
                match_body(r, i + 1, binds);
            for (std::uint32_t v : bound_here) binds.erase(v);
        }
    }
};

}  // namespace

fact_set fixpoint(const program& p, const database& d) {
    evaluator ev;
    auto insert = [&](const literal& f) {
        if (ev.facts.insert(f).second) ev.by_pred[f.pred].push_back(f);
    };
    insert(literal{true_symbol, {}});
    for (const literal& f : d.facts()) insert(f);

    std::vector<const rule*> rules;
    for (const rule& r : p.rules) rules.push_back(&r);
    for (const rule& r : p.goals) rules.push_back(&r);

    bool changed = true;
    while (changed) {
        changed = false;
        ev.derived.clear();
        for (const rule* r : rules) {
            binding_map binds;
            ev.match_body(*r, 0, binds);
        }
        for (const literal& f : ev.derived) {
            if (ev.facts.count(f)) continue;
            insert(f);
            changed = true;
        }
    }
    return fact_set{std::move(ev.facts)};
}

std::set<literal> answers_of(const fact_set& f) {
    std::set<literal> out;
    for (const literal& l : f.facts)
        if (l.pred == answer_symbol) out.insert(l);
    return out;
}

}  // namespace earleylog
