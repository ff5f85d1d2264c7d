#include "earleylog/deduction.hpp"

#include <algorithm>
#include <map>

namespace earleylog {

std::optional<rule> instantiate(const rule& state_rule, const rule& prog_rule) {
    if (state_rule.body.empty()) return std::nullopt;
    rule renamed = rename_apart(prog_rule, variables_of(state_rule));
    auto mgu = unify(selected_literal(state_rule), renamed.head);
    if (!mgu) return std::nullopt;
    return normalize(apply(*mgu, renamed));
}

std::optional<rule> reduce(const rule& r, const literal& fact) {
    if (r.body.empty()) return std::nullopt;
    auto mgu = unify(selected_literal(r), fact);
    if (!mgu) return std::nullopt;
    rule rest;
    rest.head = r.head;
    rest.body.assign(r.body.begin() + 1, r.body.end());
    return normalize(apply(*mgu, rest));
}

std::optional<rule> last_literal_resolve(const rule& r, const rule& prog_rule) {
    if (r.body.size() != 1) return std::nullopt;
    rule renamed = rename_apart(prog_rule, variables_of(r));
    auto mgu = unify(selected_literal(r), renamed.head);
    if (!mgu) return std::nullopt;
    rule resolved;
    resolved.head = r.head;
    resolved.body = renamed.body;
    return normalize(apply(*mgu, resolved));
}

namespace {

bool directly_depends(const rule& r, const rule& target) {
    if (r.body.empty()) return false;
    rule renamed = rename_apart(target, variables_of(r));
    return unify(selected_literal(r), renamed.head).has_value();
}

// Closes `rules` under instantiation; in extended mode single-literal rules
// get last literal resolution instead.
void derivation_closure(std::set<rule>& rules, std::deque<rule> work, const program& p,
                        engine_mode mode, std::vector<prov_entry>* prov) {
    while (!work.empty()) {
        rule r = std::move(work.front());
        work.pop_front();
        if (r.body.empty()) continue;
        const literal& sel = selected_literal(r);
        if (!p.is_idb(sel.pred)) continue;
        auto it = p.rules_by_head.find(sel.pred);
        if (it == p.rules_by_head.end()) continue;
        bool use_llr = mode == engine_mode::extended && r.body.size() == 1;
        for (std::size_t idx : it->second) {
            const rule& pr = p.rules[idx];
            auto derived = use_llr ? last_literal_resolve(r, pr) : instantiate(r, pr);
            if (!derived || !rules.insert(*derived).second) continue;
            if (prov)
                prov->push_back({use_llr ? prov_entry::kind::last_literal_resolution
                                         : prov_entry::kind::instantiation,
                                 *derived, r, std::nullopt, idx});
            work.push_back(*derived);
        }
    }
}

}  // namespace

bool depends_on(const rule& r, const rule& target, const state& s) {
    if (r.body.empty()) return false;
    std::set<rule> visited;
    std::deque<rule> work{r};
    while (!work.empty()) {
        rule u = std::move(work.front());
        work.pop_front();
        if (directly_depends(u, target)) return true;
        for (const rule& w : s.rules) {
            if (w.body.empty() || visited.count(w)) continue;
            if (directly_depends(u, w)) {
                visited.insert(w);
                work.push_back(w);
            }
        }
    }
    return false;
}

state initial_state(const program& p, engine_mode mode, std::vector<prov_entry>* prov) {
    std::set<rule> rules;
    std::deque<rule> work;
    for (std::size_t i = 0; i < p.goals.size(); ++i) {
        rule g = normalize(p.goals[i]);
        if (rules.insert(g).second) {
            if (prov) prov->push_back({prov_entry::kind::goal, g, std::nullopt, std::nullopt, i});
            work.push_back(std::move(g));
        }
    }
    derivation_closure(rules, std::move(work), p, mode, prov);
    return make_state({rules.begin(), rules.end()});
}

std::optional<state> successor_state(const state& s, const literal& fact, const program& p,
                                     engine_mode mode, std::vector<prov_entry>* prov) {
    std::set<rule> sp;
    std::vector<prov_entry> log;

    // Step 1: reduction with the transition fact.
    std::deque<literal> new_facts;
    for (const rule& r : s.rules) {
        auto red = reduce(r, fact);
        if (!red || !sp.insert(*red).second) continue;
        log.push_back({prov_entry::kind::edb_reduction, *red, r, std::nullopt, std::nullopt});
        if (red->is_fact()) new_facts.push_back(red->head);
    }
    if (sp.empty()) return std::nullopt;

    // Step 2: reduction of rules in s with facts derived into the successor.
    // In extended mode only rules with more than one body literal take part.
    while (!new_facts.empty()) {
        literal f = std::move(new_facts.front());
        new_facts.pop_front();
        for (const rule& r : s.rules) {
            if (r.body.empty()) continue;
            if (mode == engine_mode::extended && r.body.size() < 2) continue;
            auto red = reduce(r, f);
            if (!red || !sp.insert(*red).second) continue;
            log.push_back({prov_entry::kind::idb_reduction, *red, r, rule{f, {}}, std::nullopt});
            if (red->is_fact()) new_facts.push_back(red->head);
        }
    }

    // Step 3: instantiation / last literal resolution closure.
    derivation_closure(sp, {sp.begin(), sp.end()}, p, mode, &log);

    // Step 4: copy rules of s that depend on a successor rule that still has
    // a body. In extended mode only rules with more than one body literal
    // are copied; shorter rules may still relay the dependency.
    std::vector<rule> targets;
    for (const rule& r : sp)
        if (!r.body.empty()) targets.push_back(r);

    std::set<rule> reaches;               // rules of s with a dependency chain into sp
    std::map<rule, rule> witness;         // rule -> successor-state rule it depends on
    bool grew = true;
    while (grew) {
        grew = false;
        for (const rule& r : s.rules) {
            if (r.body.empty() || reaches.count(r)) continue;
            for (const rule& t : targets) {
                if (!directly_depends(r, t)) continue;
                reaches.insert(r);
                witness.emplace(r, t);
                grew = true;
                break;
            }
            if (reaches.count(r)) continue;
            for (const auto& [w, wit] : witness) {
                if (w == r || !directly_depends(r, w)) continue;
                reaches.insert(r);
                witness.emplace(r, sp.count(w) ? w : wit);
                grew = true;
                break;
            }
        }
    }
    std::size_t copies_from = log.size();
    for (const rule& r : s.rules) {  // state order keeps the log deterministic
        if (!reaches.count(r)) continue;
        if (mode == engine_mode::extended && r.body.size() < 2) continue;
        if (!sp.insert(r).second) continue;
        log.push_back({prov_entry::kind::copy, r, r, witness.at(r), std::nullopt});
    }
    // Point each copy at the earliest successor rule it directly depends on;
    // fall back to the transitive witness when the chain ran through a rule
    // that was not itself copied.
    for (std::size_t i = copies_from; i < log.size(); ++i) {
        const rule& r = log[i].derived;
        for (const prov_entry& e : log) {
            if (e.derived.body.empty() || e.derived == r) continue;
            if (directly_depends(r, e.derived)) {
                log[i].via = e.derived;
                break;
            }
        }
    }

    if (prov) *prov = std::move(log);
    return make_state({sp.begin(), sp.end()});
}

namespace {

// Database facts that can reduce some rule of s, in file order. The built-in
// `true` fact sorts last; its index sentinel is the largest size_t.
std::vector<std::size_t> candidate_facts(const state& s, const database& d, const program& p) {
    std::set<std::size_t> out;
    std::set<literal> tried;
    for (const rule& r : s.rules) {
        if (r.body.empty()) continue;
        const literal& sel = selected_literal(r);
        if (p.is_idb(sel.pred)) continue;
        if (!tried.insert(normalize(sel)).second) continue;
        for (std::size_t idx : d.match(sel)) out.insert(idx);
    }
    return {out.begin(), out.end()};
}

std::set<literal> answer_facts(const state& s) {
    std::set<literal> out;
    for (const rule& r : s.rules)
        if (r.is_fact() && r.head.pred == answer_symbol) out.insert(r.head);
    return out;
}

}  // namespace

eval_result evaluate(const program& p, const database& d, engine_mode mode) {
    eval_result res;
    state init = initial_state(p, mode);
    std::map<state, std::size_t> visited;
    std::deque<const state*> queue;
    auto [it0, fresh0] = visited.emplace(std::move(init), 0);
    queue.push_back(&it0->first);
    while (!queue.empty()) {
        const state& s = *queue.front();
        queue.pop_front();
        auto answers = answer_facts(s);
        res.answers.insert(answers.begin(), answers.end());
        for (std::size_t idx : candidate_facts(s, d, p)) {
            auto succ = successor_state(s, d.fact(idx), p, mode);
            if (!succ) continue;
            ++res.transitions;
            auto [it, fresh] = visited.emplace(std::move(*succ), visited.size());
            if (fresh) queue.push_back(&it->first);
        }
    }
    res.states_visited = visited.size();
    return res;
}

std::vector<trace_record> trace(const program& p, const database& d, engine_mode mode) {
    std::vector<trace_record> records;
    std::map<state, std::size_t> visited;

    trace_record init;
    init.st = initial_state(p, mode, &init.listing);
    visited.emplace(init.st, 0);
    records.push_back(std::move(init));

    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t rec = queue.front();
        queue.pop_front();
        const state s = records[rec].st;
        for (std::size_t idx : candidate_facts(s, d, p)) {
            trace_record next;
            next.fact = d.fact(idx);
            next.fact_index = idx;
            next.parent = rec;
            auto succ = successor_state(s, *next.fact, p, mode, &next.listing);
            if (!succ) continue;
            next.st = std::move(*succ);
            auto it = visited.find(next.st);
            if (it != visited.end()) {
                next.duplicate_of = it->second;
                records.push_back(std::move(next));
                continue;
            }
            visited.emplace(next.st, records.size());
            records.push_back(std::move(next));
            queue.push_back(records.size() - 1);
        }
    }
    return records;
}

}  // namespace earleylog
