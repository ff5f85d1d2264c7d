#include "earleylog/runtime.hpp"

#include <algorithm>
#include <deque>

namespace earleylog {

namespace {

using register_file = std::vector<symbol_id>;

literal bind_registers(const literal& l, const register_file& regs) {
    literal out;
    out.pred = l.pred;
    out.args.reserve(l.args.size());
    for (const term& t : l.args)
        out.args.push_back(t.is_symbolic() ? term::constant(regs.at(t.value)) : t);
    return out;
}

// Values matched at the label's variable positions. Consistency of repeated
// variables is guaranteed by database::match.
std::vector<symbol_id> label_bindings(const literal& label, const literal& fact) {
    std::vector<symbol_id> vals;
    for (std::size_t pos = 0; pos < label.args.size(); ++pos) {
        const term& t = label.args[pos];
        if (!t.is_var()) continue;
        if (t.value >= vals.size()) vals.resize(t.value + 1);
        vals[t.value] = fact.args[pos].value;
    }
    return vals;
}

register_file apply_register_map(const register_map& rm, const register_file& source,
                                 const std::vector<symbol_id>& label_vals) {
    register_file out;
    out.reserve(rm.targets.size());
    for (const register_origin& o : rm.targets)
        out.push_back(o.from == register_origin::kind::label_variable ? label_vals.at(o.index)
                                                                      : source.at(o.index));
    return out;
}

std::vector<std::vector<const transition*>> transitions_by_source(const automaton& a) {
    std::vector<std::vector<const transition*>> out(a.states.size());
    for (const transition& t : a.transitions) out[t.source].push_back(&t);
    return out;
}

void check_schema(const automaton& a, const database& d, const symbol_table& tab, bool strict,
                  std::vector<std::string>* warnings) {
    std::set<symbol_id> reported;
    for (const transition& t : a.transitions) {
        symbol_id pred = t.label.pred;
        if (!reported.insert(pred).second) continue;
        auto arity = d.predicate_arity(pred);
        if (arity && *arity == t.label.arity()) continue;
        std::string msg =
            arity ? "predicate '" + tab.text(pred) + "' has arity " + std::to_string(*arity) +
                        " in the database but the automaton queries it with arity " +
                        std::to_string(t.label.arity())
                  : "predicate '" + tab.text(pred) + "/" + std::to_string(t.label.arity()) +
                        "' is not present in the database; treating it as empty";
        if (strict) throw unknown_predicate_error(msg);
        if (warnings) warnings->push_back(std::move(msg));
    }
}

}  // namespace

std::vector<std::string> schema_warnings(const automaton& a, const database& d,
                                         const symbol_table& tab) {
    std::vector<std::string> out;
    check_schema(a, d, tab, /*strict=*/false, &out);
    return out;
}

namespace {

struct runner {
    const automaton& a;
    const database& d;
    std::vector<std::vector<const transition*>> by_source;
    std::set<std::pair<std::size_t, register_file>> visited;
    run_result res;

    runner(const automaton& a_, const database& d_) : a(a_), d(d_), by_source(transitions_by_source(a_)) {}

    void visit(std::size_t sid, const register_file& regs) {
        if (!visited.insert({sid, regs}).second) return;
        ++res.stats.frames_expanded;
        auto fit = a.finals.find(sid);
        if (fit != a.finals.end())
            for (const literal& tpl : fit->second) res.answers.insert(bind_registers(tpl, regs));
        for (const transition* t : by_source[sid]) {
            literal query = bind_registers(t->label, regs);
            for (std::size_t idx : d.match(query)) {
                ++res.stats.facts_fetched;
                const literal& fact = d.fact(idx);
                visit(t->target, apply_register_map(t->regs, regs, label_bindings(query, fact)));
            }
        }
    }
};

}  // namespace

run_result run(const automaton& a, const database& d, const symbol_table& tab, bool strict) {
    runner r(a, d);
    check_schema(a, d, tab, strict, &r.res.warnings);
    r.visit(a.initial, {});
    r.res.stats.visited_pairs = r.visited.size();
    return r.res;
}

struct answer_stream::impl {
    const automaton& a;
    const database& d;
    std::vector<std::vector<const transition*>> by_source;
    std::set<std::pair<std::size_t, register_file>> visited;
    std::set<literal> emitted;
    std::deque<literal> pending;

    struct frame {
        std::size_t sid;
        register_file regs;
        std::size_t next_transition{0};
        std::vector<std::size_t> matches;
        std::size_t next_match{0};
        bool matches_loaded{false};
    };
    std::vector<frame> stack;

    impl(const automaton& a_, const database& d_)
        : a(a_), d(d_), by_source(transitions_by_source(a_)) {}

    void enter(std::size_t sid, register_file regs) {
        if (!visited.insert({sid, regs}).second) return;
        auto fit = a.finals.find(sid);
        if (fit != a.finals.end())
            for (const literal& tpl : fit->second) pending.push_back(bind_registers(tpl, regs));
        stack.push_back(frame{sid, std::move(regs), 0, {}, 0, false});
    }

    std::optional<literal> next() {
        while (true) {
            while (!pending.empty()) {
                literal l = std::move(pending.front());
                pending.pop_front();
                if (emitted.insert(l).second) return l;
            }
            if (stack.empty()) return std::nullopt;
            frame& f = stack.back();
            const auto& outs = by_source[f.sid];
            if (f.next_transition >= outs.size()) {
                stack.pop_back();
                continue;
            }
            const transition* t = outs[f.next_transition];
            if (!f.matches_loaded) {
                f.matches = d.match(bind_registers(t->label, f.regs));
                f.next_match = 0;
                f.matches_loaded = true;
            }
            if (f.next_match >= f.matches.size()) {
                ++f.next_transition;
                f.matches_loaded = false;
                continue;
            }
            std::size_t idx = f.matches[f.next_match++];
            literal query = bind_registers(t->label, f.regs);
            register_file next_regs =
                apply_register_map(t->regs, f.regs, label_bindings(query, d.fact(idx)));
            enter(t->target, std::move(next_regs));  // invalidates f
        }
    }
};

answer_stream::answer_stream(const automaton& a, const database& d, const symbol_table& tab,
                             bool strict)
    : impl_(std::make_unique<impl>(a, d)) {
    check_schema(a, d, tab, strict, nullptr);
    impl_->enter(a.initial, {});
}

answer_stream::~answer_stream() = default;
answer_stream::answer_stream(answer_stream&&) noexcept = default;
answer_stream& answer_stream::operator=(answer_stream&&) noexcept = default;

std::optional<literal> answer_stream::next() { return impl_->next(); }

}  // namespace earleylog
