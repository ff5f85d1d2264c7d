#include "earleylog/parteval.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "earleylog/parser.hpp"
#include "lexer.hpp"

namespace earleylog {

bool is_valid(const state& s) { return !schema_collision(s).has_value(); }

std::vector<literal> symbolic_labels(const state& s, const program& p) {
    std::set<literal> labels;
    for (const rule& r : s.rules) {
        if (r.body.empty()) continue;
        const literal& sel = selected_literal(r);
        if (p.is_idb(sel.pred)) continue;
        labels.insert(normalize(sel));
    }
    return {labels.begin(), labels.end()};
}

invalid_state_error::invalid_state_error(state offending_, rule first_, rule second_)
    : std::runtime_error("state is not valid: two rules share a schema"),
      offending(std::move(offending_)),
      first(std::move(first_)),
      second(std::move(second_)) {}

symbolic_transition symbolic_successor(const state& s, const literal& label, const program& p,
                                       engine_mode mode) {
    auto max_id = max_symbolic_id(s);
    std::uint32_t fresh_base = max_id ? *max_id + 1 : 0;

    literal symbolic_fact;
    symbolic_fact.pred = label.pred;
    for (const term& t : label.args)
        symbolic_fact.args.push_back(t.is_var() ? term::symbolic(fresh_base + t.value) : t);

    auto raw = successor_state(s, symbolic_fact, p, mode);
    if (!raw)
        throw std::logic_error("symbolic_successor: label reduces no rule of the state");

    if (auto collision = schema_collision(*raw))
        throw invalid_state_error(*raw, collision->first, collision->second);

    std::map<std::uint32_t, std::uint32_t> renum;
    symbolic_transition out;
    out.target_raw = *raw;
    out.target = canonicalize(*raw, &renum);
    out.regs.targets.resize(renum.size());
    for (const auto& [old_id, new_id] : renum) {
        out.regs.targets[new_id] = old_id >= fresh_base
                                       ? register_origin::label_variable(old_id - fresh_base)
                                       : register_origin::state_register(old_id);
    }
    return out;
}

std::vector<const transition*> automaton::transitions_from(std::size_t sid) const {
    std::vector<const transition*> out;
    for (const transition& t : transitions)
        if (t.source == sid) out.push_back(&t);
    return out;
}

namespace {

std::vector<literal> answer_templates(const state& s) {
    std::vector<literal> out;
    for (const rule& r : s.rules)
        if (r.is_fact() && r.head.pred == answer_symbol) out.push_back(r.head);
    return out;
}

std::vector<std::pair<std::size_t, literal>> path_to(
    const std::vector<std::optional<std::pair<std::size_t, literal>>>& parents, std::size_t sid) {
    std::vector<std::pair<std::size_t, literal>> path;
    std::optional<std::size_t> cur = sid;
    while (cur && parents[*cur]) {
        path.push_back(*parents[*cur]);
        cur = parents[*cur]->first;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

compile_result compile(const program& p, engine_mode mode, std::size_t state_cap) {
    compile_result res;
    automaton a;
    a.mode = mode;

    state init = canonicalize(initial_state(p, mode));
    std::map<state, std::size_t> ids;
    std::vector<std::optional<std::pair<std::size_t, literal>>> parents;
    ids.emplace(init, 0);
    a.states.push_back(std::move(init));
    parents.push_back(std::nullopt);

    std::deque<std::size_t> work{0};
    while (!work.empty()) {
        std::size_t sid = work.front();
        work.pop_front();
        auto templates = answer_templates(a.states[sid]);
        if (!templates.empty()) a.finals.emplace(sid, std::move(templates));

        for (const literal& label : symbolic_labels(a.states[sid], p)) {
            symbolic_transition tr;
            try {
                tr = symbolic_successor(a.states[sid], label, p, mode);
            } catch (const invalid_state_error& e) {
                compile_failure f;
                f.why = compile_failure::reason::invalid_state;
                f.offending = e.offending;
                f.collision = {e.first, e.second};
                f.path = path_to(parents, sid);
                f.path.emplace_back(sid, label);
                res.failure = std::move(f);
                return res;
            }
            std::size_t tid;
            auto it = ids.find(tr.target);
            if (it != ids.end()) {
                tid = it->second;  // equivalent state exists: fuse
            } else {
                tid = a.states.size();
                if (tid >= state_cap) {
                    compile_failure f;
                    f.why = compile_failure::reason::state_cap_exceeded;
                    f.offending = tr.target;
                    f.path = path_to(parents, sid);
                    f.path.emplace_back(sid, label);
                    res.failure = std::move(f);
                    return res;
                }
                ids.emplace(tr.target, tid);
                a.states.push_back(tr.target);
                parents.emplace_back(std::in_place, sid, label);
                work.push_back(tid);
            }
            a.transitions.push_back({sid, label, std::move(tr.regs), tid});
        }
    }
    res.machine = std::move(a);
    return res;
}

std::string compile_failure::render(const symbol_table& tab) const {
    std::ostringstream out;
    if (why == reason::state_cap_exceeded) {
        out << "compilation stopped: state cap exceeded\n";
    } else {
        out << "compilation failed: reached a state where two rules share a schema\n";
        if (collision) {
            out << "  " << to_string(collision->first, tab) << "\n";
            out << "  " << to_string(collision->second, tab) << "\n";
            out << "  shared schema: " << to_string(schema_of(collision->first), tab, term_style::schema)
                << "\n";
        }
    }
    if (!path.empty()) {
        out << "transition path from the initial state:\n";
        for (const auto& [sid, label] : path)
            out << "  S" << sid << " --" << to_string(label, tab) << "-->\n";
    }
    return out.str();
}

std::string export_dot(const automaton& a, const symbol_table& tab) {
    std::ostringstream out;
    out << "digraph earleylog {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    for (std::size_t sid = 0; sid < a.states.size(); ++sid) {
        out << "  s" << sid << " [label=\"S" << sid << "\"";
        if (a.is_final(sid)) out << " shape=doublecircle";
        out << "];\n";
    }
    for (const transition& t : a.transitions) {
        out << "  s" << t.source << " -> s" << t.target << " [label=\""
            << to_string(t.label, tab);
        for (std::size_t i = 0; i < t.regs.targets.size(); ++i) {
            const register_origin& o = t.regs.targets[i];
            out << "\\nc" << i << " := ";
            if (o.from == register_origin::kind::label_variable)
                out << "X" << o.index;
            else
                out << "c" << o.index;
        }
        out << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

namespace {
constexpr const char* automaton_header = "earleylog automaton 1";
}

std::string serialize_automaton(const automaton& a, const symbol_table& tab) {
    std::ostringstream out;
    out << automaton_header << "\n";
    out << "mode " << (a.mode == engine_mode::basic ? "basic" : "extended") << "\n";
    out << "states " << a.states.size() << "\n";
    out << "initial " << a.initial << "\n";
    for (std::size_t sid = 0; sid < a.states.size(); ++sid) {
        out << "state " << sid << (a.is_final(sid) ? " final" : "") << "\n";
        for (const rule& r : a.states[sid].rules)
            out << "  " << to_string(r, tab, term_style::machine) << "\n";
    }
    for (const transition& t : a.transitions) {
        out << "transition " << t.source << " -> " << t.target << " : "
            << to_string(t.label, tab, term_style::machine);
        for (std::size_t i = 0; i < t.regs.targets.size(); ++i) {
            const register_origin& o = t.regs.targets[i];
            out << (i == 0 ? " ; " : ", ") << "$" << i << " := ";
            if (o.from == register_origin::kind::label_variable)
                out << "X" << o.index;
            else
                out << "$" << o.index;
        }
        out << "\n";
    }
    for (const auto& [sid, templates] : a.finals)
        for (const literal& l : templates)
            out << "final " << sid << " : " << to_string(l, tab, term_style::machine) << "\n";
    out << "end\n";
    return out.str();
}

namespace {

using detail::lexer;
using detail::tok;
using detail::var_scope;

std::size_t expect_number(lexer& lx, const char* what) {
    auto t = lx.next();
    if (t.kind != tok::integer) lx.fail(t, std::string("expected ") + what);
    return std::stoull(t.text);
}

void expect(lexer& lx, tok kind, const char* what) {
    auto t = lx.next();
    if (t.kind != kind) lx.fail(t, std::string("expected ") + what);
}

std::string expect_ident(lexer& lx, const char* what) {
    auto t = lx.next();
    if (t.kind != tok::ident) lx.fail(t, std::string("expected ") + what);
    return t.text;
}

}  // namespace

automaton parse_automaton(std::string_view text, symbol_table& tab) {
    // Line oriented: rule lines are indented, everything else starts with a
    // section keyword, so predicates named like keywords cannot confuse it.
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= text.size();) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        lines.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines[0] != automaton_header)
        throw validation_error("not an earleylog automaton file (bad header)");

    automaton a;
    std::size_t n_states = 0;
    bool saw_end = false;
    std::set<std::size_t> declared_final;
    std::vector<rule>* current_rules = nullptr;
    std::vector<std::vector<rule>> state_rules;

    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        std::string_view line = lines[ln];
        if (line.empty()) continue;
        if (saw_end) throw validation_error("content after 'end'");
        if (line.starts_with("  ")) {
            if (!current_rules)
                throw validation_error("rule line outside a state section");
            current_rules->push_back(parse_rule_text(line, tab, /*allow_symbolic=*/true));
            continue;
        }
        current_rules = nullptr;
        lexer lx(line, /*allow_symbolic=*/true);
        std::string keyword = expect_ident(lx, "a section keyword");
        if (keyword == "mode") {
            std::string mode = expect_ident(lx, "mode name");
            if (mode != "basic" && mode != "extended")
                throw validation_error("unknown mode " + mode);
            a.mode = mode == "basic" ? engine_mode::basic : engine_mode::extended;
        } else if (keyword == "states") {
            n_states = expect_number(lx, "state count");
        } else if (keyword == "initial") {
            a.initial = expect_number(lx, "initial state id");
        } else if (keyword == "state") {
            std::size_t sid = expect_number(lx, "state id");
            if (sid != state_rules.size())
                throw validation_error("state ids must be consecutive from 0");
            if (lx.peek().kind == tok::ident && lx.peek().text == "final") {
                lx.next();
                declared_final.insert(sid);
            }
            state_rules.emplace_back();
            current_rules = &state_rules.back();
        } else if (keyword == "transition") {
            transition tr;
            tr.source = expect_number(lx, "source state id");
            expect(lx, tok::arrow, "'->'");
            tr.target = expect_number(lx, "target state id");
            expect(lx, tok::colon, "':'");
            var_scope vars;
            tr.label = detail::parse_literal(lx, tab, vars);
            if (lx.peek().kind == tok::semicolon) {
                lx.next();
                while (true) {
                    auto lhs = lx.next();
                    if (lhs.kind != tok::symbolic) lx.fail(lhs, "expected $<target register>");
                    if (lhs.number != tr.regs.targets.size())
                        throw validation_error("register assignments must be consecutive from $0");
                    expect(lx, tok::assign, "':='");
                    auto rhs = lx.next();
                    if (rhs.kind == tok::symbolic) {
                        tr.regs.targets.push_back(register_origin::state_register(rhs.number));
                    } else if (rhs.kind == tok::variable && rhs.text.size() > 1 &&
                               rhs.text[0] == 'X' &&
                               rhs.text.find_first_not_of("0123456789", 1) == std::string::npos) {
                        tr.regs.targets.push_back(register_origin::label_variable(
                            static_cast<std::uint32_t>(std::stoul(rhs.text.substr(1)))));
                    } else {
                        lx.fail(rhs, "expected $<register> or X<label variable>");
                    }
                    if (lx.peek().kind != tok::comma) break;
                    lx.next();
                }
            }
            a.transitions.push_back(std::move(tr));
        } else if (keyword == "final") {
            std::size_t sid = expect_number(lx, "state id");
            expect(lx, tok::colon, "':'");
            var_scope vars;
            a.finals[sid].push_back(detail::parse_literal(lx, tab, vars));
        } else if (keyword == "end") {
            saw_end = true;
        } else {
            throw validation_error("unknown section keyword '" + keyword + "'");
        }
    }
    if (!saw_end) throw validation_error("missing 'end'");
    for (auto& rules : state_rules) a.states.push_back(make_state(std::move(rules)));

    if (a.states.size() != n_states)
        throw validation_error("state count does not match the number of state sections");
    if (a.initial >= a.states.size()) throw validation_error("initial state id out of range");
    for (std::size_t sid : declared_final)
        if (!a.finals.count(sid))
            throw validation_error("state marked final but no answer template given");
    for (const auto& [sid, templates] : a.finals) {
        if (sid >= a.states.size()) throw validation_error("final state id out of range");
        if (!declared_final.count(sid))
            throw validation_error("answer template for a state not marked final");
        (void)templates;
    }
    for (const transition& t : a.transitions) {
        if (t.source >= a.states.size() || t.target >= a.states.size())
            throw validation_error("transition state id out of range");
        if (t.regs.targets.size() != a.register_count_of(t.target))
            throw validation_error("register map size does not match the target state");
        std::size_t label_vars = 0;
        for (const term& arg : t.label.args)
            if (arg.is_var()) label_vars = std::max<std::size_t>(label_vars, arg.value + 1);
        for (const register_origin& o : t.regs.targets) {
            if (o.from == register_origin::kind::label_variable && o.index >= label_vars)
                throw validation_error("register map references an unknown label variable");
            if (o.from == register_origin::kind::state_register &&
                o.index >= a.register_count_of(t.source))
                throw validation_error("register map references an unknown source register");
        }
    }
    return a;
}

}  // namespace earleylog
