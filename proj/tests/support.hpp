// Shared fixtures and property checks for the test suites. The checks throw
// std::runtime_error with a description on failure so that both the doctest
// suites and the acceptance runner can use them.
#pragma once

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "earleylog/corpusgen.hpp"
#include "earleylog/deduction.hpp"
#include "earleylog/oracle.hpp"
#include "earleylog/parser.hpp"
#include "earleylog/parteval.hpp"
#include "earleylog/runtime.hpp"

namespace testsupport {

using namespace earleylog;

struct bundle {
    symbol_table tab;
    program p;
    database d;
};

inline bundle load(std::string_view prog, std::string_view facts) {
    bundle b;
    b.p = parse_program(prog, b.tab);
    b.d = parse_database(facts, b.tab);
    check_database(b.p, b.d, b.tab);
    return b;
}

inline state state_of(const std::vector<std::string>& rule_texts, symbol_table& tab) {
    std::vector<rule> rules;
    for (const std::string& t : rule_texts)
        rules.push_back(parse_rule_text(t, tab, /*allow_symbolic=*/true));
    return make_state(std::move(rules));
}

inline literal fact_of(const std::string& text, symbol_table& tab) {
    return parse_rule_text(text, tab, /*allow_symbolic=*/true).head;
}

inline std::set<literal> answer_set(const std::vector<std::string>& texts, symbol_table& tab) {
    std::set<literal> out;
    for (const std::string& t : texts) out.insert(fact_of(t, tab));
    return out;
}

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

inline void expect(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

// ---------------------------------------------------------------------------
// Random generators over a small term space.

struct literal_gen {
    std::mt19937_64 rng;
    symbol_table& tab;
    std::vector<symbol_id> preds;    // arity fixed per predicate
    std::vector<std::size_t> arity;
    std::vector<symbol_id> consts;

    literal_gen(symbol_table& tab_, std::uint64_t seed) : rng(seed), tab(tab_) {
        preds = {tab.intern("p"), tab.intern("q"), tab.intern("r")};
        arity = {2, 3, 1};
        consts = {tab.intern("a"), tab.intern("b"), tab.intern("1")};
    }

    term random_term(std::uint32_t max_var) {
        switch (rng() % 2) {
            case 0: return term::var(static_cast<std::uint32_t>(rng() % max_var));
            default: return term::constant(consts[rng() % consts.size()]);
        }
    }

    literal random_literal(std::size_t which, std::uint32_t max_var) {
        literal l;
        l.pred = preds[which];
        for (std::size_t i = 0; i < arity[which]; ++i) l.args.push_back(random_term(max_var));
        return l;
    }

    std::pair<literal, literal> random_pair(std::uint32_t max_var) {
        std::size_t which = rng() % preds.size();
        return {random_literal(which, max_var), random_literal(which, max_var)};
    }
};

// All substitutions with the given domain over a small image space.
inline std::vector<substitution> all_substitutions(const std::vector<std::uint32_t>& domain,
                                                   const std::vector<term>& images) {
    std::vector<substitution> out{substitution{}};
    for (std::uint32_t v : domain) {
        std::vector<substitution> next;
        for (const substitution& s : out)
            for (const term& img : images) {
                if (img.is_var() && img.value == v) {
                    next.push_back(s);  // leaving v unbound stands in for v -> v
                    continue;
                }
                substitution s2 = s;
                s2.bind(v, img);
                next.push_back(s2);
            }
        out = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Property checks.

// Soundness, failure completeness, and most-generality of unify against a
// brute-force enumeration. sigma is most general iff every unifier tau
// satisfies tau(sigma(v)) == tau(v) for all variables v of the pair.
inline void check_unify_properties(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    std::vector<term> images = {term::var(0), term::var(1), term::var(2),
                                term::constant(gen.consts[0]), term::constant(gen.consts[1])};
    for (int i = 0; i < iterations; ++i) {
        auto [a, b] = gen.random_pair(3);
        auto mgu = unify(a, b);
        if (mgu) {
            expect(apply(*mgu, a) == apply(*mgu, b),
                   "unify soundness: sigma(a) != sigma(b) for " + to_string(a, tab) + " and " +
                       to_string(b, tab));
        }
        rule pair_holder{a, {b}};
        std::vector<std::uint32_t> domain(variables_of(pair_holder).begin(),
                                          variables_of(pair_holder).end());
        if (domain.size() > 4) continue;
        for (const substitution& tau : all_substitutions(domain, images)) {
            bool unifies = apply(tau, a) == apply(tau, b);
            if (!mgu) {
                expect(!unifies, "unify completeness: reported failure but " + to_string(a, tab) +
                                     " and " + to_string(b, tab) + " have a unifier");
                continue;
            }
            if (!unifies) continue;
            for (std::uint32_t v : domain) {
                term via_sigma = apply(tau, apply(*mgu, term::var(v)));
                term direct = apply(tau, term::var(v));
                expect(via_sigma == direct, "unify most-generality violated for " +
                                                to_string(a, tab) + " and " + to_string(b, tab));
            }
        }
    }
}

// apply(compose(s,t), r) == apply(t, apply(s, r))
inline void check_apply_composition(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    for (int i = 0; i < iterations; ++i) {
        auto [a, b] = gen.random_pair(4);
        rule r{a, {b}};
        substitution s, t;
        for (std::uint32_t v = 0; v < 4; ++v) {
            if (gen.rng() % 2) s.bind(v, gen.random_term(4));
            if (gen.rng() % 2) t.bind(v, gen.random_term(4));
        }
        expect(apply(compose(s, t), r) == apply(t, apply(s, r)),
               "apply is not a homomorphism under composition");
    }
}

inline rule random_variable_renaming(const rule& r, std::mt19937_64& rng) {
    auto vars = variables_of(r);
    std::vector<std::uint32_t> images(vars.begin(), vars.end());
    std::shuffle(images.begin(), images.end(), rng);
    std::uint32_t offset = static_cast<std::uint32_t>(rng() % 5);
    substitution s;
    std::size_t i = 0;
    for (std::uint32_t v : vars) s.bind(v, term::var(images[i++] + offset));
    return apply(s, r);
}

inline void check_normalize_properties(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    for (int i = 0; i < iterations; ++i) {
        rule r;
        r.head = gen.random_literal(gen.rng() % 3, 4);
        for (std::size_t k = 0, n = gen.rng() % 3; k < n; ++k)
            r.body.push_back(gen.random_literal(gen.rng() % 3, 4));
        rule n1 = normalize(r);
        expect(normalize(n1) == n1, "normalize is not idempotent");
        rule renamed = random_variable_renaming(r, gen.rng);
        expect(normalize(renamed) == n1, "normalize does not collapse variants");
    }
}

inline rule random_symbolic_rule(literal_gen& gen, std::uint32_t max_symbolic) {
    rule r;
    auto symbolic_term = [&]() {
        switch (gen.rng() % 3) {
            case 0: return term::var(static_cast<std::uint32_t>(gen.rng() % 3));
            case 1: return term::constant(gen.consts[gen.rng() % gen.consts.size()]);
            default:
                return term::symbolic(static_cast<std::uint32_t>(gen.rng() % max_symbolic));
        }
    };
    auto symbolic_literal = [&](std::size_t which) {
        literal l;
        l.pred = gen.preds[which];
        for (std::size_t i = 0; i < gen.arity[which]; ++i) l.args.push_back(symbolic_term());
        return l;
    };
    r.head = symbolic_literal(gen.rng() % 3);
    for (std::size_t k = 0, n = gen.rng() % 3; k < n; ++k)
        r.body.push_back(symbolic_literal(gen.rng() % 3));
    return normalize(r);
}

inline rule rename_symbolics(const rule& r, const std::map<std::uint32_t, std::uint32_t>& map) {
    rule out = r;
    auto rewrite = [&](literal& l) {
        for (term& t : l.args)
            if (t.is_symbolic()) t = term::symbolic(map.at(t.value));
    };
    rewrite(out.head);
    for (literal& l : out.body) rewrite(l);
    return out;
}

inline std::map<std::uint32_t, std::uint32_t> random_bijection(const std::set<std::uint32_t>& ids,
                                                               std::mt19937_64& rng) {
    std::vector<std::uint32_t> images(ids.begin(), ids.end());
    std::shuffle(images.begin(), images.end(), rng);
    std::uint32_t offset = static_cast<std::uint32_t>(rng() % 7);
    std::map<std::uint32_t, std::uint32_t> out;
    std::size_t i = 0;
    for (std::uint32_t v : ids) out[v] = images[i++] + offset;
    return out;
}

inline void check_schema_invariance(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    for (int i = 0; i < iterations; ++i) {
        rule r = random_symbolic_rule(gen, 4);
        auto ids = symbolic_values_of(r);
        auto bij = random_bijection(ids, gen.rng);
        expect(schema_of(r) == schema_of(rename_symbolics(r, bij)),
               "schema_of is not invariant under bijective symbolic renaming");
    }
}

inline state random_valid_state(literal_gen& gen) {
    for (;;) {
        std::vector<rule> rules;
        for (std::size_t k = 0, n = 1 + gen.rng() % 4; k < n; ++k)
            rules.push_back(random_symbolic_rule(gen, 3));
        state s = make_state(std::move(rules));
        if (is_valid(s)) return s;
    }
}

inline state apply_bijection(const state& s, const std::map<std::uint32_t, std::uint32_t>& bij) {
    std::vector<rule> rules;
    for (const rule& r : s.rules) rules.push_back(rename_symbolics(r, bij));
    return make_state(std::move(rules));
}

inline std::set<std::uint32_t> symbolic_ids_of(const state& s) {
    std::set<std::uint32_t> ids;
    for (const rule& r : s.rules) {
        auto rs = symbolic_values_of(r);
        ids.insert(rs.begin(), rs.end());
    }
    return ids;
}

inline void check_canonicalize_properties(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    for (int i = 0; i < iterations; ++i) {
        state s = random_valid_state(gen);
        // Independent of input rule order.
        std::vector<rule> shuffled = s.rules;
        std::shuffle(shuffled.begin(), shuffled.end(), gen.rng);
        expect(canonicalize(make_state(shuffled)) == canonicalize(s),
               "canonicalize depends on input rule order");
        // Identical canonical forms under any two bijective renamings.
        state r1 = apply_bijection(s, random_bijection(symbolic_ids_of(s), gen.rng));
        state r2 = apply_bijection(s, random_bijection(symbolic_ids_of(s), gen.rng));
        expect(canonicalize(r1) == canonicalize(r2),
               "canonical forms differ across bijective renamings");
        expect(states_equivalent(r1, r2), "bijective renamings not reported equivalent");
    }
}

inline void check_equivalence_laws(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    for (int i = 0; i < iterations; ++i) {
        state a = random_valid_state(gen);
        state b = apply_bijection(a, random_bijection(symbolic_ids_of(a), gen.rng));
        state c = apply_bijection(b, random_bijection(symbolic_ids_of(b), gen.rng));
        state other = random_valid_state(gen);
        expect(states_equivalent(a, a), "equivalence is not reflexive");
        expect(states_equivalent(a, b) == states_equivalent(b, a), "equivalence is not symmetric");
        if (states_equivalent(a, b) && states_equivalent(b, c))
            expect(states_equivalent(a, c), "equivalence is not transitive");
        if (states_equivalent(a, other))
            expect(states_equivalent(other, a), "equivalence is not symmetric (cross)");
    }
}

inline void check_reduct_length(std::uint64_t seed, int iterations) {
    symbol_table tab;
    literal_gen gen(tab, seed);
    for (int i = 0; i < iterations; ++i) {
        rule r;
        r.head = gen.random_literal(gen.rng() % 3, 3);
        std::size_t n = 1 + gen.rng() % 3;
        for (std::size_t k = 0; k < n; ++k)
            r.body.push_back(gen.random_literal(gen.rng() % 3, 3));
        r = normalize(r);
        std::size_t which = gen.rng() % 3;
        literal f;
        f.pred = gen.preds[which];
        for (std::size_t k = 0; k < gen.arity[which]; ++k)
            f.args.push_back(term::constant(gen.consts[gen.rng() % gen.consts.size()]));
        if (auto red = reduce(r, f))
            expect(red->body.size() == r.body.size() - 1,
                   "reduct body length is not one less than the input");
    }
}

// Body-length bound and normalized membership over every state reachable on
// the given instance.
inline void check_state_invariants(const program& p, const database& d, engine_mode mode) {
    std::size_t bound = p.max_body_length();
    auto records = trace(p, d, mode);
    for (const auto& rec : records) {
        if (rec.duplicate_of) continue;
        for (const rule& r : rec.st.rules) {
            expect(r.body.size() <= bound, "state rule body exceeds the program bound");
            expect(normalize(r) == r, "state contains a non-normalized rule");
        }
    }
}

inline void check_automaton_determinism(std::string_view prog_text, engine_mode mode) {
    symbol_table t1, t2;
    program p1 = parse_program(prog_text, t1);
    program p2 = parse_program(prog_text, t2);
    compile_result a = compile(p1, mode);
    compile_result b = compile(p2, mode);
    expect(a.ok() == b.ok(), "compilation outcome differs between identical runs");
    if (a.ok()) {
        expect(*a.machine == *b.machine, "compiled automata differ between identical runs");
        expect(serialize_automaton(*a.machine, t1) == serialize_automaton(*b.machine, t2),
               "serialized automata differ between identical runs");
        for (std::size_t sid = 0; sid < a.machine->states.size(); ++sid) {
            const state& s = a.machine->states[sid];
            expect(is_valid(s), "automaton contains an invalid state");
            expect(canonicalize(s) == s, "automaton state is not canonical");
        }
        // Labels of one state are pairwise distinct.
        for (std::size_t sid = 0; sid < a.machine->states.size(); ++sid) {
            auto outs = a.machine->transitions_from(sid);
            for (std::size_t i = 0; i < outs.size(); ++i)
                for (std::size_t j = i + 1; j < outs.size(); ++j)
                    expect(normalize(outs[i]->label) != normalize(outs[j]->label),
                           "two outgoing transitions carry equal labels");
        }
    }
}

// The full cross-check used by the acceptance property suite: concrete
// engine in both modes, compiled automaton runtime, and the fixpoint oracle
// must agree on the answers. Returns a failure description, or empty.
inline std::string check_instance_agreement(const instance_spec& spec) {
    instance inst = generate(spec);
    std::ostringstream id;
    id << template_name(spec.tmpl) << "/" << shape_name(spec.shape) << " n=" << spec.nodes
       << " density=" << spec.density << " seed=" << spec.seed;
    try {
        bundle b;
        b.p = parse_program(inst.program_text, b.tab);
        b.d = parse_database(inst.facts_text, b.tab);
        check_database(b.p, b.d, b.tab);

        std::set<literal> expected = answers_of(fixpoint(b.p, b.d));
        eval_result basic = evaluate(b.p, b.d, engine_mode::basic);
        if (basic.answers != expected) return id.str() + ": basic evaluation != oracle";
        eval_result ext = evaluate(b.p, b.d, engine_mode::extended);
        if (ext.answers != expected) return id.str() + ": extended evaluation != oracle";

        compile_result cr = compile(b.p, engine_mode::extended);
        if (!cr.ok()) {
            if (template_compiles(spec.tmpl))
                return id.str() + ": compilation failed unexpectedly";
            return {};
        }
        run_result rr = run(*cr.machine, b.d, b.tab);
        if (rr.answers != expected) return id.str() + ": automaton run != oracle";
    } catch (const std::exception& e) {
        return id.str() + ": exception: " + e.what();
    }
    return {};
}

inline std::vector<instance_spec> standard_instance_grid(int seeds_per_cell) {
    std::vector<instance_spec> specs;
    for (template_id tmpl : {template_id::left_rec_tc, template_id::tail_rec_tc,
                             template_id::nonrec_join, template_id::mutual_tc})
        for (graph_shape shape : {graph_shape::chain, graph_shape::cycle, graph_shape::dag,
                                  graph_shape::random_graph})
            for (int nodes : {0, 2, 4, 7})
                for (int seed = 0; seed < seeds_per_cell; ++seed)
                    specs.push_back({tmpl, shape, nodes, 0.15 + 0.2 * (seed % 4),
                                     static_cast<std::uint64_t>(seed)});
    return specs;
}

}  // namespace testsupport
