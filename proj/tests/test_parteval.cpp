#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace earleylog;
using namespace testsupport;

namespace {

const char* tc_left =
    "path(A,B) :- edge(A,B).\n"
    "path(A,B) :- path(A,C), edge(C,B).\n"
    "answer(A) :- path(1,A).\n";

const char* tc_tail =
    "path(A,B) :- edge(A,B).\n"
    "path(A,B) :- edge(A,C), path(C,B).\n"
    "answer(A) :- path(1,A).\n";

const char* tc_nonlinear =
    "path(A,B) :- edge(A,B).\n"
    "path(A,B) :- path(A,C), path(C,B).\n"
    "answer(A) :- path(1,A).\n";

program parse(const char* text, symbol_table& tab) { return parse_program(text, tab); }

}  // namespace

TEST_CASE("symbolic_labels collects selected EDB literals up to renaming") {
    symbol_table tab;
    program p = parse(tc_left, tab);

    state s0 = initial_state(p, engine_mode::basic);
    auto l0 = symbolic_labels(s0, p);
    REQUIRE(l0.size() == 1);
    CHECK(l0[0] == fact_of("edge(1,X0).", tab));

    state s1 = state_of({"path(1,$0).", "answer($0).", "path(1,X0) :- edge($0,X0).",
                         "answer(X0) :- path(1,X0).",
                         "path(1,X0) :- path(1,X1), edge(X1,X0)."},
                        tab);
    auto l1 = symbolic_labels(s1, p);
    REQUIRE(l1.size() == 1);
    CHECK(l1[0] == fact_of("edge($0,X0).", tab));

    state idb_only = state_of({"answer(X0) :- path(1,X0)."}, tab);
    CHECK(symbolic_labels(idb_only, p).empty());
}

TEST_CASE("symbolic_successor reproduces the symbolic transition chain") {
    symbol_table tab;
    program p = parse(tc_left, tab);
    state s0 = initial_state(p, engine_mode::basic);

    auto tr1 = symbolic_successor(s0, fact_of("edge(1,X0).", tab), p, engine_mode::basic);
    state s1_expected = state_of({"path(1,$0).", "answer($0).", "path(1,X0) :- edge($0,X0).",
                                  "answer(X0) :- path(1,X0).",
                                  "path(1,X0) :- path(1,X1), edge(X1,X0)."},
                                 tab);
    CHECK(tr1.target == s1_expected);
    CHECK(tr1.target_raw == s1_expected);  // fresh value was already $0
    REQUIRE(tr1.regs.targets.size() == 1);
    CHECK(tr1.regs.targets[0] == register_origin::label_variable(0));

    // From S1 the same structure recurs with a renamed symbolic value.
    auto tr2 = symbolic_successor(tr1.target, fact_of("edge($0,X0).", tab), p,
                                  engine_mode::basic);
    CHECK(tr2.target == tr1.target);
    CHECK(tr2.target_raw != tr1.target);  // raw state carries the fresh $1
    CHECK(states_equivalent(tr2.target_raw, tr1.target));
    REQUIRE(tr2.regs.targets.size() == 1);
    CHECK(tr2.regs.targets[0] == register_origin::label_variable(0));
}

TEST_CASE("symbolic_successor in extended mode (tail recursion)") {
    symbol_table tab;
    program p = parse(tc_tail, tab);
    state s0 = initial_state(p, engine_mode::extended);
    auto tr = symbolic_successor(s0, fact_of("edge(1,X0).", tab), p, engine_mode::extended);
    CHECK(tr.target == state_of({"answer($0).", "answer(X0) :- path($0,X0).",
                                 "answer(X0) :- edge($0,X0).",
                                 "answer(X0) :- edge($0,X1), path(X1,X0)."},
                                tab));
}

TEST_CASE("is_valid checks pairwise distinct schemata") {
    symbol_table tab;
    state good = state_of({"answer($0).", "answer(X0) :- path($0,X0).",
                           "answer(X0) :- edge($0,X0).",
                           "answer(X0) :- edge($0,X1), path(X1,X0)."},
                          tab);
    CHECK(is_valid(good));
    state bad = state_of({"answer($0).", "answer($1)."}, tab);
    CHECK_FALSE(is_valid(bad));
    CHECK(is_valid(state{}));
}

TEST_CASE("compile: left recursive closure gives the two-state automaton") {
    symbol_table tab;
    program p = parse(tc_left, tab);
    compile_result res = compile(p, engine_mode::basic);
    REQUIRE(res.ok());
    const automaton& a = *res.machine;
    CHECK(a.states.size() == 2);
    REQUIRE(a.transitions.size() == 2);
    CHECK(a.transitions[0] ==
          transition{0, fact_of("edge(1,X0).", tab),
                     register_map{{register_origin::label_variable(0)}}, 1});
    CHECK(a.transitions[1] ==
          transition{1, fact_of("edge($0,X0).", tab),
                     register_map{{register_origin::label_variable(0)}}, 1});
    CHECK(a.is_final(1));
    CHECK_FALSE(a.is_final(0));
    CHECK(a.finals.at(1) == std::vector<literal>{fact_of("answer($0).", tab)});
}

TEST_CASE("compile: tail recursive closure has the same transition function") {
    symbol_table tab;
    program p = parse(tc_tail, tab);
    compile_result res = compile(p, engine_mode::extended);
    REQUIRE(res.ok());
    const automaton& a = *res.machine;
    CHECK(a.states.size() == 2);
    REQUIRE(a.transitions.size() == 2);
    CHECK(a.transitions[0].source == 0);
    CHECK(a.transitions[0].label == fact_of("edge(1,X0).", tab));
    CHECK(a.transitions[0].target == 1);
    CHECK(a.transitions[1].source == 1);
    CHECK(a.transitions[1].label == fact_of("edge($0,X0).", tab));
    CHECK(a.transitions[1].target == 1);
    CHECK(a.is_final(1));
    // Initial state is the three-rule state derived by last literal resolution.
    CHECK(a.states[0] == state_of({"answer(X0) :- path(1,X0).", "answer(X0) :- edge(1,X0).",
                                   "answer(X0) :- edge(1,X1), path(X1,X0)."},
                                  tab));
}

TEST_CASE("compile: non-recursive query") {
    symbol_table tab;
    program p = parse("answer(A) :- edge(1,A).\n", tab);
    compile_result res = compile(p, engine_mode::extended);
    REQUIRE(res.ok());
    CHECK(res.machine->states.size() == 2);
    CHECK(res.machine->transitions.size() == 1);
    CHECK(res.machine->is_final(1));
    CHECK(res.machine->finals.at(1) == std::vector<literal>{fact_of("answer($0).", tab)});
}

TEST_CASE("compile: non-linear recursion is diagnosed, never loops") {
    // Regression expectation: with both modes this program reaches a state
    // with two chain rules of equal schema within three transitions.
    for (engine_mode mode : {engine_mode::basic, engine_mode::extended}) {
        symbol_table tab;
        program p = parse(tc_nonlinear, tab);
        compile_result res = compile(p, mode, 1000);
        REQUIRE_FALSE(res.ok());
        CHECK(res.failure->why == compile_failure::reason::invalid_state);
        REQUIRE(res.failure->collision.has_value());
        CHECK(schema_of(res.failure->collision->first) ==
              schema_of(res.failure->collision->second));
        CHECK(res.failure->collision->first != res.failure->collision->second);
        CHECK_FALSE(res.failure->path.empty());
        CHECK(res.failure->path.size() <= 3);
        std::string rendered = res.failure->render(tab);
        CHECK(rendered.find("schema") != std::string::npos);
    }
}

TEST_CASE("state cap stops compilation as a backstop") {
    symbol_table tab;
    program p = parse(tc_left, tab);
    compile_result res = compile(p, engine_mode::basic, 1);
    REQUIRE_FALSE(res.ok());
    CHECK(res.failure->why == compile_failure::reason::state_cap_exceeded);
}

TEST_CASE("export_dot renders nodes and labeled edges") {
    symbol_table tab;
    program p = parse(tc_left, tab);
    automaton a = *compile(p, engine_mode::basic).machine;
    std::string dot = export_dot(a, tab);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("s0 -> s1") != std::string::npos);
    CHECK(dot.find("s1 -> s1") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("edge(1,X0)") != std::string::npos);

    symbol_table tab2;
    automaton single = *compile(parse("answer(A) :- e(1,A).\n", tab2), engine_mode::extended)
                            .machine;
    std::string dot2 = export_dot(single, tab2);
    CHECK(dot2.find("s0 -> s1") != std::string::npos);

    // Tail recursive automaton is isomorphic to the left recursive one.
    symbol_table tab3;
    automaton tail = *compile(parse(tc_tail, tab3), engine_mode::extended).machine;
    CHECK(tail.transitions.size() == a.transitions.size());
    CHECK(tail.states.size() == a.states.size());
}

TEST_CASE("automaton serialization round-trips") {
    for (const char* prog : {tc_left, tc_tail, "answer(A) :- e(1,A).\n"}) {
        symbol_table tab;
        program p = parse(prog, tab);
        compile_result res = compile(p, engine_mode::extended);
        REQUIRE(res.ok());
        std::string text = serialize_automaton(*res.machine, tab);
        symbol_table tab2;
        automaton parsed = parse_automaton(text, tab2);
        CHECK(serialize_automaton(parsed, tab2) == text);
        CHECK(parsed.states.size() == res.machine->states.size());
        CHECK(parsed.transitions.size() == res.machine->transitions.size());
    }
}

TEST_CASE("automaton parser rejects malformed files") {
    symbol_table tab;
    CHECK_THROWS_AS(parse_automaton("not an automaton\n", tab), validation_error);
    CHECK_THROWS_AS(parse_automaton("earleylog automaton 2\nend\n", tab), validation_error);

    symbol_table tab2;
    program p = parse(tc_left, tab2);
    std::string good = serialize_automaton(*compile(p, engine_mode::basic).machine, tab2);
    std::string truncated = good.substr(0, good.rfind("end"));
    symbol_table tab3;
    CHECK_THROWS_AS(parse_automaton(truncated, tab3), validation_error);
}

TEST_CASE("fresh symbolic values never collide with state registers") {
    symbol_table tab;
    program p = parse(tc_left, tab);
    state s1 = state_of({"path(1,$0).", "answer($0).", "path(1,X0) :- edge($0,X0).",
                         "answer(X0) :- path(1,X0).",
                         "path(1,X0) :- path(1,X1), edge(X1,X0)."},
                        tab);
    auto tr = symbolic_successor(s1, fact_of("edge($0,X0).", tab), p, engine_mode::basic);
    // The raw successor contains only the fresh value, strictly above $0.
    auto ids = symbolic_ids_of(tr.target_raw);
    for (std::uint32_t id : ids) CHECK(id > 0);
}

TEST_CASE("compilation is deterministic") {
    CHECK_NOTHROW(check_automaton_determinism(tc_left, engine_mode::basic));
    CHECK_NOTHROW(check_automaton_determinism(tc_left, engine_mode::extended));
    CHECK_NOTHROW(check_automaton_determinism(tc_tail, engine_mode::extended));
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        instance inst = generate({static_cast<template_id>(seed % 4), graph_shape::dag, 5, 0.5,
                                  seed});
        CHECK_NOTHROW(check_automaton_determinism(inst.program_text, engine_mode::extended));
    }
}
