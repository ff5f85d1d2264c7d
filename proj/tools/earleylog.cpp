// earleylog command line: evaluate queries, compile programs to automata,
// run automata against fact files, and trace deduction state sequences.
#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "earleylog/deduction.hpp"
#include "earleylog/oracle.hpp"
#include "earleylog/parser.hpp"
#include "earleylog/parteval.hpp"
#include "earleylog/runtime.hpp"

namespace {

using namespace earleylog;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;       // also syntax errors
constexpr int exit_validation = 2;  // semantic errors
constexpr int exit_compile = 3;
constexpr int exit_oracle_mismatch = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

engine_mode parse_mode(const std::string& mode) {
    return mode == "basic" ? engine_mode::basic : engine_mode::extended;
}

// Orders answers for display: digit-only constants compare numerically.
bool natural_less(const literal& a, const literal& b, const symbol_table& tab) {
    if (a.pred != b.pred) return tab.text(a.pred) < tab.text(b.pred);
    for (std::size_t i = 0; i < std::min(a.args.size(), b.args.size()); ++i) {
        const std::string& x = tab.text(a.args[i].value);
        const std::string& y = tab.text(b.args[i].value);
        if (x == y) continue;
        bool xd = !x.empty() && std::all_of(x.begin(), x.end(), ::isdigit);
        bool yd = !y.empty() && std::all_of(y.begin(), y.end(), ::isdigit);
        if (xd && yd) {
            if (x.size() != y.size()) return x.size() < y.size();
            return x < y;
        }
        return x < y;
    }
    return a.args.size() < b.args.size();
}

void print_answers(const std::set<literal>& answers, const symbol_table& tab) {
    std::vector<literal> sorted(answers.begin(), answers.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](const literal& a, const literal& b) { return natural_less(a, b, tab); });
    for (const literal& a : sorted) std::cout << to_string(a, tab) << "\n";
}

int cmd_eval(const std::string& program_path, const std::string& db_path, const std::string& mode,
             bool oracle_check) {
    symbol_table tab;
    program p = parse_program(read_file(program_path), tab);
    database d = parse_database(read_file(db_path), tab);
    check_database(p, d, tab);
    eval_result res = evaluate(p, d, parse_mode(mode));
    print_answers(res.answers, tab);
    if (oracle_check) {
        std::set<literal> expected = answers_of(fixpoint(p, d));
        if (expected != res.answers) {
            std::cerr << "oracle mismatch:\n";
            for (const literal& l : expected)
                if (!res.answers.count(l)) std::cerr << "  missing " << to_string(l, tab) << "\n";
            for (const literal& l : res.answers)
                if (!expected.count(l)) std::cerr << "  extra   " << to_string(l, tab) << "\n";
            return exit_oracle_mismatch;
        }
    }
    return exit_ok;
}

void print_automaton_text(const automaton& a, const symbol_table& tab) {
    std::cout << "automaton: " << a.states.size() << " states, " << a.transitions.size()
              << " transitions, " << a.finals.size() << " final\n";
    for (std::size_t sid = 0; sid < a.states.size(); ++sid) {
        std::cout << "S" << sid << (a.is_final(sid) ? " (final)" : "")
                  << (sid == a.initial ? " (initial)" : "") << ":\n";
        for (const rule& r : a.states[sid].rules) std::cout << "  " << to_string(r, tab) << "\n";
    }
    std::cout << "transitions:\n";
    for (const transition& t : a.transitions) {
        std::cout << "  S" << t.source << " --" << to_string(t.label, tab) << "--> S" << t.target;
        for (std::size_t i = 0; i < t.regs.targets.size(); ++i) {
            const register_origin& o = t.regs.targets[i];
            std::cout << (i == 0 ? "  [" : ", ") << "c" << i << " := ";
            if (o.from == register_origin::kind::label_variable)
                std::cout << "X" << o.index;
            else
                std::cout << "c" << o.index;
        }
        if (!t.regs.targets.empty()) std::cout << "]";
        std::cout << "\n";
    }
    for (const auto& [sid, templates] : a.finals) {
        std::cout << "answers at S" << sid << ":";
        for (const literal& l : templates) std::cout << " " << to_string(l, tab);
        std::cout << "\n";
    }
}

int cmd_compile(const std::string& program_path, const std::string& mode,
                const std::string& format, std::size_t cap) {
    symbol_table tab;
    program p = parse_program(read_file(program_path), tab);
    compile_result res = compile(p, parse_mode(mode), cap);
    if (!res.ok()) {
        std::cerr << res.failure->render(tab);
        return exit_compile;
    }
    if (format == "dot")
        std::cout << export_dot(*res.machine, tab);
    else if (format == "text")
        print_automaton_text(*res.machine, tab);
    else
        std::cout << serialize_automaton(*res.machine, tab);
    return exit_ok;
}

int cmd_run(const std::string& automaton_path, const std::string& db_path, bool stream,
            bool strict, bool stats) {
    symbol_table tab;
    automaton a = parse_automaton(read_file(automaton_path), tab);
    database d = parse_database(read_file(db_path), tab);
    if (!strict)
        for (const std::string& w : schema_warnings(a, d, tab))
            std::cerr << "warning: " << w << "\n";
    if (stream) {
        answer_stream s(a, d, tab, strict);
        while (auto l = s.next()) std::cout << to_string(*l, tab) << "\n";
        return exit_ok;
    }
    run_result res = run(a, d, tab, strict);
    print_answers(res.answers, tab);
    if (stats)
        std::cerr << "frames expanded: " << res.stats.frames_expanded
                  << ", facts fetched: " << res.stats.facts_fetched
                  << ", visited (state,registers) pairs: " << res.stats.visited_pairs << "\n";
    return exit_ok;
}

// Mirrors the numbered listing style of traced deductions: inputs get
// numbers first, then every state lists its rules with fresh numbers and a
// provenance comment referring back.
int cmd_trace(const std::string& program_path, const std::string& db_path,
              const std::string& mode) {
    symbol_table tab;
    program p = parse_program(read_file(program_path), tab);
    database d = parse_database(read_file(db_path), tab);
    check_database(p, d, tab);

    std::size_t counter = 0;
    std::map<std::size_t, std::size_t> program_numbers;  // rule index -> display number
    std::map<std::size_t, std::size_t> goal_numbers;
    std::map<std::size_t, std::size_t> fact_numbers;  // database index -> display number

    if (!p.rules.empty()) std::cout << "program:\n";
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        program_numbers[i] = ++counter;
        std::cout << "  [" << counter << "] " << to_string(p.rules[i], tab) << "\n";
    }
    if (d.size()) std::cout << "database:\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        fact_numbers[i] = ++counter;
        std::cout << "  [" << counter << "] " << to_string(rule{d.fact(i), {}}, tab) << "\n";
    }
    std::cout << "goal:\n";
    for (std::size_t i = 0; i < p.goals.size(); ++i) {
        goal_numbers[i] = ++counter;
        std::cout << "  [" << counter << "] " << to_string(p.goals[i], tab) << "\n";
    }

    auto records = trace(p, d, parse_mode(mode));
    std::vector<std::map<rule, std::size_t>> numbers(records.size());

    for (std::size_t ri = 0; ri < records.size(); ++ri) {
        const trace_record& rec = records[ri];
        std::cout << "\nS" << ri;
        if (rec.fact) {
            std::cout << "  (fact " << to_string(*rec.fact, tab);
            if (rec.fact_index && *rec.fact_index != database::true_fact_index)
                std::cout << " [" << fact_numbers[*rec.fact_index] << "]";
            std::cout << " applied to S" << rec.parent << ")";
        } else {
            std::cout << "  (initial)";
        }
        if (rec.duplicate_of) {
            std::cout << " = S" << *rec.duplicate_of << " (already seen)\n";
            continue;
        }
        std::cout << "\n";
        auto ref = [&](const rule& r, bool parent_scope) -> std::string {
            const auto& scope = parent_scope ? numbers[rec.parent] : numbers[ri];
            auto it = scope.find(r);
            if (it == scope.end()) return "?";
            return "[" + std::to_string(it->second) + "]";
        };
        for (const prov_entry& e : rec.listing) {
            std::size_t num = ++counter;
            numbers[ri][e.derived] = num;
            std::cout << "  [" << num << "] " << to_string(e.derived, tab);
            std::string note;
            switch (e.k) {
                case prov_entry::kind::goal:
                    note = "goal [" + std::to_string(goal_numbers[*e.program_rule]) + "]";
                    break;
                case prov_entry::kind::instantiation:
                    note = "inst. of [" + std::to_string(program_numbers[*e.program_rule]) +
                           "] because of " + ref(*e.source, false);
                    break;
                case prov_entry::kind::last_literal_resolution:
                    note = "last literal resolution of " + ref(*e.source, false);
                    break;
                case prov_entry::kind::edb_reduction:
                    note = "reduction of " + ref(*e.source, true) + " with " +
                           (rec.fact_index && *rec.fact_index != database::true_fact_index
                                ? "[" + std::to_string(fact_numbers[*rec.fact_index]) + "]"
                                : "the built-in fact");
                    break;
                case prov_entry::kind::idb_reduction:
                    note = "reduction of " + ref(*e.source, true) + " with " + ref(*e.via, false);
                    break;
                case prov_entry::kind::copy:
                    note = "copy of " + ref(*e.source, true) + " because of " + ref(*e.via, false);
                    break;
            }
            std::cout << "   % " << note << "\n";
        }
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Datalog engine: deduction by state sequences, compiled to finite automata"};
    app.require_subcommand(1);

    std::string program_path, db_path, automaton_path;
    std::string mode = "extended";
    std::string format = "automaton";
    std::size_t cap = 10000;
    bool oracle_check = false, stream = false, strict = false, stats = false;

    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "deduction mode")
            ->check(CLI::IsMember({"basic", "extended"}))
            ->capture_default_str();
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate a query against a fact database");
    eval->add_option("program", program_path, "program file (.dl)")->required();
    eval->add_option("database", db_path, "fact file (.facts)")->required();
    add_mode(eval);
    eval->add_flag("--oracle", oracle_check, "cross-check against the naive fixpoint");

    CLI::App* comp = app.add_subcommand("compile", "compile a program into a finite automaton");
    comp->add_option("program", program_path, "program file (.dl)")->required();
    add_mode(comp);
    comp->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"automaton", "dot", "text"}))
        ->capture_default_str();
    comp->add_option("--cap", cap, "state count cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* runc = app.add_subcommand("run", "run a compiled automaton against a fact database");
    runc->add_option("automaton", automaton_path, "compiled automaton file")->required();
    runc->add_option("database", db_path, "fact file (.facts)")->required();
    runc->add_flag("--stream", stream, "print answers in emission order");
    runc->add_flag("--strict", strict, "fail on predicates missing from the database");
    runc->add_flag("--stats", stats, "print run statistics to stderr");

    CLI::App* tr = app.add_subcommand("trace", "print the deduction state sequence");
    tr->add_option("program", program_path, "program file (.dl)")->required();
    tr->add_option("database", db_path, "fact file (.facts)")->required();
    add_mode(tr);

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return cmd_eval(program_path, db_path, mode, oracle_check);
        if (comp->parsed()) return cmd_compile(program_path, mode, format, cap);
        if (runc->parsed()) return cmd_run(automaton_path, db_path, stream, strict, stats);
        if (tr->parsed()) return cmd_trace(program_path, db_path, mode);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
