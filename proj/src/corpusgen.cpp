#include "earleylog/corpusgen.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace earleylog {

namespace {

using edge_list = std::vector<std::pair<int, int>>;

edge_list make_edges(graph_shape shape, int n, double density, std::mt19937_64& rng) {
    edge_list edges;
    std::bernoulli_distribution keep(std::clamp(density, 0.0, 1.0));
    switch (shape) {
        case graph_shape::chain:
            for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
            break;
        case graph_shape::cycle:
            for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
            if (n >= 2) edges.emplace_back(n, 1);
            break;
        case graph_shape::dag:
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    if (keep(rng)) edges.emplace_back(i, j);
            break;
        case graph_shape::random_graph:
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j)
                    if (i != j && keep(rng)) edges.emplace_back(i, j);
            break;
    }
    return edges;
}

void append_facts(std::ostringstream& out, const std::string& pred, const edge_list& edges) {
    for (const auto& [a, b] : edges) out << pred << "(" << a << "," << b << ").\n";
}

}  // namespace

instance generate(const instance_spec& spec) {
    int n = std::clamp(spec.nodes, 0, 7);
    std::mt19937_64 rng(spec.seed * 2654435761u + static_cast<std::uint64_t>(spec.tmpl) * 97 +
                        static_cast<std::uint64_t>(spec.shape) * 13 + n);
    int start = 1 + static_cast<int>(spec.seed % static_cast<std::uint64_t>(std::max(1, n)));

    std::ostringstream prog;
    std::ostringstream facts;
    switch (spec.tmpl) {
        case template_id::left_rec_tc: {
            prog << "path(A,B) :- edge(A,B).\n";
            prog << "path(A,B) :- path(A,C), edge(C,B).\n";
            prog << "answer(B) :- path(" << start << ",B).\n";
            append_facts(facts, "edge", make_edges(spec.shape, n, spec.density, rng));
            break;
        }
        case template_id::tail_rec_tc: {
            prog << "path(A,B) :- edge(A,B).\n";
            prog << "path(A,B) :- edge(A,C), path(C,B).\n";
            prog << "answer(B) :- path(" << start << ",B).\n";
            append_facts(facts, "edge", make_edges(spec.shape, n, spec.density, rng));
            break;
        }
        case template_id::nonrec_join: {
            int depth = 1 + static_cast<int>(rng() % 3);
            prog << "joined(X0,X" << depth << ") :- ";
            for (int i = 0; i < depth; ++i) {
                if (i) prog << ", ";
                prog << "r" << i + 1 << "(X" << i << ",X" << i + 1 << ")";
            }
            prog << ".\n";
            prog << "answer(A,B) :- joined(A,B).\n";
            for (int i = 0; i < depth; ++i)
                append_facts(facts, "r" + std::to_string(i + 1),
                             make_edges(spec.shape, n, spec.density, rng));
            break;
        }
        case template_id::mutual_tc: {
            prog << "p(A,B) :- e(A,B).\n";
            prog << "p(A,B) :- e(A,C), q(C,B).\n";
            prog << "q(A,B) :- f(A,B).\n";
            prog << "q(A,B) :- f(A,C), p(C,B).\n";
            prog << "answer(B) :- p(" << start << ",B).\n";
            edge_list all = make_edges(spec.shape, n, spec.density, rng);
            edge_list e, f;
            for (const auto& edge : all) (rng() & 1 ? e : f).push_back(edge);
            append_facts(facts, "e", e);
            append_facts(facts, "f", f);
            break;
        }
    }
    return {prog.str(), facts.str()};
}

bool template_compiles(template_id) { return true; }

const char* template_name(template_id tmpl) {
    switch (tmpl) {
        case template_id::left_rec_tc: return "left_rec_tc";
        case template_id::tail_rec_tc: return "tail_rec_tc";
        case template_id::nonrec_join: return "nonrec_join";
        case template_id::mutual_tc: return "mutual_tc";
    }
    return "?";
}

const char* shape_name(graph_shape shape) {
    switch (shape) {
        case graph_shape::chain: return "chain";
        case graph_shape::cycle: return "cycle";
        case graph_shape::dag: return "dag";
        case graph_shape::random_graph: return "random";
    }
    return "?";
}

std::string write_instance(const instance& inst, const std::string& directory,
                           const std::string& stem) {
    std::string dl = directory + "/" + stem + ".dl";
    std::ofstream(dl) << inst.program_text;
    std::ofstream(directory + "/" + stem + ".facts") << inst.facts_text;
    return dl;
}

}  // namespace earleylog
