// Seed-reproducible test instances: small programs from safe templates plus
// random edge databases (chains, cycles, DAGs, random digraphs).
#pragma once

#include <cstdint>
#include <string>

#include "earleylog/core.hpp"

namespace earleylog {

enum class template_id { left_rec_tc, tail_rec_tc, nonrec_join, mutual_tc };
enum class graph_shape { chain, cycle, dag, random_graph };

struct instance_spec {
    template_id tmpl{template_id::left_rec_tc};
    graph_shape shape{graph_shape::chain};
    int nodes{3};  // capped at 7
    double density{0.4};
    std::uint64_t seed{0};
};

struct instance {
    std::string program_text;
    std::string facts_text;
};

// Deterministic in every field of the spec. The program is valid; the
// database is ground with nodes named 1..n.
instance generate(const instance_spec& spec);

// Whether instances of this template are expected to compile into an
// automaton (all shipped templates do).
bool template_compiles(template_id tmpl);

const char* template_name(template_id tmpl);
const char* shape_name(graph_shape shape);

// Serializes a failing instance for replay; returns the written .dl path.
std::string write_instance(const instance& inst, const std::string& directory,
                           const std::string& stem);

}  // namespace earleylog
