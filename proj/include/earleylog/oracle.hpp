// Naive bottom-up fixpoint evaluation. Deliberately independent of the
// deduction engine: it matches facts against body literals directly, with
// its own binding maps, and iterates to a fixpoint. Used as ground truth in
// tests and behind the CLI --oracle flag.
#pragma once

#include <set>

#include "earleylog/core.hpp"

namespace earleylog {

struct fact_set {
    std::set<literal> facts;
};

fact_set fixpoint(const program& p, const database& d);

std::set<literal> answers_of(const fact_set& f);

}  // namespace earleylog
