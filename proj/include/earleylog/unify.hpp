// First-order unification over flat terms (no function symbols) and
// idempotent substitutions.
#pragma once

#include <map>
#include <optional>
#include <set>

#include "earleylog/core.hpp"

namespace earleylog {

class substitution {
public:
    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }

    const term* lookup(std::uint32_t var) const;
    void bind(std::uint32_t var, term image);

    // Follows variable bindings to a fixed point.
    term resolve(term t) const;

    // Rewrites every binding image to its resolved form so that no bound
    // variable occurs in any image.
    void compress();

    auto begin() const { return bindings_.begin(); }
    auto end() const { return bindings_.end(); }

    bool operator==(const substitution&) const = default;

private:
    std::map<std::uint32_t, term> bindings_;
};

// Most general unifier of two literals, or nullopt. The literals share one
// variable namespace; callers that need disjoint variables rename first.
std::optional<substitution> unify(const literal& a, const literal& b);

term apply(const substitution& s, term t);
literal apply(const substitution& s, const literal& l);
rule apply(const substitution& s, const rule& r);

// apply(compose(s, t), x) == apply(t, apply(s, x))
substitution compose(const substitution& first, const substitution& then);

// A variant of r whose variables are disjoint from `forbidden`, numbered
// consecutively by first occurrence.
rule rename_apart(const rule& r, const std::set<std::uint32_t>& forbidden);

}  // namespace earleylog
