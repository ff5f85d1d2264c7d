#include "earleylog/unify.hpp"

#include <algorithm>

namespace earleylog {

const term* substitution::lookup(std::uint32_t var) const {
    auto it = bindings_.find(var);
    if (it == bindings_.end()) return nullptr;
    return &it->second;
}

void substitution::bind(std::uint32_t var, term image) {
    bindings_.insert_or_assign(var, image);
}

term substitution::resolve(term t) const {
    std::size_t steps = 0;
    while (t.is_var()) {
        const term* image = lookup(t.value);
        if (!image) break;
        if (++steps > bindings_.size())
            throw std::logic_error("substitution::resolve: cyclic binding chain");
        t = *image;
    }
    return t;
}

void substitution::compress() {
    for (auto& [var, image] : bindings_) image = resolve(image);
}

std::optional<substitution> unify(const literal& a, const literal& b) {
    if (a.pred != b.pred || a.arity() != b.arity()) return std::nullopt;
    substitution s;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        term x = s.resolve(a.args[i]);
        term y = s.resolve(b.args[i]);
        if (x == y) continue;
        if (x.is_var())
            s.bind(x.value, y);
        else if (y.is_var())
            s.bind(y.value, x);
        else
            return std::nullopt;  // distinct constants or symbolic values
    }
    s.compress();
    return s;
}

term apply(const substitution& s, term t) {
    if (!t.is_var()) return t;
    const term* image = s.lookup(t.value);
    return image ? *image : t;
}

literal apply(const substitution& s, const literal& l) {
    literal out;
    out.pred = l.pred;
    out.args.reserve(l.args.size());
    for (const term& t : l.args) out.args.push_back(apply(s, t));
    return out;
}

rule apply(const substitution& s, const rule& r) {
    rule out;
    out.head = apply(s, r.head);
    out.body.reserve(r.body.size());
    for (const literal& l : r.body) out.body.push_back(apply(s, l));
    return out;
}

substitution compose(const substitution& first, const substitution& then) {
    substitution out;
    for (const auto& [var, image] : first) out.bind(var, apply(then, image));
    for (const auto& [var, image] : then)
        if (!out.lookup(var) && !first.lookup(var)) out.bind(var, image);
    return out;
}

rule rename_apart(const rule& r, const std::set<std::uint32_t>& forbidden) {
    std::uint32_t base = forbidden.empty() ? 0 : *forbidden.rbegin() + 1;
    std::map<std::uint32_t, std::uint32_t> renaming;
    auto rename = [&](const term& t) {
        if (!t.is_var()) return t;
        auto [it, inserted] =
            renaming.try_emplace(t.value, base + static_cast<std::uint32_t>(renaming.size()));
        return term::var(it->second);
    };
    rule out;
    out.head.pred = r.head.pred;
    for (const term& t : r.head.args) out.head.args.push_back(rename(t));
    for (const literal& l : r.body) {
        literal nl;
        nl.pred = l.pred;
        for (const term& t : l.args) nl.args.push_back(rename(t));
        out.body.push_back(std::move(nl));
    }
    return out;
}

}  // namespace earleylog
