#pragma once

#include "combinatorics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace shearlab {

enum class TheoryKind { random_graph, tn1, tnk };

struct TheoryDescriptor {
    TheoryKind kind = TheoryKind::random_graph;
    int n = 0;
    int k = 1;

    static TheoryDescriptor random_graph() { return {}; }
    static TheoryDescriptor tn1(int n) {
        if (n < 2) throw std::invalid_argument("Tn1 requires n >= 2 (got n=" + std::to_string(n) + ")");
        return {TheoryKind::tn1, n, 1};
    }
    static TheoryDescriptor tnk(int n, int k) {
        if (!(n > k && k >= 2))
            throw std::invalid_argument("Tnk requires n > k >= 2 (got n=" + std::to_string(n) + ", k=" +
                                        std::to_string(k) + ")");
        return {TheoryKind::tnk, n, k};
    }

    std::size_t edge_arity() const { return kind == TheoryKind::tnk ? static_cast<std::size_t>(k + 1) : 2; }
    std::size_t clique_bound() const { return kind == TheoryKind::random_graph ? 0 : static_cast<std::size_t>(n + 1); }

    bool operator==(const TheoryDescriptor&) const = default;
};

inline std::string theory_name(const TheoryDescriptor& t) {
    switch (t.kind) {
        case TheoryKind::random_graph: return "random-graph";
        case TheoryKind::tn1: return "Tn1";
        case TheoryKind::tnk: return "Tnk";
    }
    return "?";
}

struct Term {
    enum class Kind : std::uint8_t { var, param };
    Kind kind = Kind::param;
    std::uint32_t id = 0;

    static Term var(std::uint32_t id) { return {Kind::var, id}; }
    static Term param(std::uint32_t id) { return {Kind::param, id}; }
    bool is_var() const { return kind == Kind::var; }

    auto operator<=>(const Term&) const = default;
};

inline std::string term_name(const Term& t) {
    return (t.is_var() ? "x" : "p") + std::to_string(t.id);
}

struct EdgeLiteral {
    bool positive = true;
    std::vector<Term> args;
    bool operator==(const EdgeLiteral&) const = default;
};

struct NeqLiteral {
    Term var;
    Term other;
    bool operator==(const NeqLiteral&) const = default;
};

using Literal = std::variant<EdgeLiteral, NeqLiteral>;

struct Diagram {
    TheoryDescriptor theory;
    std::vector<std::uint32_t> params;
    std::set<std::vector<std::uint32_t>> param_edges;
    std::vector<std::uint32_t> free_vars;
    std::vector<Literal> literals;
};

enum class VerdictReason { ok, sign_conflict, forbidden_clique, equality_conflict };

inline std::string reason_name(VerdictReason r) {
    switch (r) {
        case VerdictReason::ok: return "ok";
        case VerdictReason::sign_conflict: return "sign-conflict";
        case VerdictReason::forbidden_clique: return "forbidden-clique";
        case VerdictReason::equality_conflict: return "equality-conflict";
    }
    return "?";
}

struct ConsistencyVerdict {
    bool consistent = true;
    VerdictReason reason = VerdictReason::ok;
    std::vector<Term> witness;

    bool operator==(const ConsistencyVerdict&) const = default;
};

namespace detail {

inline void check_diagram(const Diagram& d) {
    std::set<std::uint32_t> params(d.params.begin(), d.params.end());
    std::set<std::uint32_t> vars(d.free_vars.begin(), d.free_vars.end());
    if (params.size() != d.params.size()) throw std::invalid_argument("diagram: duplicate parameter id");
    if (vars.size() != d.free_vars.size()) throw std::invalid_argument("diagram: duplicate variable id");
    auto known = [&](const Term& t) { return t.is_var() ? vars.count(t.id) > 0 : params.count(t.id) > 0; };
    const std::size_t arity = d.theory.edge_arity();
    for (const auto& lit : d.literals) {
        if (const auto* e = std::get_if<EdgeLiteral>(&lit)) {
            if (e->args.size() != arity)
                throw std::invalid_argument("diagram: edge atom with " + std::to_string(e->args.size()) +
                                            " arguments, theory arity is " + std::to_string(arity));
            bool has_var = false;
            for (const auto& t : e->args) {
                if (!known(t)) throw std::invalid_argument("diagram: unknown term " + term_name(t));
                has_var = has_var || t.is_var();
            }
            if (!has_var) throw std::invalid_argument("diagram: edge atom without a free variable");
        } else {
            const auto& q = std::get<NeqLiteral>(lit);
            if (!q.var.is_var()) throw std::invalid_argument("diagram: disequality must start with a variable");
            if (!known(q.var) || !known(q.other))
                throw std::invalid_argument("diagram: unknown term in disequality");
        }
    }
    for (const auto& e : d.param_edges) {
        if (e.size() != arity) throw std::invalid_argument("diagram: parameter edge of wrong arity");
        for (auto p : e)
            if (!params.count(p)) throw std::invalid_argument("diagram: parameter edge mentions unknown id");
    }
}

inline std::vector<Term> sorted_terms(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end());
    return ts;
}

} // namespace detail

/**
 * Free-amalgamation consistency: no atom asserted with both signs, no degenerate positive atom or
 * x != x, and (for the clique-free theories) no forbidden clique among parameter edges plus
 * positive atoms.
 */
inline ConsistencyVerdict consistent(const Diagram& d) {
    detail::check_diagram(d);
    for (const auto& lit : d.literals)
        if (const auto* q = std::get_if<NeqLiteral>(&lit); q && q->var == q->other)
            return {false, VerdictReason::equality_conflict, {q->var}};

    std::map<std::vector<Term>, int> signs; // bit 1 positive, bit 2 negative
    for (const auto& lit : d.literals) {
        const auto* e = std::get_if<EdgeLiteral>(&lit);
        if (!e) continue;
        auto key = detail::sorted_terms(e->args);
        bool degenerate = std::adjacent_find(key.begin(), key.end()) != key.end();
        if (degenerate) {
            if (e->positive) {
                key.erase(std::unique(key.begin(), key.end()), key.end());
                return {false, VerdictReason::equality_conflict, key};
            }
            continue;
        }
        int& s = signs[key];
        s |= e->positive ? 1 : 2;
        if (s == 3) return {false, VerdictReason::sign_conflict, key};
    }

    const std::size_t bound = d.theory.clique_bound();
    if (bound) {
        const std::size_t arity = d.theory.edge_arity();
        std::set<std::vector<Term>> edges;
        for (const auto& [key, s] : signs)
            if (s & 1) edges.insert(key);
        std::set<Term> cand_set;
        for (const auto& e : edges) cand_set.insert(e.begin(), e.end());
        for (const auto& e : d.param_edges) {
            std::vector<Term> key;
            for (auto p : e) key.push_back(Term::param(p));
            key = detail::sorted_terms(key);
            if (std::all_of(key.begin(), key.end(), [&](const Term& t) { return cand_set.count(t); }))
                edges.insert(key);
        }
        std::vector<Term> cand(cand_set.begin(), cand_set.end());
        std::vector<Term> probe;
        std::optional<std::vector<Term>> found;
        for_each_clique(cand.size(), arity, bound,
                        [&](const std::vector<std::size_t>& idx) {
                            probe.clear();
                            for (auto i : idx) probe.push_back(cand[i]);
                            return edges.count(probe) > 0;
                        },
                        [&](const std::vector<std::size_t>& idx) {
                            std::vector<Term> clique;
                            for (auto i : idx) clique.push_back(cand[i]);
                            if (std::none_of(clique.begin(), clique.end(), [](const Term& t) { return t.is_var(); }))
                                return true;
                            found = clique;
                            return false;
                        });
        if (found) return {false, VerdictReason::forbidden_clique, *found};
    }
    return {};
}

/** A finite model of the theory's universal part: vertices 0..size-1 with an assignment of terms. */
struct TheoryModel {
    TheoryDescriptor theory;
    std::size_t size = 0;
    std::map<Term, std::uint32_t> assignment;
    std::set<std::vector<std::uint32_t>> edges;

    bool has_edge(std::vector<std::uint32_t> vs) const {
        std::sort(vs.begin(), vs.end());
        if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) return false;
        return edges.count(vs) > 0;
    }
};

struct Realization {
    std::optional<TheoryModel> model;
    ConsistencyVerdict verdict;
};

/** Literal-by-literal evaluation in an explicit model; returns the first failing literal's reason. */
inline ConsistencyVerdict evaluate(const TheoryModel& m, const Diagram& d) {
    for (const auto& lit : d.literals) {
        if (const auto* e = std::get_if<EdgeLiteral>(&lit)) {
            std::vector<std::uint32_t> vs;
            for (const auto& t : e->args) vs.push_back(m.assignment.at(t));
            if (m.has_edge(vs) != e->positive) {
                std::vector<std::uint32_t> sorted = vs;
                std::sort(sorted.begin(), sorted.end());
                bool degenerate = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
                return {false, degenerate ? VerdictReason::equality_conflict : VerdictReason::sign_conflict,
                        detail::sorted_terms(e->args)};
            }
        } else {
            const auto& q = std::get<NeqLiteral>(lit);
            if (m.assignment.at(q.var) == m.assignment.at(q.other))
                return {false, VerdictReason::equality_conflict, detail::sorted_terms({q.var, q.other})};
        }
    }
    return {};
}

/** Exhaustive scan for a clique of the forbidden size; returns it as vertex ids. */
inline std::optional<std::vector<std::uint32_t>> scan_forbidden_clique(const TheoryModel& m) {
    const std::size_t bound = m.theory.clique_bound();
    if (!bound || m.size < bound) return std::nullopt;
    const std::size_t arity = m.theory.edge_arity();
    std::optional<std::vector<std::uint32_t>> found;
    for_each_combination(m.size, bound, [&](const std::vector<std::size_t>& pick) {
        bool all = for_each_combination(bound, arity, [&](const std::vector<std::size_t>& sub) {
            std::vector<std::uint32_t> e;
            for (auto i : sub) e.push_back(static_cast<std::uint32_t>(pick[i]));
            return m.edges.count(e) > 0;
        });
        if (all) found = std::vector<std::uint32_t>(pick.begin(), pick.end());
        return !all;
    });
    return found;
}

/**
 * Builds the free amalgam: parameters and variables on distinct vertices, edges exactly the
 * parameter edges and positive atoms. Succeeds iff it is a model of the class and satisfies
 * every literal.
 */
inline Realization realize_in_model(const Diagram& d) {
    detail::check_diagram(d);
    TheoryModel m;
    m.theory = d.theory;
    std::uint32_t next = 0;
    for (auto p : d.params) m.assignment[Term::param(p)] = next++;
    for (auto v : d.free_vars) m.assignment[Term::var(v)] = next++;
    m.size = next;
    for (const auto& e : d.param_edges) {
        std::vector<std::uint32_t> vs;
        for (auto p : e) vs.push_back(m.assignment.at(Term::param(p)));
        std::sort(vs.begin(), vs.end());
        m.edges.insert(vs);
    }
    for (const auto& lit : d.literals) {
        const auto* e = std::get_if<EdgeLiteral>(&lit);
        if (!e || !e->positive) continue;
        std::vector<std::uint32_t> vs;
        for (const auto& t : e->args) vs.push_back(m.assignment.at(t));
        std::sort(vs.begin(), vs.end());
        if (std::adjacent_find(vs.begin(), vs.end()) == vs.end()) m.edges.insert(vs);
    }
    ConsistencyVerdict v = evaluate(m, d);
    if (!v.consistent) return {std::nullopt, v};
    if (auto clique = scan_forbidden_clique(m)) {
        std::map<std::uint32_t, Term> back;
        for (const auto& [t, x] : m.assignment) back.emplace(x, t);
        std::vector<Term> w;
        for (auto x : *clique) w.push_back(back.at(x));
        return {std::nullopt, {false, VerdictReason::forbidden_clique, detail::sorted_terms(w)}};
    }
    return {m, {}};
}

/** Conjunction of family members (shared parameter pool: parameters and edges are united). */
inline Diagram conjoin(const std::vector<Diagram>& family, const std::vector<std::size_t>& members) {
    Diagram out;
    if (family.empty()) return out;
    out.theory = family.front().theory;
    std::set<std::uint32_t> params, vars;
    for (auto i : members) {
        const Diagram& d = family.at(i);
        params.insert(d.params.begin(), d.params.end());
        vars.insert(d.free_vars.begin(), d.free_vars.end());
        out.param_edges.insert(d.param_edges.begin(), d.param_edges.end());
        out.literals.insert(out.literals.end(), d.literals.begin(), d.literals.end());
    }
    out.params.assign(params.begin(), params.end());
    out.free_vars.assign(vars.begin(), vars.end());
    return out;
}

/**
 * Minimal inconsistent index sets of size <= max_size, by size then lexicographically. A set is
 * reported iff its conjunction is inconsistent and it contains no smaller reported set (which,
 * by monotonicity, is exactly minimality). `limit` stops after that many sets (0 = all).
 */
inline std::vector<std::vector<std::size_t>> minimal_inconsistent_subfamilies(const std::vector<Diagram>& family,
                                                                              std::size_t max_size,
                                                                              std::size_t limit = 0) {
    std::vector<std::vector<std::size_t>> found;
    if (family.empty()) return found;
    std::vector<std::size_t> everything(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) everything[i] = i;
    if (consistent(conjoin(family, everything)).consistent) return found;
    auto contains_found = [&](const std::vector<std::size_t>& s) {
        for (const auto& f : found)
            if (std::includes(s.begin(), s.end(), f.begin(), f.end())) return true;
        return false;
    };
    for (std::size_t size = 1; size <= std::min(max_size, family.size()); ++size) {
        bool go_on = for_each_combination(family.size(), size, [&](const std::vector<std::size_t>& s) {
            if (contains_found(s)) return true;
            if (!consistent(conjoin(family, s)).consistent) found.push_back(s);
            return !(limit && found.size() >= limit);
        });
        if (!go_on) break;
    }
    return found;
}

/**
 * Deletion filter: starting from all members, drops each index in turn when the rest stays
 * inconsistent. The result is inconsistent and minimal under inclusion; nullopt if the whole
 * family is consistent.
 */
inline std::optional<std::vector<std::size_t>> shrink_inconsistent(const std::vector<Diagram>& family) {
    std::vector<std::size_t> keep(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) keep[i] = i;
    if (family.empty() || consistent(conjoin(family, keep)).consistent) return std::nullopt;
    for (std::size_t i = 0; i < family.size(); ++i) {
        std::vector<std::size_t> trial;
        for (auto j : keep)
            if (j != i) trial.push_back(j);
        if (!consistent(conjoin(family, trial)).consistent) keep = std::move(trial);
    }
    return keep;
}

} // namespace shearlab
