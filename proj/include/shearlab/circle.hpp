#pragma once

#include "shearing.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shearlab {

/** A qf-type-invariant relation between two realizations: the set of accepted codes of a⌢b over s. */
struct InvariantRelation {
    std::size_t arity = 0;
    Tuple over;
    std::set<std::string> accepted;

    bool holds(const std::string& pair_code) const { return accepted.count(pair_code) > 0; }
    bool holds(const IndexModel& J, const Tuple& a, const Tuple& b) const { return holds(pair_code(J, a, b, over)); }
    bool operator==(const InvariantRelation&) const = default;
};

struct CircleWitness {
    Tuple s;
    Tuple t;
    InvariantRelation E1, E2, F;
};

struct CircleViolation {
    std::string kind; // insufficient-realizations | not-equivalence | not-well-defined | not-functional | not-injective | empty | fixed-point
    std::string relation;
    std::vector<Tuple> tuples;
};

struct CircleCheck {
    std::vector<CircleViolation> violations;
    std::size_t realizations = 0;

    bool ok() const { return violations.empty(); }
};

/** Pairs (i, j) meaning left_i = right_j; the relation is the conjunction over the list. */
using EqualityPattern = std::vector<std::pair<std::size_t, std::size_t>>;

inline std::string pattern_name(const EqualityPattern& p) {
    if (p.empty()) return "true";
    std::string out;
    for (auto [i, j] : p) {
        if (!out.empty()) out += " & ";
        out += "left" + std::to_string(i) + "=right" + std::to_string(j);
    }
    return out;
}

inline bool pattern_holds(const EqualityPattern& p, const Tuple& a, const Tuple& b) {
    return std::all_of(p.begin(), p.end(), [&](const auto& ij) { return a.at(ij.first) == b.at(ij.second); });
}

/** The coordinate-equality relation restricted to the codes realized by pairs from pc. */
inline InvariantRelation coordinate_relation(const PairCodes& pc, const Tuple& s, std::size_t arity, const EqualityPattern& p) {
    InvariantRelation rel{arity, s, {}};
    for (std::size_t a = 0; a < pc.Y.size(); ++a)
        for (std::size_t b = 0; b < pc.Y.size(); ++b)
            if (pattern_holds(p, pc.Y[a], pc.Y[b])) rel.accepted.insert(pc.code[a][b]);
    return rel;
}

inline InvariantRelation coordinate_relation(const IndexModel& J, const Tuple& s, const Tuple& t, const EqualityPattern& p) {
    return coordinate_relation(compute_pair_codes(J, qf_type_of(J, t, s), s), s, t.size(), p);
}

/** E1: first coordinates equal, E2: second coordinates equal, F: left's first equals right's second. */
inline CircleWitness linear_order_witness(const IndexModel& J, const Tuple& t) {
    if (t.size() != 2) throw std::invalid_argument("linear_order_witness needs a pair");
    PairCodes pc = compute_pair_codes(J, qf_type_of(J, t, {}), {});
    return {{}, t, coordinate_relation(pc, {}, 2, {{0, 0}}), coordinate_relation(pc, {}, 2, {{1, 1}}),
            coordinate_relation(pc, {}, 2, {{0, 1}})};
}

namespace detail {

/** Boolean matrix of a relation over Y x Y. */
inline std::vector<std::vector<char>> relation_matrix(const InvariantRelation& rel, const PairCodes& pc) {
    std::vector<std::vector<char>> m(pc.Y.size(), std::vector<char>(pc.Y.size()));
    for (std::size_t a = 0; a < pc.Y.size(); ++a)
        for (std::size_t b = 0; b < pc.Y.size(); ++b) m[a][b] = rel.holds(pc.code[a][b]);
    return m;
}

inline std::optional<CircleViolation> equivalence_violation(const std::vector<std::vector<char>>& e, const PairCodes& pc,
                                                            const std::string& name) {
    const std::size_t n = pc.Y.size();
    for (std::size_t a = 0; a < n; ++a)
        if (!e[a][a]) return CircleViolation{"not-equivalence", name + " is not reflexive", {pc.Y[a]}};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (e[a][b] != e[b][a]) return CircleViolation{"not-equivalence", name + " is not symmetric", {pc.Y[a], pc.Y[b]}};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!e[a][b]) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (e[b][c] && !e[a][c])
                    return CircleViolation{"not-equivalence", name + " is not transitive", {pc.Y[a], pc.Y[b], pc.Y[c]}};
        }
    return std::nullopt;
}

inline std::vector<CircleViolation> circle_violations(const std::vector<std::vector<char>>& e1,
                                                      const std::vector<std::vector<char>>& e2,
                                                      const std::vector<std::vector<char>>& f, const PairCodes& pc,
                                                      bool first_only) {
    std::vector<CircleViolation> out;
    const std::size_t n = pc.Y.size();
    auto push = [&](CircleViolation v) {
        out.push_back(std::move(v));
        return first_only;
    };
    if (n < 2 && push({"insufficient-realizations", "", {}})) return out;
    if (auto v = equivalence_violation(e1, pc, "E1"); v && push(*v)) return out;
    if (auto v = equivalence_violation(e2, pc, "E2"); v && push(*v)) return out;
    bool nonempty = false;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!f[a][b]) continue;
            nonempty = true;
            for (std::size_t a2 = 0; a2 < n; ++a2) {
                for (std::size_t b2 = 0; b2 < n; ++b2) {
                    if (e1[a][a2] && e2[b][b2] && !f[a2][b2] &&
                        push({"not-well-defined", "F is not invariant under E1 x E2", {pc.Y[a], pc.Y[b], pc.Y[a2], pc.Y[b2]}}))
                        return out;
                    if (a2 == a && f[a][b2] && !e2[b][b2] &&
                        push({"not-functional", "F sends one E1-class to two E2-classes", {pc.Y[a], pc.Y[b], pc.Y[b2]}}))
                        return out;
                    if (b2 == b && f[a2][b] && !e1[a][a2] &&
                        push({"not-injective", "F sends two E1-classes to one E2-class", {pc.Y[a], pc.Y[a2], pc.Y[b]}}))
                        return out;
                }
            }
        }
    if (!nonempty && push({"empty", "F relates no pair", {}})) return out;
    for (std::size_t a = 0; a < n; ++a)
        if (f[a][a] && push({"fixed-point", "F(t, t) holds", {pc.Y[a]}})) return out;
    return out;
}

} // namespace detail

/** Checks clauses (i)-(iii) over the realizations of tp(t/s) in J. */
inline CircleCheck check_circle_witness(const CircleWitness& w, const IndexModel& J) {
    CircleCheck rep;
    for (const auto* rel : {&w.E1, &w.E2, &w.F})
        if (rel->arity != w.t.size() || rel->over != w.s)
            throw std::invalid_argument("circle witness: relation arity or parameters differ from (t, s)");
    PairCodes pc = compute_pair_codes(J, qf_type_of(J, w.t, w.s), w.s);
    rep.realizations = pc.Y.size();
    rep.violations = detail::circle_violations(detail::relation_matrix(w.E1, pc), detail::relation_matrix(w.E2, pc),
                                               detail::relation_matrix(w.F, pc), pc, false);
    // only report the first of each kind
    std::vector<CircleViolation> firsts;
    std::set<std::string> kinds;
    for (auto& v : rep.violations)
        if (kinds.insert(v.kind + v.relation).second) firsts.push_back(std::move(v));
    rep.violations = std::move(firsts);
    return rep;
}

/** Accepted sets agree on every code realized by a pair of realizations in J. */
inline bool same_relations(const CircleWitness& a, const CircleWitness& b, const IndexModel& J) {
    if (a.s != b.s || a.t.size() != b.t.size()) return false;
    PairCodes pc = compute_pair_codes(J, qf_type_of(J, a.t, a.s), a.s);
    std::set<std::string> codes;
    for (const auto& row : pc.code) codes.insert(row.begin(), row.end());
    for (const auto& c : codes)
        if (a.E1.holds(c) != b.E1.holds(c) || a.E2.holds(c) != b.E2.holds(c) || a.F.holds(c) != b.F.holds(c)) return false;
    return true;
}

struct SearchBounds {
    std::size_t L = 2; // tuple length outside s
    std::size_t S = 0; // |s|
    std::size_t N = 8; // |J|
};

struct CircleSearchResult {
    std::optional<CircleWitness> witness;
    std::optional<IndexModel> J;
    EqualityPattern e1, e2, f;
    SearchBounds bounds;
    std::size_t contexts = 0;   // (s, t, J) combinations examined
    std::size_t candidates = 0; // (E1, E2, F) triples examined
};

/**
 * Extends J so the type of t over s is realized at least twice, then keeps adding realizations
 * that share a proper part of an existing realization (largest shared part first) while J stays
 * within max_size vertices.
 */
inline IndexModel duplicate_realizations(IndexModel J, const Tuple& s, const Tuple& t, std::size_t max_size) {
    QfType r = qf_type_of(J, t, s);
    auto fits = [&](std::size_t fresh) { return J.size() + fresh <= max_size; };
    if (enumerate_realizations(J, r, s).size() < 2 && fits(t.size())) J = extend_realizing(J, r, s).model;
    std::set<std::pair<Tuple, std::vector<std::size_t>>> done;
    bool grew = true;
    while (grew) {
        grew = false;
        auto Y = enumerate_realizations(J, r, s);
        for (std::size_t keep = t.size() - 1; keep + 1 > 0 && !grew; --keep)
            for (const auto& a : Y) {
                if (grew) break;
                for_each_combination(t.size(), keep, [&](const std::vector<std::size_t>& Q) {
                    if (!done.insert({a, Q}).second) return true;
                    if (!fits(t.size() - keep)) return true;
                    Tuple params = s;
                    for (auto q : Q) params.push_back(a[q]);
                    QfType target = qf_type_of(J, a, params);
                    J = extend_realizing(J, target, params).model;
                    grew = true;
                    return false;
                });
            }
    }
    return J;
}

namespace detail {

inline std::vector<EqualityPattern> all_patterns(std::size_t L) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) cells.emplace_back(i, j);
    std::vector<EqualityPattern> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << cells.size()); ++m) {
        EqualityPattern p;
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (m >> c & 1) p.push_back(cells[c]);
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

} // namespace detail

struct ContextWitness {
    EqualityPattern e1, e2, f;
    CircleWitness witness;
};

/**
 * Every (E1, E2, F) of coordinate-equality patterns that passes check_circle_witness over the
 * realizations of tp(t/s) in J, in candidate order; stops after `limit` (0 = all).
 */
inline std::vector<ContextWitness> context_witnesses(const IndexModel& J, const Tuple& s, const Tuple& t,
                                                     std::size_t& candidates, std::size_t limit = 0) {
    std::vector<ContextWitness> out;
    const std::size_t L = t.size();
    PairCodes pc = compute_pair_codes(J, qf_type_of(J, t, s), s);
    if (pc.Y.size() < 2) return out;
    auto patterns = detail::all_patterns(L);
    const std::size_t n = pc.Y.size();
    auto matrix = [&](const EqualityPattern& p) {
        std::vector<std::vector<char>> m(n, std::vector<char>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) m[a][b] = pattern_holds(p, pc.Y[a], pc.Y[b]);
        return m;
    };
    std::vector<std::vector<std::vector<char>>> mats;
    std::vector<std::size_t> equivalences;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        mats.push_back(matrix(patterns[i]));
        if (!detail::equivalence_violation(mats.back(), pc, "E")) equivalences.push_back(i);
    }
    for (auto e1 : equivalences)
        for (auto e2 : equivalences)
            for (std::size_t f = 0; f < patterns.size(); ++f) {
                ++candidates;
                if (!detail::circle_violations(mats[e1], mats[e2], mats[f], pc, true).empty()) continue;
                CircleWitness w{s, t, coordinate_relation(pc, s, L, patterns[e1]), coordinate_relation(pc, s, L, patterns[e2]),
                                coordinate_relation(pc, s, L, patterns[f])};
                if (!check_circle_witness(w, J).ok()) continue;
                out.push_back({patterns[e1], patterns[e2], patterns[f], std::move(w)});
                if (limit && out.size() >= limit) return out;
            }
    return out;
}

/**
 * Bounded search in the coordinate-equality fragment: s ranges over subsets of the base (by size,
 * then lexicographically), t over increasing tuples of 1..L base points outside s, J is the
 * duplication of the base up to N vertices, and E1, E2, F over conjunctions of left_i = right_j.
 */
inline CircleSearchResult search_circle_witness(const ClassDescriptor& cls, const IndexModel& base, const SearchBounds& bounds) {
    if (!(base.cls() == cls)) throw std::invalid_argument("search_circle_witness: base is not in the class");
    CircleSearchResult res;
    res.bounds = bounds;
    Tuple points = base.by_coord();
    for (std::size_t size = 0; size <= std::min(bounds.S, points.size()); ++size) {
        bool stop = !for_each_combination(points.size(), size, [&](const std::vector<std::size_t>& sp) {
            Tuple s;
            for (auto i : sp) s.push_back(points[i]);
            Tuple rest;
            for (auto v : points)
                if (std::find(s.begin(), s.end(), v) == s.end()) rest.push_back(v);
            for (std::size_t L = 1; L <= std::min(bounds.L, rest.size()); ++L) {
                bool found = !for_each_combination(rest.size(), L, [&](const std::vector<std::size_t>& tp) {
                    Tuple t;
                    for (auto i : tp) t.push_back(rest[i]);
                    IndexModel J = duplicate_realizations(base, s, t, std::max(bounds.N, base.size()));
                    ++res.contexts;
                    auto found_here = context_witnesses(J, s, t, res.candidates, 1);
                    if (found_here.empty()) return true;
                    const auto& cw = found_here.front();
                    res.witness = cw.witness;
                    res.J = J;
                    res.e1 = cw.e1;
                    res.e2 = cw.e2;
                    res.f = cw.f;
                    return false;
                });
                if (found) return false;
            }
            return true;
        });
        if (stop) break;
    }
    return res;
}

/** Width-2 collision labeling: (0,0) per E1, (1,1) per E2, (0,1) per F and (1,0) per F mirrored; phi = R(x,b0) & !R(x,b1). */
inline ShearingInstance circle_to_shearing(const CircleWitness& w, const IndexModel& J) {
    CircleCheck check = check_circle_witness(w, J);
    if (!check.ok()) throw std::invalid_argument("circle_to_shearing: invalid witness (" + check.violations.front().kind + ")");
    PairCodes pc = compute_pair_codes(J, qf_type_of(J, w.t, w.s), w.s);
    Labeling lab = Labeling::collision(2);
    for (std::size_t a = 0; a < pc.Y.size(); ++a)
        for (std::size_t b = 0; b < pc.Y.size(); ++b) {
            const auto& c = pc.code[a][b];
            if (w.E1.holds(c)) lab.add(0, 0, c);
            if (w.E2.holds(c)) lab.add(1, 1, c);
            if (w.F.holds(c)) {
                lab.add(0, 1, c);
                lab.add(1, 0, pc.code[b][a]);
            }
        }
    Formula f;
    f.positive = {{0}};
    f.negative = {{1}};
    f.distinct = {0, 1};
    return make_instance(J, w.s, w.t, TheoryDescriptor::random_graph(), lab, f);
}

struct StrongPairwise {
    bool ok = true;
    IndexModel J;                 // the model after adding missing partners
    std::vector<Tuple> unmatched; // realizations left without an inconsistent partner
    std::size_t partners_added = 0;
};

/**
 * For every realization t* in J, looks for t** with {phi(t*), phi(t**)} inconsistent, realizing a
 * partner with the type of a nonempty F-pair when none exists yet.
 */
inline StrongPairwise check_strong_pairwise(const ShearingInstance& inst, const IndexModel& J, std::size_t budget = 64) {
    StrongPairwise out{true, J, {}, 0};
    const auto original = enumerate_realizations(J, inst.r, inst.s);
    auto pair_inconsistent = [&](const IndexModel& M, const Tuple& a, const Tuple& b) {
        Family fam = instantiate_family(inst, M);
        auto ia = std::find(fam.realizations.begin(), fam.realizations.end(), a) - fam.realizations.begin();
        auto ib = std::find(fam.realizations.begin(), fam.realizations.end(), b) - fam.realizations.begin();
        std::vector<std::size_t> members{static_cast<std::size_t>(ia), static_cast<std::size_t>(ib)};
        if (ia == ib) members.pop_back();
        return !consistent(conjoin(fam.diagrams, members)).consistent;
    };
    // a template pair witnessing the inconsistency
    std::optional<std::pair<Tuple, Tuple>> model_pair;
    for (const auto& a : original)
        for (const auto& b : original)
            if (!model_pair && a != b && pair_inconsistent(J, a, b)) model_pair = std::make_pair(a, b);
    for (const auto& a : original) {
        bool matched = false;
        for (const auto& b : enumerate_realizations(out.J, inst.r, inst.s))
            if (b != a && pair_inconsistent(out.J, a, b)) {
                matched = true;
                break;
            }
        if (!matched && model_pair && out.partners_added < budget) {
            Tuple params = a;
            params.insert(params.end(), inst.s.begin(), inst.s.end());
            Tuple model_params = model_pair->first;
            model_params.insert(model_params.end(), inst.s.begin(), inst.s.end());
            QfType target = qf_type_of(out.J, model_pair->second, model_params);
            if (realizable(out.J, target, params)) {
                Extension ext = extend_realizing(out.J, target, params);
                out.J = ext.model;
                ++out.partners_added;
                matched = pair_inconsistent(out.J, a, ext.tuple);
            }
        }
        if (!matched) {
            out.ok = false;
            out.unmatched.push_back(a);
        }
    }
    return out;
}

/**
 * Extracts (E1, E2, F) from a random-graph shearing instance: finds a positive/negative collision
 * b_{a,i} = b_{b,j} and reads off position-i equality, position-j equality and the cross equality.
 */
inline CircleWitness shearing_to_circle(const ShearingInstance& inst, const IndexModel& J) {
    if (inst.theory.kind != TheoryKind::random_graph)
        throw std::invalid_argument("shearing_to_circle: instance theory must be the random graph");
    Family fam = instantiate_family(inst, J);
    PairCodes pc = compute_pair_codes(J, inst.r, inst.s);
    std::optional<std::pair<std::size_t, std::size_t>> ij;
    for (const auto& pos : inst.formula.positive) {
        for (const auto& neg : inst.formula.negative) {
            for (std::size_t a = 0; a < fam.realizations.size() && !ij; ++a)
                for (std::size_t b = 0; b < fam.realizations.size() && !ij; ++b)
                    if (fam.params[a][pos[0]] == fam.params[b][neg[0]]) ij = std::make_pair(pos[0], neg[0]);
            if (ij) break;
        }
        if (ij) break;
    }
    if (!ij) throw std::runtime_error("shearing_to_circle: no positive/negative collision in the working model");
    auto [i, j] = *ij;
    CircleWitness w{inst.s, inst.t, {inst.t.size(), inst.s, {}}, {inst.t.size(), inst.s, {}}, {inst.t.size(), inst.s, {}}};
    for (std::size_t a = 0; a < pc.Y.size(); ++a)
        for (std::size_t b = 0; b < pc.Y.size(); ++b) {
            auto fa = static_cast<std::size_t>(std::find(fam.realizations.begin(), fam.realizations.end(), pc.Y[a]) -
                                               fam.realizations.begin());
            auto fb = static_cast<std::size_t>(std::find(fam.realizations.begin(), fam.realizations.end(), pc.Y[b]) -
                                               fam.realizations.begin());
            const auto& pa = fam.params[fa];
            const auto& pb = fam.params[fb];
            if (pa[i] == pb[i]) w.E1.accepted.insert(pc.code[a][b]);
            if (pa[j] == pb[j]) w.E2.accepted.insert(pc.code[a][b]);
            if (pa[i] == pb[j]) w.F.accepted.insert(pc.code[a][b]);
        }
    return w;
}

} // namespace shearlab
