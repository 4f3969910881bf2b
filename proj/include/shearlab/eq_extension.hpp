#pragma once

#include "circle.hpp"
#include "structures.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace shearlab {

/** All n-tuples of the model's vertices (with repetition), lexicographic by coordinates. */
inline std::vector<Tuple> all_tuples(const IndexModel& m, std::size_t n) {
    std::vector<Tuple> out;
    Tuple points = m.by_coord();
    Tuple cur(n);
    auto rec = [&](auto&& self, std::size_t p) -> void {
        if (p == n) {
            out.push_back(cur);
            return;
        }
        for (auto v : points) {
            cur[p] = v;
            self(self, p + 1);
        }
    };
    if (n > 0) rec(rec, 0);
    return out;
}

/** The relation "left_i = right_j for all (i, j) in p" on all n-tuples of m, as accepted codes over the empty sequence. */
inline InvariantRelation tuple_relation(const IndexModel& m, std::size_t n, const EqualityPattern& p) {
    InvariantRelation rel{n, {}, {}};
    auto tuples = all_tuples(m, n);
    for (const auto& a : tuples)
        for (const auto& b : tuples)
            if (pattern_holds(p, a, b)) rel.accepted.insert(pair_code(m, a, b, {}));
    return rel;
}

/** P_phi on classes of the listed sorts (0 = base): accepted codes of the concatenated representatives. */
struct LiftedRelation {
    std::string name;
    std::vector<std::size_t> sorts;
    std::set<std::string> accepted;
};

/** Builds P_phi from a predicate on representative tuples, evaluated on every combination. */
template <class Pred>
LiftedRelation lift_relation(const IndexModel& m, std::string name, std::vector<std::size_t> sorts,
                             const std::vector<std::size_t>& arities, Pred&& phi) {
    LiftedRelation rel{std::move(name), std::move(sorts), {}};
    std::vector<std::vector<Tuple>> pools;
    for (auto s : rel.sorts) pools.push_back(all_tuples(m, arities.at(s)));
    std::vector<Tuple> pick(pools.size());
    auto rec = [&](auto&& self, std::size_t p) -> void {
        if (p == pools.size()) {
            if (phi(static_cast<const std::vector<Tuple>&>(pick))) {
                Tuple cat;
                for (const auto& t : pick) cat.insert(cat.end(), t.begin(), t.end());
                rel.accepted.insert(qf_type_of(m, cat, {}).code());
            }
            return;
        }
        for (const auto& t : pools[p]) {
            pick[p] = t;
            self(self, p + 1);
        }
    };
    rec(rec, 0);
    return rel;
}

struct EqClass {
    VertexId id = 0;
    std::size_t relation = 0;
    Tuple representative;
    std::vector<Tuple> members;
    std::vector<std::optional<VertexId>> determined; // position -> the common vertex, if all members agree
};

struct EqExtension {
    IndexModel base;
    std::vector<InvariantRelation> relations; // index 0 is equality on singletons
    std::vector<LiftedRelation> lifted;
    std::vector<EqClass> classes;             // relation >= 1 only; E0 classes are the base vertices
    std::vector<std::map<Tuple, VertexId>> maps; // F_i
    std::set<VertexId> p_star;

    std::size_t arity(std::size_t relation) const { return relations.at(relation).arity; }
    bool is_base(VertexId e) const { return p_star.count(e) > 0; }
    const EqClass& cls(VertexId e) const {
        for (const auto& c : classes)
            if (c.id == e) return c;
        throw std::out_of_range("unknown class id " + std::to_string(e));
    }
    std::size_t sort(VertexId e) const { return is_base(e) ? 0 : cls(e).relation; }
    /** Every element of the expansion: base vertices by id, then classes by id. */
    std::vector<VertexId> elements() const {
        std::vector<VertexId> out(p_star.begin(), p_star.end());
        for (const auto& c : classes) out.push_back(c.id);
        return out;
    }
    /** The representative tuple of an element (a base vertex is its own 1-tuple). */
    Tuple representative(VertexId e) const { return is_base(e) ? Tuple{e} : cls(e).representative; }
};

inline InvariantRelation equality_relation(const IndexModel& m) { return tuple_relation(m, 1, {{0, 0}}); }

/**
 * Materializes the classes of every n_i-tuple under each E_i (ids after the base ids, least
 * representative first) and checks that every relation is an equivalence and every lifted
 * relation is class-invariant.
 */
inline EqExtension build_eq_extension(const IndexModel& base, const std::vector<InvariantRelation>& relations,
                                      const std::vector<LiftedRelation>& lifted = {}) {
    EqExtension ext;
    ext.base = base;
    ext.relations.push_back(equality_relation(base));
    for (const auto& r : relations) {
        if (r.arity == 0) throw std::invalid_argument("eq relation of arity 0");
        if (!r.over.empty()) throw std::invalid_argument("eq relations are taken over the empty sequence");
        ext.relations.push_back(r);
    }
    ext.lifted = lifted;
    VertexId next = 0;
    for (const auto& v : base.vertices()) {
        ext.p_star.insert(v.id);
        next = std::max<VertexId>(next, v.id + 1);
    }
    ext.maps.resize(ext.relations.size());
    for (const auto& v : base.vertices()) ext.maps[0][{v.id}] = v.id;

    for (std::size_t i = 1; i < ext.relations.size(); ++i) {
        const auto& rel = ext.relations[i];
        auto tuples = all_tuples(base, rel.arity);
        const std::size_t n = tuples.size();
        std::vector<std::vector<char>> e(n, std::vector<char>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) e[a][b] = rel.holds(pair_code(base, tuples[a], tuples[b], {}));
        PairCodes pc;
        pc.Y = tuples;
        if (auto v = detail::equivalence_violation(e, pc, "E" + std::to_string(i)))
            throw std::invalid_argument("relation E" + std::to_string(i) + " is not an equivalence: " + v->relation);
        std::vector<std::optional<std::size_t>> class_of(n);
        for (std::size_t a = 0; a < n; ++a) {
            if (class_of[a]) continue;
            EqClass c;
            c.id = next++;
            c.relation = i;
            c.representative = tuples[a];
            for (std::size_t b = a; b < n; ++b)
                if (e[a][b]) {
                    class_of[b] = ext.classes.size();
                    c.members.push_back(tuples[b]);
                    ext.maps[i][tuples[b]] = c.id;
                }
            for (std::size_t p = 0; p < rel.arity; ++p) {
                VertexId x = c.members.front()[p];
                bool same = std::all_of(c.members.begin(), c.members.end(), [&](const Tuple& t) { return t[p] == x; });
                c.determined.push_back(same ? std::optional<VertexId>(x) : std::nullopt);
            }
            ext.classes.push_back(std::move(c));
        }
    }

    // lifted relations must not depend on the choice of representatives
    for (const auto& phi : ext.lifted) {
        for (auto s : phi.sorts)
            if (s >= ext.relations.size()) throw std::invalid_argument("lifted relation " + phi.name + " names an unknown sort");
        std::vector<std::vector<std::vector<Tuple>>> member_lists;
        for (auto s : phi.sorts) {
            std::vector<std::vector<Tuple>> per_class;
            if (s == 0) {
                for (const auto& v : base.vertices()) per_class.push_back({{v.id}});
            } else {
                for (const auto& c : ext.classes)
                    if (c.relation == s) per_class.push_back(c.members);
            }
            member_lists.push_back(std::move(per_class));
        }
        std::vector<std::size_t> pick(phi.sorts.size());
        auto rec = [&](auto&& self, std::size_t p) -> void {
            if (p == pick.size()) {
                std::optional<bool> value;
                std::vector<std::size_t> member(pick.size(), 0);
                auto inner = [&](auto&& me, std::size_t q) -> void {
                    if (q == pick.size()) {
                        Tuple cat;
                        for (std::size_t x = 0; x < pick.size(); ++x) {
                            const auto& t = member_lists[x][pick[x]][member[x]];
                            cat.insert(cat.end(), t.begin(), t.end());
                        }
                        bool holds = phi.accepted.count(qf_type_of(base, cat, {}).code()) > 0;
                        if (value && *value != holds)
                            throw std::invalid_argument("lifted relation " + phi.name + " is not invariant under the classes");
                        value = holds;
                        return;
                    }
                    for (std::size_t m = 0; m < member_lists[q][pick[q]].size(); ++m) {
                        member[q] = m;
                        me(me, q + 1);
                    }
                };
                inner(inner, 0);
                return;
            }
            for (std::size_t c = 0; c < member_lists[p].size(); ++c) {
                pick[p] = c;
                self(self, p + 1);
            }
        };
        rec(rec, 0);
    }
    return ext;
}

namespace detail {

inline bool lifted_holds(const EqExtension& ext, const LiftedRelation& phi, const std::vector<VertexId>& args) {
    Tuple cat;
    for (auto a : args) {
        Tuple t = ext.representative(a);
        cat.insert(cat.end(), t.begin(), t.end());
    }
    return phi.accepted.count(qf_type_of(ext.base, cat, {}).code()) > 0;
}

} // namespace detail

/**
 * Code of the quantifier-free type of e over s in the expanded signature: sort, equalities with s,
 * base type over the base part of s, F_i incidences with tuples from s (and e), lifted P_phi
 * atoms, and the label/order facts of the coordinates a class determines.
 */
inline std::string eq_type_code(const EqExtension& ext, VertexId e, const Tuple& s) {
    std::string code = "sort" + std::to_string(ext.sort(e)) + ";eq";
    for (auto x : s) code += x == e ? '1' : '0';
    Tuple base_s;
    for (auto x : s)
        if (ext.is_base(x)) base_s.push_back(x);
    auto cmp = [&](VertexId a, VertexId b) { return std::to_string(compare(ext.base.coord(a), ext.base.coord(b))); };

    if (ext.is_base(e)) {
        code += ";base" + qf_type_of(ext.base, {e}, base_s).code();
    } else {
        const auto& c = ext.cls(e);
        for (std::size_t p = 0; p < c.determined.size(); ++p) {
            code += ";d" + std::to_string(p);
            if (!c.determined[p]) continue;
            VertexId x = *c.determined[p];
            code += "P" + to_string(ext.base.pred(x)) + "<";
            for (auto y : base_s) code += cmp(x, y);
            for (auto y : s) {
                if (ext.is_base(y)) continue;
                code += "|";
                for (const auto& dy : ext.cls(y).determined) code += dy ? cmp(x, *dy) : "_";
            }
        }
    }
    // class elements of s compared with a base e
    if (ext.is_base(e))
        for (auto y : s) {
            if (ext.is_base(y)) continue;
            code += ";c";
            for (const auto& dy : ext.cls(y).determined) code += dy ? cmp(e, *dy) : "_";
        }

    // F_i incidences: terms F_i(u) for u over base_s (plus e when e is a base vertex)
    Tuple args = base_s;
    if (ext.is_base(e)) args.push_back(e);
    for (std::size_t i = 1; i < ext.relations.size(); ++i) {
        const std::size_t n = ext.arity(i);
        std::vector<std::size_t> idx(n, 0);
        if (args.empty()) continue;
        code += ";F" + std::to_string(i) + ":";
        while (true) {
            Tuple u;
            bool uses_e = false;
            for (auto k : idx) {
                u.push_back(args[k]);
                uses_e = uses_e || (ext.is_base(e) && k + 1 == args.size());
            }
            VertexId value = ext.maps[i].at(u);
            if (!ext.is_base(e)) {
                code += value == e ? '1' : '0';
            } else if (uses_e) {
                for (auto y : s) code += value == y ? '1' : '0';
                code += ',';
            }
            std::size_t p = n;
            while (p > 0 && idx[p - 1] + 1 == args.size()) idx[--p] = 0;
            if (p == 0) break;
            ++idx[p - 1];
        }
    }

    // lifted atoms with e among the arguments, the rest from s
    for (std::size_t j = 0; j < ext.lifted.size(); ++j) {
        const auto& phi = ext.lifted[j];
        std::vector<VertexId> pool = s;
        pool.push_back(e);
        std::vector<VertexId> pick(phi.sorts.size());
        code += ";L" + std::to_string(j) + ":";
        auto rec = [&](auto&& self, std::size_t p, bool used) -> void {
            if (p == pick.size()) {
                if (used) code += detail::lifted_holds(ext, phi, pick) ? '1' : '0';
                return;
            }
            for (std::size_t q = 0; q < pool.size(); ++q) {
                if (ext.sort(pool[q]) != phi.sorts[p]) continue;
                pick[p] = pool[q];
                self(self, p + 1, used || q + 1 == pool.size());
            }
        };
        rec(rec, 0, false);
    }
    return code;
}

struct IndistinguishableResult {
    std::optional<std::pair<VertexId, VertexId>> pair;
    std::size_t candidates = 0;
    std::size_t bound = 0;
};

/** First r0 != r1 (class sorts first, then the base sort; ascending ids) with equal type codes over s. */
inline IndistinguishableResult find_indistinguishable_pair(const EqExtension& ext, const Tuple& s, std::size_t max_candidates = 0) {
    IndistinguishableResult res;
    std::vector<VertexId> order;
    for (const auto& c : ext.classes) order.push_back(c.id);
    for (auto v : ext.p_star) order.push_back(v);
    res.bound = max_candidates ? std::min(max_candidates, order.size()) : order.size();
    std::map<std::string, VertexId> seen;
    for (std::size_t i = 0; i < res.bound; ++i) {
        ++res.candidates;
        auto [it, fresh] = seen.emplace(eq_type_code(ext, order[i], s), order[i]);
        if (!fresh) {
            res.pair = std::make_pair(it->second, order[i]);
            return res;
        }
    }
    return res;
}

enum class ClosureKind { dcl, acl };
enum class ClosureStatus { inside, outside, undetermined_at_bound };

inline std::string closure_kind_name(ClosureKind k) { return k == ClosureKind::dcl ? "dcl" : "acl"; }
inline std::string closure_status_name(ClosureStatus s) {
    switch (s) {
        case ClosureStatus::inside: return "inside";
        case ClosureStatus::outside: return "outside";
        case ClosureStatus::undetermined_at_bound: return "undetermined-at-bound";
    }
    return "?";
}

struct ClosureReport {
    ClosureKind kind = ClosureKind::dcl;
    VertexId element = 0;
    ClosureStatus status = ClosureStatus::undetermined_at_bound;
    std::size_t bound_used = 0;
    std::vector<VertexId> witnesses; // distinct realizations of tp(element / s) found
};

/**
 * Searches class extensions of m (up to `bound` realizations, fresh ones added one at a time) for
 * distinct realizations of tp(element / s). Two suffice for dcl; `bound` many stand in for
 * infinitely many for acl. An element of s is inside both: equality pins it.
 */
inline ClosureReport closure(const IndexModel& m, const Tuple& s, VertexId element, ClosureKind kind, std::size_t bound) {
    if (!m.contains(element)) throw std::out_of_range("unknown vertex id " + std::to_string(element));
    for (auto x : s)
        if (!m.contains(x)) throw std::out_of_range("unknown vertex id " + std::to_string(x));
    ClosureReport rep;
    rep.kind = kind;
    rep.element = element;
    if (std::find(s.begin(), s.end(), element) != s.end()) {
        rep.status = ClosureStatus::inside;
        rep.witnesses = {element};
        rep.bound_used = 1;
        return rep;
    }
    const std::size_t needed = kind == ClosureKind::dcl ? 2 : bound;
    QfType r = qf_type_of(m, {element}, s);
    IndexModel J = m;
    rep.witnesses = {element};
    while (rep.witnesses.size() < std::min(needed, bound)) {
        if (!realizable(J, r, s)) break;
        Extension ext = extend_realizing(J, r, s);
        J = std::move(ext.model);
        rep.witnesses.push_back(ext.tuple.front());
    }
    rep.bound_used = rep.witnesses.size();
    if (needed >= 2 && rep.witnesses.size() >= needed)
        rep.status = ClosureStatus::outside;
    else if (rep.witnesses.size() < std::min(needed, bound))
        rep.status = ClosureStatus::inside;
    else
        rep.status = ClosureStatus::undetermined_at_bound;
    return rep;
}

/** The coordinate-equality equivalences on n-tuples: one per subset S of positions, "left_i = right_i for i in S". */
inline std::vector<InvariantRelation> coordinate_equivalences(const IndexModel& m, std::size_t n) {
    std::vector<InvariantRelation> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        EqualityPattern p;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) p.emplace_back(i, i);
        out.push_back(tuple_relation(m, n, p));
    }
    return out;
}

} // namespace shearlab
