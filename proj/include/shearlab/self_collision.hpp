#pragma once

#include "shearing.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace shearlab {

/** code(a1⌢b1) = code(a2⌢b2) over s. */
struct TypeEquality {
    Tuple a1, b1, a2, b2;
};

/** b_{a, i} = b_{b, j}. */
struct CollisionFact {
    Tuple a;
    std::size_t i = 0;
    Tuple b;
    std::size_t j = 0;
};

struct TraceMove {
    std::string kind; // density | crossing | copy-left | close
    std::string note;
    std::vector<TypeEquality> equalities;
    std::vector<CollisionFact> collisions;
    std::vector<VertexId> fresh;
};

struct SelfCollision {
    IndexModel J;
    Tuple v, w, z;
    std::vector<TraceMove> trace;
    std::size_t initial_crossings = 0;
    std::size_t fresh_used = 0;
};

class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Pairs (a, b) with v_a, w_b outside the common range, in the same interval of it, and w_b < v_a. */
inline std::vector<std::pair<std::size_t, std::size_t>> crossings(const IndexModel& J, const Tuple& v, const Tuple& w) {
    std::set<VertexId> vs(v.begin(), v.end()), ws(w.begin(), w.end());
    std::vector<Rational> common;
    for (auto x : v)
        if (ws.count(x)) common.push_back(J.coord(x));
    std::sort(common.begin(), common.end());
    auto interval = [&](VertexId x) {
        return std::lower_bound(common.begin(), common.end(), J.coord(x)) - common.begin();
    };
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < v.size(); ++a) {
        if (ws.count(v[a])) continue;
        for (std::size_t b = 0; b < w.size(); ++b) {
            if (vs.count(w[b])) continue;
            if (interval(v[a]) == interval(w[b]) && J.coord(w[b]) < J.coord(v[a])) out.emplace_back(a, b);
        }
    }
    return out;
}

namespace detail {

inline Tuple concat(const Tuple& a, const Tuple& b) {
    Tuple out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Tuple union_ids(std::initializer_list<const Tuple*> parts) { return distinct_ids(parts); }

/**
 * Adds one vertex whose order position is `probe`, label `pred`, and whose edges to the listed
 * params are exactly `partners` (each a sorted set of existing ids of size edge_arity - 1).
 */
inline VertexId realize_one(IndexModel& J, const Rational& probe, const Rational& pred, const std::vector<Edge>& partners,
                            const Tuple& params, std::size_t& budget) {
    if (budget == 0) throw BudgetExhausted("derive_self_collision: budget exhausted");
    QfType target = hypothetical_type(J, probe, pred, partners, params);
    Extension ext = extend_realizing(J, target, params);
    J = std::move(ext.model);
    --budget;
    return ext.tuple.front();
}

inline Rational between(const IndexModel& J, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    return free_point_above(J, lo, hi);
}

/** Partner sets of x among `others` (as in J), with x itself excluded. */
inline std::vector<Edge> edge_partners(const IndexModel& J, VertexId x, const Tuple& others) {
    std::vector<Edge> out;
    if (!J.cls().has_edges()) return out;
    const std::size_t k = J.cls().edge_arity() - 1;
    Tuple pool;
    for (auto o : others)
        if (o != x && std::find(pool.begin(), pool.end(), o) == pool.end()) pool.push_back(o);
    for_each_combination(pool.size(), k, [&](const std::vector<std::size_t>& pick) {
        Edge e{x};
        for (auto p : pick) e.push_back(pool[p]);
        if (J.has_edge(e)) {
            Edge partner;
            for (auto p : pick) partner.push_back(pool[p]);
            std::sort(partner.begin(), partner.end());
            out.push_back(partner);
        }
        return true;
    });
    return out;
}

inline std::vector<Edge> substitute(std::vector<Edge> sets, VertexId from, VertexId to) {
    for (auto& e : sets) {
        std::replace(e.begin(), e.end(), from, to);
        std::sort(e.begin(), e.end());
    }
    return sets;
}

inline void require_derivation_input(const Labeling& lab, const IndexModel& J, const Tuple& s, const QfType& r,
                                     const Formula& formula, const Tuple& v, const Tuple& w, std::size_t i,
                                     std::size_t j) {
    if (lab.kind != LabelingKind::collision) throw std::invalid_argument("derive: labeling must be a collision labeling");
    if (!J.cls().has_predicates()) throw std::invalid_argument("derive: class must carry predicates");
    if (r.length != v.size() || r.length != w.size()) throw std::invalid_argument("derive: tuple length differs from r");
    if (r.param_count != s.size()) throw std::invalid_argument("derive: r is not a type over s");
    for (std::size_t a = 0; a < r.length; ++a)
        for (std::size_t b = a + 1; b < r.length; ++b) {
            if (r.cmp(a, b) >= 0) throw std::invalid_argument("derive: r must be strictly increasing");
            if (r.preds[a] == r.preds[b]) throw std::invalid_argument("derive: r must give each position its own label");
        }
    for (std::size_t p = 0; p < s.size(); ++p) {
        bool inside = false;
        for (std::size_t a = 0; a < r.length; ++a) inside = inside || r.cmp(a, r.length + p) == 0;
        if (!inside) throw std::invalid_argument("derive: s must be a subsequence of the tuple");
    }
    if (!(qf_type_of(J, v, s) == r) || !(qf_type_of(J, w, s) == r))
        throw std::invalid_argument("derive: v and w must realize r");
    auto single = [](const std::vector<std::vector<std::size_t>>& atoms, std::size_t p) {
        return std::any_of(atoms.begin(), atoms.end(), [&](const auto& u) { return u.size() == 1 && u[0] == p; });
    };
    if (!single(formula.positive, i)) throw std::invalid_argument("derive: i is not a positive position");
    if (!single(formula.negative, j)) throw std::invalid_argument("derive: j is not a negative position");
    if (!lab.collides(pair_code(J, v, w, s), i, j))
        throw std::invalid_argument("derive: the labeling has no (i, j) collision at code(v⌢w)");
}

} // namespace detail

constexpr std::size_t kDefaultDeriveBudget = 32;

/**
 * From a positive/negative collision b_{v,i} = b_{w,j} builds z in r(J') with
 * code(v⌢w) = code(v⌢z) = code(z⌢w), so the collision closes up on z itself.
 * Crossings are removed first by re-choosing adjacent pairs, then the non-common part of w is
 * copied to the left of itself, one element at a time.
 */
inline SelfCollision derive_self_collision(const Labeling& lab, const IndexModel& J0, const Tuple& s, const QfType& r,
                                           const Formula& formula, const Tuple& v0, const Tuple& w0, std::size_t i,
                                           std::size_t j, std::size_t budget = kDefaultDeriveBudget) {
    detail::require_derivation_input(lab, J0, s, r, formula, v0, w0, i, j);
    SelfCollision out;
    out.J = J0;
    out.v = v0;
    out.w = w0;
    IndexModel& J = out.J;
    Tuple& v = out.v;
    Tuple& w = out.w;
    const std::size_t start_budget = budget;
    out.initial_crossings = crossings(J, v, w).size();

    while (true) {
        auto cross = crossings(J, v, w);
        if (cross.empty()) break;
        // an adjacent pair: w_b immediately below v_a among the non-common elements
        std::optional<std::pair<std::size_t, std::size_t>> pick;
        std::set<VertexId> vs(v.begin(), v.end()), ws(w.begin(), w.end());
        for (auto [a, b] : cross) {
            bool adjacent = true;
            for (auto x : detail::union_ids({&v, &w})) {
                if (x == v[a] || x == w[b]) continue;
                if (J.coord(w[b]) < J.coord(x) && J.coord(x) < J.coord(v[a])) adjacent = false;
            }
            if (adjacent && (!pick || a < pick->first)) pick = std::make_pair(a, b);
        }
        if (!pick) throw std::logic_error("derive: no adjacent crossing");
        auto [a, b] = *pick;
        const VertexId va = v[a], wb = w[b];
        Tuple context = detail::union_ids({&v, &w, &s});

        Tuple ctx_v;
        for (auto x : context)
            if (x != va) ctx_v.push_back(x);
        ctx_v.push_back(va);
        auto v_partners = detail::edge_partners(J, va, ctx_v);
        Rational probe_v = detail::between(J, J.coord(wb), J.coord(va));
        VertexId va2 = detail::realize_one(J, probe_v, J.pred(va), v_partners, ctx_v, budget);

        Tuple ctx_w;
        for (auto x : context)
            if (x != wb) ctx_w.push_back(x);
        ctx_w.push_back(wb);
        ctx_w.push_back(va2);
        auto w_partners = detail::edge_partners(J, wb, ctx_w);
        Rational probe_w = detail::between(J, J.coord(va2), J.coord(va));
        VertexId wb2 = detail::realize_one(J, probe_w, J.pred(wb), w_partners, ctx_w, budget);

        Tuple v2 = v, w2 = w;
        v2[a] = va2;
        w2[b] = wb2;
        TraceMove density;
        density.kind = "density";
        density.note = "realize copies of v_" + std::to_string(a) + " and w_" + std::to_string(b) +
                       " strictly between w_" + std::to_string(b) + " and v_" + std::to_string(a);
        density.fresh = {va2, wb2};
        out.trace.push_back(density);

        TraceMove move;
        move.kind = "crossing";
        move.note = "swap crossing (v_" + std::to_string(a) + ", w_" + std::to_string(b) + ")";
        move.equalities.push_back({v2, w, v, w});
        move.equalities.push_back({v, w2, v, w});
        move.collisions.push_back({v2, i, w2, j});
        move.fresh = {va2, wb2};
        out.trace.push_back(move);
        v = v2;
        w = w2;
    }

    // copy the non-common part of w to the left, interval by interval
    std::set<VertexId> vs(v.begin(), v.end());
    std::vector<Rational> common;
    for (auto x : w)
        if (vs.count(x)) common.push_back(J.coord(x));
    std::sort(common.begin(), common.end());
    auto interval = [&](VertexId x) { return std::lower_bound(common.begin(), common.end(), J.coord(x)) - common.begin(); };

    Tuple z = w;
    std::vector<bool> fresh_pos(w.size(), false);
    std::vector<VertexId> fresh_ids;
    const std::size_t k = J.cls().has_edges() ? J.cls().edge_arity() - 1 : 0;
    for (std::size_t b = 0; b < w.size(); ++b) {
        if (vs.count(w[b])) continue;
        auto iv = interval(w[b]);
        std::optional<Rational> lo, hi;
        for (std::size_t a = 0; a < v.size(); ++a)
            if (!std::count(w.begin(), w.end(), v[a]) && interval(v[a]) == iv && (!lo || *lo < J.coord(v[a])))
                lo = J.coord(v[a]);
        for (std::size_t c = 0; c < b; ++c)
            if (fresh_pos[c] && interval(w[c]) == iv && (!lo || *lo < J.coord(z[c]))) lo = J.coord(z[c]);
        for (std::size_t c = 0; c < w.size(); ++c)
            if (!vs.count(w[c]) && interval(w[c]) == iv && (!hi || J.coord(w[c]) < *hi)) hi = J.coord(w[c]);
        if (!lo && iv > 0) lo = common[static_cast<std::size_t>(iv) - 1];

        Tuple params = detail::union_ids({&v, &w, &s});
        for (std::size_t c = 0; c < b; ++c)
            if (fresh_pos[c]) params.push_back(z[c]);

        // z maps to w in v⌢z and to v in z⌢w
        auto as_w = [&](VertexId x) {
            for (std::size_t c = 0; c < b; ++c)
                if (fresh_pos[c] && z[c] == x) return w[c];
            return x;
        };
        auto as_v = [&](VertexId x) {
            for (std::size_t c = 0; c < b; ++c)
                if (fresh_pos[c] && z[c] == x) return v[c];
            return x;
        };
        std::set<VertexId> zv(v.begin(), v.end()), zw(w.begin(), w.end());
        zv.insert(s.begin(), s.end());
        zw.insert(s.begin(), s.end());
        for (std::size_t c = 0; c < b; ++c)
            if (fresh_pos[c]) {
                zv.insert(z[c]);
                zw.insert(z[c]);
            }
        std::vector<Edge> partners;
        if (k) {
            for_each_combination(params.size(), k, [&](const std::vector<std::size_t>& idx) {
                Edge rest;
                for (auto p : idx) rest.push_back(params[p]);
                bool in_zv = std::all_of(rest.begin(), rest.end(), [&](VertexId x) { return zv.count(x) > 0; });
                bool in_zw = std::all_of(rest.begin(), rest.end(), [&](VertexId x) { return zw.count(x) > 0; });
                bool edge = false;
                if (in_zv) {
                    Edge image{w[b]};
                    for (auto x : rest) image.push_back(as_w(x));
                    edge = J.has_edge(image);
                } else if (in_zw) {
                    Edge image{v[b]};
                    for (auto x : rest) image.push_back(as_v(x));
                    edge = J.has_edge(image);
                }
                if (edge) {
                    std::sort(rest.begin(), rest.end());
                    partners.push_back(rest);
                }
                return true;
            });
        }
        Rational probe = detail::between(J, lo, hi);
        VertexId zb = detail::realize_one(J, probe, J.pred(w[b]), partners, params, budget);
        z[b] = zb;
        fresh_pos[b] = true;
        fresh_ids.push_back(zb);
    }
    out.z = z;

    TraceMove copy;
    copy.kind = "copy-left";
    copy.note = "copy the non-common elements of w below themselves, above the elements of v in each interval";
    copy.equalities.push_back({v, z, v, w});
    copy.equalities.push_back({z, w, v, w});
    copy.fresh = fresh_ids;
    out.trace.push_back(copy);

    TraceMove close;
    close.kind = "close";
    close.note = "transitivity (z,i) ~ (w,j) ~ (v,i) ~ (z,j)";
    close.collisions.push_back({z, i, w, j});
    close.collisions.push_back({w, j, v, i});
    close.collisions.push_back({v, i, z, j});
    close.collisions.push_back({z, i, z, j});
    out.trace.push_back(close);
    out.fresh_used = start_budget - budget;
    return out;
}

struct TraceCheck {
    bool ok = true;
    std::string failure;
};

/** Recomputes every recorded type equality in the final model and re-derives the closing chain. */
inline TraceCheck verify_trace(const SelfCollision& d, const Tuple& s, const QfType& r) {
    auto fail = [](std::string why) { return TraceCheck{false, std::move(why)}; };
    if (!validate_structure(d.J).ok()) return fail("final model does not validate");
    for (const auto& move : d.trace)
        for (const auto& eq : move.equalities)
            if (pair_code(d.J, eq.a1, eq.b1, s) != pair_code(d.J, eq.a2, eq.b2, s))
                return fail(move.kind + ": recorded type equality does not hold");
    if (!(qf_type_of(d.J, d.z, s) == r)) return fail("z does not realize r");
    if (!(qf_type_of(d.J, d.v, s) == r) || !(qf_type_of(d.J, d.w, s) == r)) return fail("v or w does not realize r");
    if (!crossings(d.J, d.v, d.w).empty()) return fail("crossings remain");
    const std::string vw = pair_code(d.J, d.v, d.w, s);
    if (pair_code(d.J, d.v, d.z, s) != vw || pair_code(d.J, d.z, d.w, s) != vw)
        return fail("code(v⌢z) or code(z⌢w) differs from code(v⌢w)");
    if (pair_code(d.J, d.z, d.z, s) != pair_code(d.J, d.v, d.v, s)) return fail("code(z⌢z) differs from code(v⌢v)");
    return {};
}

} // namespace shearlab
