#pragma once

#include "combinatorics.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shearlab {

using VertexId = std::uint32_t;
using Edge = std::vector<VertexId>;
using Tuple = std::vector<VertexId>;

enum class ClassKind { linear_orders, linear_orders_with_predicates, hypergraph };

struct ClassDescriptor {
    ClassKind kind = ClassKind::linear_orders;
    int n = 0;
    int k = 0;

    static ClassDescriptor linear_orders() { return {}; }
    static ClassDescriptor with_predicates() { return {ClassKind::linear_orders_with_predicates, 0, 0}; }
    static ClassDescriptor hypergraph(int n, int k) {
        if (!(n > k && k >= 2))
            throw std::invalid_argument("hypergraph class requires n > k >= 2 (got n=" + std::to_string(n) +
                                        ", k=" + std::to_string(k) + ")");
        return {ClassKind::hypergraph, n, k};
    }

    bool has_predicates() const { return kind != ClassKind::linear_orders; }
    bool has_edges() const { return kind == ClassKind::hypergraph; }
    std::size_t edge_arity() const { return has_edges() ? static_cast<std::size_t>(k + 1) : 0; }
    std::size_t clique_bound() const { return has_edges() ? static_cast<std::size_t>(n + 1) : 0; }

    bool operator==(const ClassDescriptor&) const = default;
};

inline std::string kind_name(ClassKind kind) {
    switch (kind) {
        case ClassKind::linear_orders: return "linear-orders";
        case ClassKind::linear_orders_with_predicates: return "linear-orders-with-predicates";
        case ClassKind::hypergraph: return "hypergraph";
    }
    return "?";
}

struct Vertex {
    VertexId id = 0;
    Rational coord;
    Rational pred;

    bool operator==(const Vertex&) const = default;
};

/**
 * A finite ordered structure of one of the index classes. Vertices are kept sorted by id and
 * separately by coordinate; edges are sorted id vectors.
 */
class IndexModel {
public:
    explicit IndexModel(ClassDescriptor cls = ClassDescriptor::linear_orders()) : cls_(cls) {}

    const ClassDescriptor& cls() const { return cls_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<VertexId>& by_coord() const { return by_coord_; }
    const std::set<Edge>& edges() const { return edges_; }
    std::size_t size() const { return vertices_.size(); }

    bool contains(VertexId id) const { return id < slot_.size() && slot_[id] >= 0; }

    const Vertex& vertex(VertexId id) const {
        if (!contains(id)) throw std::out_of_range("unknown vertex id " + std::to_string(id));
        return vertices_[static_cast<std::size_t>(slot_[id])];
    }
    const Rational& coord(VertexId id) const { return vertex(id).coord; }
    const Rational& pred(VertexId id) const { return vertex(id).pred; }

    bool has_edge(Edge e) const {
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end()) return false;
        return edges_.count(e) > 0;
    }
    bool has_sorted_edge(const Edge& e) const { return edges_.count(e) > 0; }

    VertexId next_free_id(VertexId from = 0) const {
        VertexId id = from;
        while (contains(id)) ++id;
        return id;
    }

    std::optional<VertexId> vertex_at(const Rational& c) const {
        auto it = std::lower_bound(by_coord_.begin(), by_coord_.end(), c,
                                   [&](VertexId v, const Rational& x) { return coord(v) < x; });
        if (it != by_coord_.end() && coord(*it) == c) return *it;
        return std::nullopt;
    }

    /** Least coordinate strictly above c (or the least coordinate overall when c is absent). */
    std::optional<Rational> next_coord_above(const std::optional<Rational>& c) const {
        if (by_coord_.empty()) return std::nullopt;
        if (!c) return coord(by_coord_.front());
        auto it = std::upper_bound(by_coord_.begin(), by_coord_.end(), *c,
                                   [&](const Rational& x, VertexId v) { return x < coord(v); });
        if (it == by_coord_.end()) return std::nullopt;
        return coord(*it);
    }

    void add_vertex(const Vertex& v) {
        if (contains(v.id)) throw std::invalid_argument("duplicate vertex id " + std::to_string(v.id));
        if (slot_.size() <= v.id) slot_.resize(static_cast<std::size_t>(v.id) + 1, -1);
        auto pos = std::lower_bound(vertices_.begin(), vertices_.end(), v.id,
                                    [](const Vertex& a, VertexId id) { return a.id < id; });
        vertices_.insert(pos, v);
        for (std::size_t i = 0; i < vertices_.size(); ++i) slot_[vertices_[i].id] = static_cast<int>(i);
        auto cpos = std::upper_bound(by_coord_.begin(), by_coord_.end(), v.coord,
                                     [&](const Rational& x, VertexId w) { return x < coord(w); });
        by_coord_.insert(cpos, v.id);
    }

    void add_vertex(VertexId id, Rational coord, Rational pred = Rational(0)) {
        add_vertex(Vertex{id, coord, pred});
    }

    void add_edge(Edge e) {
        for (auto v : e)
            if (!contains(v)) throw std::out_of_range("edge mentions unknown vertex id " + std::to_string(v));
        std::sort(e.begin(), e.end());
        edges_.insert(std::move(e));
    }

    bool operator==(const IndexModel& o) const {
        return cls_ == o.cls_ && vertices_ == o.vertices_ && edges_ == o.edges_;
    }

private:
    ClassDescriptor cls_;
    std::vector<Vertex> vertices_;
    std::vector<VertexId> by_coord_;
    std::vector<int> slot_;
    std::set<Edge> edges_;
};

struct Violation {
    std::string kind;
    std::vector<VertexId> vertices;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

inline std::string join_ids(const std::vector<VertexId>& ids) {
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
    return out + "}";
}

inline ValidationReport validate_structure(const IndexModel& m) {
    ValidationReport report;
    const auto& order = m.by_coord();
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (m.coord(order[i - 1]) == m.coord(order[i])) {
            std::vector<VertexId> pair{std::min(order[i - 1], order[i]), std::max(order[i - 1], order[i])};
            report.violations.push_back({"duplicate-coord", pair, "vertices " + join_ids(pair) + " share a coordinate"});
        }
    }
    const std::size_t arity = m.cls().edge_arity();
    for (const auto& e : m.edges()) {
        if (!m.cls().has_edges()) {
            report.violations.push_back({"edge-not-allowed", e, "class has no edges but " + join_ids(e) + " is one"});
            continue;
        }
        bool distinct = std::adjacent_find(e.begin(), e.end()) == e.end();
        if (e.size() != arity || !distinct)
            report.violations.push_back({"edge-arity", e,
                                         "edge " + join_ids(e) + " does not have " + std::to_string(arity) +
                                             " distinct vertices"});
    }
    if (m.cls().has_edges() && !m.edges().empty()) {
        std::set<VertexId> incident;
        for (const auto& e : m.edges()) incident.insert(e.begin(), e.end());
        std::vector<VertexId> cand(incident.begin(), incident.end());
        Edge probe;
        for_each_clique(cand.size(), arity, m.cls().clique_bound(),
                        [&](const std::vector<std::size_t>& idx) {
                            probe.clear();
                            for (auto i : idx) probe.push_back(cand[i]);
                            return m.has_sorted_edge(probe);
                        },
                        [&](const std::vector<std::size_t>& idx) {
                            std::vector<VertexId> clique;
                            for (auto i : idx) clique.push_back(cand[i]);
                            report.violations.push_back({"forbidden-clique", clique,
                                                         "forbidden " + std::to_string(clique.size()) + "-clique " +
                                                             join_ids(clique)});
                            return true;
                        });
    }
    return report;
}

/**
 * Quantifier-free type of a tuple over a parameter sequence. Positions 0..length-1 are the
 * tuple, length..width-1 the parameters. `order` holds cmp(coord_i, coord_j) for i < j in
 * row-major upper-triangular layout.
 */
struct QfType {
    std::uint32_t length = 0;
    std::uint32_t param_count = 0;
    bool has_preds = false;
    std::uint32_t edge_arity = 0;
    std::vector<std::int8_t> order;
    std::vector<Rational> preds;
    std::vector<std::vector<std::uint32_t>> edges;

    std::size_t width() const { return static_cast<std::size_t>(length) + param_count; }

    static std::size_t slot(std::size_t n, std::size_t i, std::size_t j) {
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    }

    int cmp(std::size_t i, std::size_t j) const {
        if (i == j) return 0;
        if (i < j) return order[slot(width(), i, j)];
        return -order[slot(width(), j, i)];
    }

    bool has_edge_positions(const std::vector<std::uint32_t>& sorted_positions) const {
        return std::binary_search(edges.begin(), edges.end(), sorted_positions);
    }

    std::string code() const {
        std::string out;
        auto put32 = [&](std::uint32_t x) {
            for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((x >> s) & 0xff));
        };
        out.push_back('Q');
        put32(length);
        put32(param_count);
        out.push_back(static_cast<char>(has_preds));
        out.push_back(static_cast<char>(edge_arity));
        for (auto c : order) out.push_back(static_cast<char>(c + 1));
        if (has_preds)
            for (const auto& p : preds) {
                out += to_string(p);
                out.push_back(';');
            }
        put32(static_cast<std::uint32_t>(edges.size()));
        for (const auto& e : edges)
            for (auto p : e) put32(p);
        return out;
    }

    std::string hex() const { return to_hex(code()); }

    static std::string to_hex(const std::string& bytes) {
        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(bytes.size() * 2);
        for (unsigned char c : bytes) {
            out.push_back(digits[c >> 4]);
            out.push_back(digits[c & 15]);
        }
        return out;
    }

    static std::string from_hex(const std::string& hex) {
        if (hex.size() % 2) throw std::invalid_argument("odd-length hex code");
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
        };
        std::string out;
        for (std::size_t i = 0; i < hex.size(); i += 2)
            out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
        return out;
    }

    bool operator==(const QfType&) const = default;
};

inline QfType qf_type_of(const IndexModel& m, const Tuple& tuple, const Tuple& params) {
    Tuple all = tuple;
    all.insert(all.end(), params.begin(), params.end());
    for (auto v : all) m.vertex(v);
    QfType r;
    r.length = static_cast<std::uint32_t>(tuple.size());
    r.param_count = static_cast<std::uint32_t>(params.size());
    r.has_preds = m.cls().has_predicates();
    r.edge_arity = static_cast<std::uint32_t>(m.cls().edge_arity());
    const std::size_t n = all.size();
    r.order.reserve(n * (n - (n ? 1 : 0)) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            r.order.push_back(static_cast<std::int8_t>(compare(m.coord(all[i]), m.coord(all[j]))));
    if (r.has_preds)
        for (auto v : all) r.preds.push_back(m.pred(v));
    if (r.edge_arity > 0 && n >= r.edge_arity) {
        Edge probe;
        for_each_combination(n, r.edge_arity, [&](const std::vector<std::size_t>& pick) {
            probe.clear();
            for (auto p : pick) probe.push_back(all[p]);
            std::sort(probe.begin(), probe.end());
            if (std::adjacent_find(probe.begin(), probe.end()) == probe.end() && m.has_sorted_edge(probe))
                r.edges.emplace_back(pick.begin(), pick.end());
            return true;
        });
    }
    return r;
}

namespace detail {

inline void require_format(const IndexModel& m, const QfType& r, const Tuple& params) {
    if (r.param_count != params.size())
        throw std::invalid_argument("type expects " + std::to_string(r.param_count) + " parameters, got " +
                                    std::to_string(params.size()));
    const std::size_t n = r.width();
    if (r.order.size() != n * (n ? n - 1 : 0) / 2) throw std::invalid_argument("malformed target: order pattern size");
    if (r.has_preds != m.cls().has_predicates() || r.edge_arity != m.cls().edge_arity())
        throw std::invalid_argument("malformed target: type format does not match the model's class");
    if (r.has_preds && r.preds.size() != n) throw std::invalid_argument("malformed target: predicate pattern size");
    for (const auto& e : r.edges) {
        if (e.size() != r.edge_arity) throw std::invalid_argument("malformed target: edge of wrong arity");
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] >= n) throw std::invalid_argument("malformed target: edge position out of range");
            if (i && e[i - 1] >= e[i]) throw std::invalid_argument("malformed target: edge positions not sorted");
        }
    }
    if (!std::is_sorted(r.edges.begin(), r.edges.end()))
        throw std::invalid_argument("malformed target: edge list not sorted");
    for (auto p : params) m.vertex(p);
}

// Does the parameter part of r agree with the model?
inline bool params_agree(const IndexModel& m, const QfType& r, const Tuple& params) {
    const std::size_t L = r.length, P = params.size();
    for (std::size_t i = 0; i < P; ++i) {
        if (r.has_preds && r.preds[L + i] != m.pred(params[i])) return false;
        for (std::size_t j = i + 1; j < P; ++j)
            if (r.cmp(L + i, L + j) != compare(m.coord(params[i]), m.coord(params[j]))) return false;
    }
    if (r.edge_arity && P >= r.edge_arity) {
        bool ok = true;
        Edge probe;
        std::vector<std::uint32_t> pos;
        for_each_combination(P, r.edge_arity, [&](const std::vector<std::size_t>& pick) {
            probe.clear();
            pos.clear();
            for (auto p : pick) {
                probe.push_back(params[p]);
                pos.push_back(static_cast<std::uint32_t>(L + p));
            }
            std::sort(probe.begin(), probe.end());
            bool distinct = std::adjacent_find(probe.begin(), probe.end()) == probe.end();
            bool edge = distinct && m.has_sorted_edge(probe);
            if (edge != r.has_edge_positions(pos)) ok = false;
            return ok;
        });
        if (!ok) return false;
    }
    return true;
}

} // namespace detail

/** All tuples realizing r over params, in lexicographic order of coordinates. */
inline std::vector<Tuple> enumerate_realizations(const IndexModel& m, const QfType& r, const Tuple& params) {
    detail::require_format(m, r, params);
    std::vector<Tuple> out;
    if (!detail::params_agree(m, r, params)) return out;
    const std::size_t L = r.length, P = params.size(), a = r.edge_arity;
    Tuple cur(L);
    std::vector<VertexId> slots(L + P);
    for (std::size_t j = 0; j < P; ++j) slots[L + j] = params[j];
    Edge probe;
    std::vector<std::uint32_t> pos;

    auto fits = [&](std::size_t p, VertexId v) {
        const Rational& c = m.coord(v);
        if (r.has_preds && m.pred(v) != r.preds[p]) return false;
        for (std::size_t q = 0; q < p; ++q)
            if (r.cmp(q, p) != compare(m.coord(cur[q]), c)) return false;
        for (std::size_t j = 0; j < P; ++j)
            if (r.cmp(p, L + j) != compare(c, m.coord(params[j]))) return false;
        if (!a) return true;
        // candidate earlier positions: tuple 0..p-1 and all params
        std::vector<std::size_t> earlier;
        for (std::size_t q = 0; q < p; ++q) earlier.push_back(q);
        for (std::size_t j = 0; j < P; ++j) earlier.push_back(L + j);
        slots[p] = v;
        bool ok = true;
        for_each_combination(earlier.size(), a - 1, [&](const std::vector<std::size_t>& pick) {
            probe.clear();
            pos.clear();
            for (auto i : pick) {
                probe.push_back(slots[earlier[i]]);
                pos.push_back(static_cast<std::uint32_t>(earlier[i]));
            }
            probe.push_back(v);
            pos.push_back(static_cast<std::uint32_t>(p));
            std::sort(pos.begin(), pos.end());
            std::sort(probe.begin(), probe.end());
            bool distinct = std::adjacent_find(probe.begin(), probe.end()) == probe.end();
            bool edge = distinct && m.has_sorted_edge(probe);
            if (edge != r.has_edge_positions(pos)) ok = false;
            return ok;
        });
        return ok;
    };

    auto search = [&](auto&& self, std::size_t p) -> void {
        if (p == L) {
            out.push_back(cur);
            return;
        }
        for (auto v : m.by_coord()) {
            if (!fits(p, v)) continue;
            cur[p] = v;
            slots[p] = v;
            self(self, p + 1);
        }
    };
    search(search, 0);
    return out;
}

/**
 * A coordinate strictly between lo and hi (either may be absent) that sits just above lo: the
 * midpoint of lo and the next existing coordinate, so it never collides with a vertex.
 */
inline Rational free_point_above(const IndexModel& m, const std::optional<Rational>& lo,
                                 const std::optional<Rational>& hi) {
    std::optional<Rational> cap = m.next_coord_above(lo);
    if (hi && (!cap || *hi < *cap)) cap = hi;
    if (!lo && !cap) return Rational(0);
    if (!lo) return *cap - 1;
    if (!cap) return *lo + 1;
    return midpoint(*lo, *cap);
}

/** Outcome of analysing a target type for realization by fresh vertices. */
struct RealizationPlan {
    bool ok = false;
    std::string reason;
    std::vector<std::size_t> class_of;                  // position -> class
    std::vector<std::optional<std::size_t>> class_param; // class -> parameter index, if any
    std::vector<std::size_t> class_rank;                // class -> order rank
    std::vector<std::size_t> class_rep;                 // class -> least position
    std::set<std::vector<std::size_t>> class_edges;     // edges as sorted class sets (touching a fresh class)
};

inline RealizationPlan plan_realization(const IndexModel& m, const QfType& r, const Tuple& params) {
    detail::require_format(m, r, params);
    RealizationPlan plan;
    auto fail = [&](std::string why) {
        plan.ok = false;
        plan.reason = std::move(why);
        return plan;
    };
    const std::size_t n = r.width(), L = r.length;

    std::vector<std::size_t> rank(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (r.cmp(j, i) < 0) ++rank[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            int expect = rank[i] < rank[j] ? -1 : (rank[i] > rank[j] ? 1 : 0);
            if (r.cmp(i, j) != expect) return fail("order pattern is not a weak order");
        }
    if (!detail::params_agree(m, r, params)) return fail("parameter part disagrees with the model");

    std::map<std::size_t, std::size_t> class_by_rank;
    plan.class_of.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = class_by_rank.find(rank[i]);
        if (it == class_by_rank.end()) {
            it = class_by_rank.emplace(rank[i], plan.class_rep.size()).first;
            plan.class_rep.push_back(i);
            plan.class_rank.push_back(rank[i]);
            plan.class_param.emplace_back();
        }
        plan.class_of[i] = it->second;
        if (i >= L && !plan.class_param[it->second]) plan.class_param[it->second] = i - L;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = plan.class_of[i];
        if (r.has_preds && r.preds[i] != r.preds[plan.class_rep[c]]) return fail("equal positions carry different predicates");
        if (r.has_preds && plan.class_param[c] && r.preds[i] != m.pred(params[*plan.class_param[c]]))
            return fail("position equal to a parameter carries a different predicate");
    }

    const std::size_t a = r.edge_arity;
    if (a) {
        for (const auto& e : r.edges) {
            std::set<std::size_t> cs;
            for (auto p : e) cs.insert(plan.class_of[p]);
            if (cs.size() != e.size()) return fail("edge on repeated vertex");
        }
        std::map<std::vector<std::size_t>, bool> seen;
        bool consistent = true;
        for_each_combination(n, a, [&](const std::vector<std::size_t>& pick) {
            std::vector<std::size_t> cs;
            for (auto p : pick) cs.push_back(plan.class_of[p]);
            std::sort(cs.begin(), cs.end());
            if (std::adjacent_find(cs.begin(), cs.end()) != cs.end()) return true;
            std::vector<std::uint32_t> pos(pick.begin(), pick.end());
            bool edge = r.has_edge_positions(pos);
            auto [it, fresh] = seen.emplace(cs, edge);
            if (!fresh && it->second != edge) consistent = false;
            return consistent;
        });
        if (!consistent) return fail("edge pattern not invariant under position equalities");
        for (const auto& [cs, edge] : seen) {
            if (!edge) continue;
            bool touches_fresh = std::any_of(cs.begin(), cs.end(), [&](std::size_t c) { return !plan.class_param[c]; });
            if (touches_fresh) plan.class_edges.insert(cs);
        }
        const std::size_t classes = plan.class_rep.size();
        auto has = [&](const std::vector<std::size_t>& cs) {
            if (plan.class_edges.count(cs)) return true;
            if (std::any_of(cs.begin(), cs.end(), [&](std::size_t c) { return !plan.class_param[c]; })) return false;
            Edge probe;
            for (auto c : cs) probe.push_back(params[*plan.class_param[c]]);
            return m.has_edge(probe);
        };
        std::optional<std::vector<std::size_t>> clique;
        for_each_clique(classes, a, m.cls().clique_bound(), has, [&](const std::vector<std::size_t>& cl) {
            if (std::any_of(cl.begin(), cl.end(), [&](std::size_t c) { return !plan.class_param[c]; })) {
                clique = cl;
                return false;
            }
            return true;
        });
        if (clique) return fail("fresh vertices would complete a forbidden clique");
    }
    plan.ok = true;
    return plan;
}

inline bool realizable(const IndexModel& m, const QfType& target, const Tuple& params) {
    return plan_realization(m, target, params).ok;
}

class NotRealizable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Extension {
    IndexModel model;
    Tuple tuple;
    std::vector<VertexId> fresh;
};

/**
 * Extends m by fresh vertices realizing target over params. Coordinates are placed just above
 * the nearest required lower neighbour (midpoint to the next existing coordinate); ids are the
 * least unused.
 */
inline Extension extend_realizing(const IndexModel& m, const QfType& target, const Tuple& params) {
    RealizationPlan plan = plan_realization(m, target, params);
    if (!plan.ok) throw NotRealizable("not realizable: " + plan.reason);
    const std::size_t classes = plan.class_rep.size();
    std::vector<std::size_t> by_rank(classes);
    for (std::size_t c = 0; c < classes; ++c) by_rank[c] = c;
    std::sort(by_rank.begin(), by_rank.end(), [&](auto x, auto y) { return plan.class_rank[x] < plan.class_rank[y]; });

    Extension ext{m, {}, {}};
    std::vector<VertexId> vertex_of(classes);
    std::vector<bool> placed(classes, false);
    for (std::size_t c = 0; c < classes; ++c)
        if (plan.class_param[c]) {
            vertex_of[c] = params[*plan.class_param[c]];
            placed[c] = true;
        }
    VertexId next_id = 0;
    for (std::size_t idx = 0; idx < classes; ++idx) {
        std::size_t c = by_rank[idx];
        if (placed[c]) continue;
        std::optional<Rational> lo, hi;
        for (std::size_t d = 0; d < classes; ++d) {
            if (!placed[d]) continue;
            const Rational& x = ext.model.coord(vertex_of[d]);
            if (plan.class_rank[d] < plan.class_rank[c] && (!lo || *lo < x)) lo = x;
            if (plan.class_rank[d] > plan.class_rank[c] && (!hi || x < *hi)) hi = x;
        }
        Rational point = free_point_above(ext.model, lo, hi);
        next_id = ext.model.next_free_id(next_id);
        Rational label = target.has_preds ? target.preds[plan.class_rep[c]] : Rational(0);
        ext.model.add_vertex(next_id, point, label);
        vertex_of[c] = next_id;
        placed[c] = true;
        ext.fresh.push_back(next_id);
    }
    for (const auto& cs : plan.class_edges) {
        Edge e;
        for (auto c : cs) e.push_back(vertex_of[c]);
        ext.model.add_edge(e);
    }
    for (std::size_t p = 0; p < target.length; ++p) ext.tuple.push_back(vertex_of[plan.class_of[p]]);
    return ext;
}

/** Least rational label (in the fixed enumeration) not used by any vertex of m. */
inline Rational fresh_predicate(const IndexModel& m) {
    std::set<Rational> used;
    for (const auto& v : m.vertices()) used.insert(v.pred);
    for (std::uint64_t i = 0;; ++i) {
        Rational q = nth_rational(i);
        if (!used.count(q)) return q;
    }
}

/** A base context cut: vertices at the given rationals, each carrying its own coordinate as label. */
inline IndexModel singleton_predicate_cut(const ClassDescriptor& cls, const std::vector<Rational>& points) {
    IndexModel m(cls);
    VertexId id = 0;
    for (const auto& q : points) m.add_vertex(id++, q, cls.has_predicates() ? q : Rational(0));
    return m;
}

} // namespace shearlab
