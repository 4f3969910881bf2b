#pragma once

#include "oracle.hpp"
#include "structures.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shearlab {

/**
 * phi(x, b) as literal template: each positive/negative entry lists the positions of b that
 * fill the atom next to x (one position for graphs, k positions for (k+1)-hypergraphs).
 */
struct Formula {
    std::vector<std::vector<std::size_t>> positive;
    std::vector<std::vector<std::size_t>> negative;
    std::vector<std::size_t> distinct;

    bool operator==(const Formula&) const = default;
};

enum class LabelingKind { projection, collision };
enum class EdgeRule { skeleton, matching_complement };

struct Labeling {
    LabelingKind kind = LabelingKind::projection;
    std::size_t width = 0;
    std::vector<std::size_t> coord_map;
    std::vector<std::size_t> rows;
    EdgeRule edge_rule = EdgeRule::skeleton;
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>> collisions;

    static Labeling projection(std::vector<std::size_t> coord_map, std::vector<std::size_t> rows = {},
                               EdgeRule rule = EdgeRule::skeleton) {
        Labeling lab;
        lab.kind = LabelingKind::projection;
        lab.width = coord_map.size();
        lab.coord_map = std::move(coord_map);
        lab.rows = std::move(rows);
        lab.edge_rule = rule;
        return lab;
    }
    static Labeling collision(std::size_t width) {
        Labeling lab;
        lab.kind = LabelingKind::collision;
        lab.width = width;
        return lab;
    }

    bool collides(const std::string& pair_code, std::size_t i, std::size_t j) const {
        auto it = collisions.find({i, j});
        return it != collisions.end() && it->second.count(pair_code) > 0;
    }
    void add(std::size_t i, std::size_t j, const std::string& pair_code) { collisions[{i, j}].insert(pair_code); }

    std::size_t row(std::size_t p) const { return rows.empty() ? 0 : rows.at(p); }

    bool operator==(const Labeling&) const = default;
};

struct ShearingInstance {
    IndexModel base;
    Tuple s;
    Tuple t;
    QfType r;
    TheoryDescriptor theory;
    Labeling labeling;
    Formula formula;

    const ClassDescriptor& cls() const { return base.cls(); }
};

inline ShearingInstance make_instance(IndexModel base, Tuple s, Tuple t, TheoryDescriptor theory, Labeling labeling,
                                      Formula formula) {
    ShearingInstance inst{std::move(base), std::move(s), std::move(t), {}, theory, std::move(labeling), std::move(formula)};
    inst.r = qf_type_of(inst.base, inst.t, inst.s);
    return inst;
}

inline std::string pair_code(const IndexModel& J, const Tuple& a, const Tuple& b, const Tuple& s) {
    Tuple ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return qf_type_of(J, ab, s).code();
}

/** Realizations of r over s together with all pairwise concatenation codes. */
struct PairCodes {
    std::vector<Tuple> Y;
    std::vector<std::vector<std::string>> code;

    std::optional<std::size_t> index_of(const Tuple& t) const {
        auto it = std::find(Y.begin(), Y.end(), t);
        if (it == Y.end()) return std::nullopt;
        return static_cast<std::size_t>(it - Y.begin());
    }
};

inline PairCodes compute_pair_codes(const IndexModel& J, const QfType& r, const Tuple& s) {
    PairCodes pc;
    pc.Y = enumerate_realizations(J, r, s);
    pc.code.assign(pc.Y.size(), std::vector<std::string>(pc.Y.size()));
    for (std::size_t a = 0; a < pc.Y.size(); ++a)
        for (std::size_t b = 0; b < pc.Y.size(); ++b) pc.code[a][b] = pair_code(J, pc.Y[a], pc.Y[b], s);
    return pc;
}

struct CoherenceReport {
    bool ok = true;
    std::string violation; // reflexivity | symmetry | transitivity | format
    std::vector<Tuple> tuples;
    std::vector<std::size_t> positions;
};

inline CoherenceReport check_labeling_coherence(const Labeling& lab, const PairCodes& pc) {
    CoherenceReport rep;
    for (const auto& [key, codes] : lab.collisions)
        if (key.first >= lab.width || key.second >= lab.width)
            return {false, "format", {}, {key.first, key.second}};
    if (lab.kind == LabelingKind::projection) return rep;
    const std::size_t n = pc.Y.size(), w = lab.width;
    // coll[((a*n+b)*w+i)*w+j]
    std::vector<char> coll(n * n * w * w, 0);
    auto at = [&](std::size_t a, std::size_t b, std::size_t i, std::size_t j) -> char& {
        return coll[((a * n + b) * w + i) * w + j];
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < w; ++i)
                for (std::size_t j = 0; j < w; ++j) at(a, b, i, j) = lab.collides(pc.code[a][b], i, j);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < w; ++i)
            if (!at(a, a, i, i)) return {false, "reflexivity", {pc.Y[a]}, {i}};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < w; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    if (at(a, b, i, j) != at(b, a, j, i)) return {false, "symmetry", {pc.Y[a], pc.Y[b]}, {i, j}};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < w; ++i)
                for (std::size_t j = 0; j < w; ++j) {
                    if (!at(a, b, i, j)) continue;
                    for (std::size_t c = 0; c < n; ++c)
                        for (std::size_t l = 0; l < w; ++l)
                            if (at(b, c, j, l) && !at(a, c, i, l))
                                return {false, "transitivity", {pc.Y[a], pc.Y[b], pc.Y[c]}, {i, j, l}};
                }
    return rep;
}

inline CoherenceReport check_labeling_coherence(const Labeling& lab, const IndexModel& J, const Tuple& s,
                                                const QfType& r) {
    if (lab.kind == LabelingKind::projection) {
        CoherenceReport rep;
        return rep;
    }
    return check_labeling_coherence(lab, compute_pair_codes(J, r, s));
}

class IncoherentLabeling : public std::runtime_error {
public:
    CoherenceReport report;
    explicit IncoherentLabeling(CoherenceReport rep)
        : std::runtime_error("incoherent labeling: " + rep.violation + " violation"), report(std::move(rep)) {}
};

struct Family {
    std::vector<Tuple> realizations;
    std::vector<std::vector<std::uint32_t>> params; // realization -> position -> parameter id
    std::vector<Diagram> diagrams;
};

namespace detail {

inline void check_instance_shape(const ShearingInstance& inst) {
    const auto& lab = inst.labeling;
    if (lab.kind == LabelingKind::projection) {
        if (lab.coord_map.size() != lab.width) throw std::invalid_argument("labeling: coord_map length differs from width");
        for (auto c : lab.coord_map)
            if (c >= inst.t.size()) throw std::invalid_argument("labeling: coord_map entry out of range");
        if (!lab.rows.empty() && lab.rows.size() != lab.width)
            throw std::invalid_argument("labeling: rows length differs from width");
    } else if (inst.theory.kind != TheoryKind::random_graph) {
        throw std::invalid_argument("collision labelings are only supported for the random graph");
    }
    const std::size_t atom = inst.theory.edge_arity() - 1;
    std::set<std::vector<std::size_t>> pos;
    for (const auto& u : inst.formula.positive) {
        if (u.size() != atom) throw std::invalid_argument("formula: positive atom has wrong number of positions");
        for (auto p : u)
            if (p >= lab.width) throw std::invalid_argument("formula: position out of range");
        auto key = u;
        std::sort(key.begin(), key.end());
        pos.insert(key);
    }
    for (const auto& u : inst.formula.negative) {
        if (u.size() != atom) throw std::invalid_argument("formula: negative atom has wrong number of positions");
        for (auto p : u)
            if (p >= lab.width) throw std::invalid_argument("formula: position out of range");
        auto key = u;
        std::sort(key.begin(), key.end());
        if (pos.count(key)) throw std::invalid_argument("formula: A and B overlap");
    }
    for (auto p : inst.formula.distinct)
        if (p >= lab.width) throw std::invalid_argument("formula: position out of range");
}

inline void require_extension(const IndexModel& base, const IndexModel& J) {
    if (!(base.cls() == J.cls())) throw std::invalid_argument("working model has a different class than the base");
    for (const auto& v : base.vertices()) {
        if (!J.contains(v.id) || !(J.vertex(v.id) == v))
            throw std::invalid_argument("working model does not extend the base at vertex " + std::to_string(v.id));
    }
    for (const auto& e : base.edges())
        if (!J.has_sorted_edge(e)) throw std::invalid_argument("working model drops a base edge");
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

} // namespace detail

inline Diagram formula_diagram(const TheoryDescriptor& theory, const Formula& f, const std::vector<std::uint32_t>& b,
                               const std::vector<std::uint32_t>& pool, const std::set<std::vector<std::uint32_t>>& pool_edges) {
    Diagram d;
    d.theory = theory;
    d.params = pool;
    d.param_edges = pool_edges;
    d.free_vars = {0};
    auto atom = [&](const std::vector<std::size_t>& u, bool positive) {
        EdgeLiteral lit;
        lit.positive = positive;
        lit.args.push_back(Term::var(0));
        for (auto p : u) lit.args.push_back(Term::param(b.at(p)));
        d.literals.emplace_back(lit);
    };
    for (const auto& u : f.positive) atom(u, true);
    for (const auto& u : f.negative) atom(u, false);
    for (auto p : f.distinct) d.literals.emplace_back(NeqLiteral{Term::var(0), Term::param(b.at(p))});
    return d;
}

/** One diagram per realization of r over s in J, over a single shared parameter pool. */
inline Family instantiate_family(const ShearingInstance& inst, const IndexModel& J) {
    detail::check_instance_shape(inst);
    detail::require_extension(inst.base, J);
    Family fam;
    const auto& lab = inst.labeling;
    const std::size_t w = lab.width;
    std::set<std::vector<std::uint32_t>> pool_edges;
    std::vector<std::uint32_t> pool;

    if (lab.kind == LabelingKind::projection) {
        fam.realizations = enumerate_realizations(J, inst.r, inst.s);
        std::size_t row_count = 1;
        for (std::size_t p = 0; p < w; ++p) row_count = std::max(row_count, lab.row(p) + 1);
        std::map<std::uint32_t, std::pair<VertexId, std::size_t>> origin;
        for (const auto& t : fam.realizations) {
            std::vector<std::uint32_t> b;
            for (std::size_t p = 0; p < w; ++p) {
                VertexId v = t[lab.coord_map[p]];
                auto id = static_cast<std::uint32_t>(v * row_count + lab.row(p));
                b.push_back(id);
                origin[id] = {v, lab.row(p)};
            }
            fam.params.push_back(std::move(b));
        }
        for (const auto& [id, o] : origin) pool.push_back(id);
        const std::size_t arity = inst.theory.edge_arity();
        if (lab.edge_rule == EdgeRule::skeleton && row_count == 1 && J.cls().edge_arity() == arity) {
            for (const auto& e : J.edges())
                if (std::all_of(e.begin(), e.end(), [&](VertexId v) { return origin.count(v) > 0; }))
                    pool_edges.insert(std::vector<std::uint32_t>(e.begin(), e.end()));
        } else if (lab.edge_rule == EdgeRule::matching_complement) {
            if (arity != 2) throw std::invalid_argument("matching-complement edges need a graph theory");
            for (auto it = origin.begin(); it != origin.end(); ++it)
                for (auto jt = std::next(it); jt != origin.end(); ++jt)
                    if (it->second.first != jt->second.first && it->second.second != jt->second.second)
                        pool_edges.insert({it->first, jt->first});
        }
    } else {
        PairCodes pc = compute_pair_codes(J, inst.r, inst.s);
        CoherenceReport coh = check_labeling_coherence(lab, pc);
        if (!coh.ok) throw IncoherentLabeling(coh);
        fam.realizations = pc.Y;
        const std::size_t n = pc.Y.size();
        detail::UnionFind uf(n * w);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (const auto& [key, codes] : lab.collisions)
                    if (codes.count(pc.code[a][b])) uf.unite(a * w + key.first, b * w + key.second);
        std::map<std::size_t, std::uint32_t> id_of_root;
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<std::uint32_t> b;
            for (std::size_t p = 0; p < w; ++p) {
                auto root = uf.find(a * w + p);
                auto [it, fresh] = id_of_root.emplace(root, static_cast<std::uint32_t>(id_of_root.size()));
                if (fresh) pool.push_back(it->second);
                b.push_back(it->second);
            }
            fam.params.push_back(std::move(b));
        }
    }
    for (const auto& b : fam.params) fam.diagrams.push_back(formula_diagram(inst.theory, inst.formula, b, pool, pool_edges));
    return fam;
}

struct ShearingReport {
    bool single_consistent = false;
    bool family_inconsistent = false;
    std::vector<std::size_t> witness_indices;
    std::vector<Tuple> witness_subfamily;
    std::optional<ConsistencyVerdict> witness_verdict;
    ConsistencyVerdict single_verdict;
    std::size_t realization_count = 0;
    std::size_t extension_budget_used = 0;
    bool insufficient_realizations = false;

    bool valid() const { return single_consistent && family_inconsistent; }
};

/**
 * Checks the family over the realizations of r in J. The witness is an inclusion-minimal
 * inconsistent subfamily obtained by deletion filtering in realization order.
 */
inline ShearingReport check_shearing(const ShearingInstance& inst, const IndexModel& J) {
    ShearingReport rep;
    Family fam = instantiate_family(inst, J);
    rep.realization_count = fam.realizations.size();
    rep.extension_budget_used = J.size() - inst.base.size();
    rep.insufficient_realizations = fam.realizations.size() < 2;
    auto self = std::find(fam.realizations.begin(), fam.realizations.end(), inst.t);
    if (self == fam.realizations.end()) throw std::logic_error("t does not realize its own type");
    rep.single_verdict = consistent(fam.diagrams[static_cast<std::size_t>(self - fam.realizations.begin())]);
    rep.single_consistent = rep.single_verdict.consistent;
    if (auto found = shrink_inconsistent(fam.diagrams)) {
        rep.family_inconsistent = true;
        rep.witness_indices = *found;
        for (auto i : rep.witness_indices) rep.witness_subfamily.push_back(fam.realizations[i]);
        rep.witness_verdict = consistent(conjoin(fam.diagrams, rep.witness_indices));
    }
    return rep;
}

namespace detail {

/** Type of a hypothetical new vertex (coordinate, label, edges to existing vertices) over params. */
inline QfType hypothetical_type(const IndexModel& J, const Rational& coord, const Rational& pred,
                                const std::vector<Edge>& partner_sets, const Tuple& params) {
    IndexModel hyp = J;
    VertexId id = hyp.next_free_id();
    hyp.add_vertex(id, coord, J.cls().has_predicates() ? pred : Rational(0));
    for (auto e : partner_sets) {
        e.push_back(id);
        hyp.add_edge(e);
    }
    return qf_type_of(hyp, {id}, params);
}

inline Tuple distinct_ids(std::initializer_list<const Tuple*> parts) {
    Tuple out;
    std::set<VertexId> seen;
    for (const auto* part : parts)
        for (auto v : *part)
            if (seen.insert(v).second) out.push_back(v);
    return out;
}

} // namespace detail

/** Adds a copy of `original` via extend_realizing; returns the fresh vertex. */
inline VertexId add_copy(IndexModel& J, VertexId original, bool right_of, const std::vector<Edge>& partner_sets,
                         const Tuple& context) {
    const Rational& c = J.coord(original);
    std::optional<Rational> below, above;
    for (auto v : J.by_coord()) {
        if (J.coord(v) < c) below = J.coord(v);
        if (c < J.coord(v) && !above) above = J.coord(v);
    }
    Rational point = right_of ? (above ? midpoint(c, *above) : c + 1) : (below ? midpoint(*below, c) : c - 1);
    Tuple params = context;
    if (std::find(params.begin(), params.end(), original) == params.end()) params.push_back(original);
    for (const auto& e : partner_sets)
        for (auto v : e)
            if (std::find(params.begin(), params.end(), v) == params.end()) params.push_back(v);
    QfType target = detail::hypothetical_type(J, point, J.pred(original), partner_sets, params);
    Extension ext = extend_realizing(J, target, params);
    J = std::move(ext.model);
    return ext.tuple.front();
}

/**
 * The claim-style copies: for each position of t outside s, in order, a fresh v_i right of t_i
 * with the same label and (in hypergraph classes) edges {v_i} u y for every k-set y of earlier
 * copies, as long as no forbidden clique could arise. Stops when the budget runs out.
 */
inline std::vector<VertexId> add_clique_copies(IndexModel& J, const Tuple& t, const Tuple& s, std::size_t& budget) {
    std::vector<VertexId> copies;
    const std::size_t k = J.cls().has_edges() ? static_cast<std::size_t>(J.cls().k) : 0;
    const std::size_t n = J.cls().has_edges() ? static_cast<std::size_t>(J.cls().n) : 0;
    for (auto e : t) {
        if (std::find(s.begin(), s.end(), e) != s.end()) continue;
        if (budget == 0) break;
        std::vector<Edge> partners;
        if (k && copies.size() >= k && copies.size() < n) {
            for_each_combination(copies.size(), k, [&](const std::vector<std::size_t>& pick) {
                Edge y;
                for (auto i : pick) y.push_back(copies[i]);
                partners.push_back(y);
                return true;
            });
        }
        Tuple context = detail::distinct_ids({&t, &s, &copies});
        copies.push_back(add_copy(J, e, true, partners, context));
        --budget;
    }
    return copies;
}

/**
 * Builds the working model from the base in rounds: round 0 adds the clique-style copies of
 * add_clique_copies, round 1 edgeless copies left of each t_i, later rounds edgeless copies right
 * of each t_i. Returns the models after each completed round (and the final partial one).
 */
class WorkingModelBuilder {
public:
    WorkingModelBuilder(const IndexModel& base, Tuple t, Tuple s, std::size_t budget)
        : J_(base), t_(std::move(t)), s_(std::move(s)), budget_(budget) {}

    const IndexModel& model() const { return J_; }
    std::size_t remaining() const { return budget_; }
    bool exhausted() const { return budget_ == 0; }

    /** Runs one more round; returns false when nothing could be added. */
    bool next_round() {
        if (budget_ == 0) return false;
        std::size_t before = J_.size();
        if (round_ == 0) {
            add_clique_copies(J_, t_, s_, budget_);
        } else {
            bool right = round_ != 1;
            for (auto e : t_) {
                if (std::find(s_.begin(), s_.end(), e) != s_.end()) continue;
                if (budget_ == 0) break;
                Tuple context = detail::distinct_ids({&t_, &s_});
                add_copy(J_, e, right, {}, context);
                --budget_;
            }
        }
        ++round_;
        return J_.size() > before;
    }

private:
    IndexModel J_;
    Tuple t_;
    Tuple s_;
    std::size_t budget_;
    std::size_t round_ = 0;
};

/**
 * Shearing check with a generated working model: rounds of copies are added until a witness
 * appears or the budget is spent. The first round that exhibits a witness fixes the model, so
 * larger budgets reproduce the verdict.
 */
inline ShearingReport check_shearing(const ShearingInstance& inst, std::size_t budget) {
    WorkingModelBuilder builder(inst.base, inst.t, inst.s, budget);
    ShearingReport rep = check_shearing(inst, builder.model());
    while (!rep.family_inconsistent && builder.next_round()) rep = check_shearing(inst, builder.model());
    return rep;
}

/** The working model check_shearing(inst, budget) settles on. */
inline IndexModel working_model(const ShearingInstance& inst, std::size_t budget) {
    WorkingModelBuilder builder(inst.base, inst.t, inst.s, budget);
    ShearingReport rep = check_shearing(inst, builder.model());
    while (!rep.family_inconsistent && builder.next_round()) rep = check_shearing(inst, builder.model());
    return builder.model();
}

enum class DemoKind { tn1_dividing, rg_linear, t32, tnk };

struct DemoSpec {
    DemoKind kind = DemoKind::t32;
    int n = 3;
    int k = 2;
    int m = 4;
};

struct DemoInstance {
    ShearingInstance instance;
    IndexModel J;
};

inline std::vector<std::vector<std::size_t>> all_k_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for_each_combination(n, k, [&](const std::vector<std::size_t>& pick) {
        out.push_back(pick);
        return true;
    });
    return out;
}

inline DemoInstance build_demo_instance(const DemoSpec& spec) {
    switch (spec.kind) {
        case DemoKind::tn1_dividing: {
            if (spec.n < 2 || spec.m < 2) throw std::invalid_argument("tn1 demo requires n >= 2 and m >= 2");
            std::vector<Rational> pts;
            for (int i = 0; i < spec.m; ++i) pts.emplace_back(i);
            IndexModel base = singleton_predicate_cut(ClassDescriptor::linear_orders(), pts);
            std::vector<std::size_t> coord(static_cast<std::size_t>(spec.n), 0), rows;
            Formula f;
            for (std::size_t r = 0; r < static_cast<std::size_t>(spec.n); ++r) {
                rows.push_back(r);
                f.positive.push_back({r});
            }
            auto inst = make_instance(base, {}, {0}, TheoryDescriptor::tn1(spec.n),
                                      Labeling::projection(coord, rows, EdgeRule::matching_complement), f);
            return {inst, base};
        }
        case DemoKind::rg_linear: {
            IndexModel base = singleton_predicate_cut(ClassDescriptor::linear_orders(), {Rational(0), Rational(1)});
            Formula f;
            f.positive = {{0}};
            f.negative = {{1}};
            f.distinct = {0, 1};
            auto inst = make_instance(base, {}, {0, 1}, TheoryDescriptor::random_graph(), Labeling::projection({0, 1}), f);
            IndexModel J = base;
            std::size_t budget = 2;
            add_clique_copies(J, inst.t, inst.s, budget);
            return {inst, J};
        }
        case DemoKind::t32:
        case DemoKind::tnk: {
            int n = spec.kind == DemoKind::t32 ? 3 : spec.n;
            int k = spec.kind == DemoKind::t32 ? 2 : spec.k;
            auto cls = ClassDescriptor::hypergraph(n, k);
            std::vector<Rational> pts;
            Tuple t;
            std::vector<std::size_t> coord;
            for (int i = 0; i < n; ++i) {
                pts.emplace_back(i);
                t.push_back(static_cast<VertexId>(i));
                coord.push_back(static_cast<std::size_t>(i));
            }
            IndexModel base = singleton_predicate_cut(cls, pts);
            Formula f;
            f.positive = all_k_subsets(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
            auto inst = make_instance(base, {}, t, TheoryDescriptor::tnk(n, k), Labeling::projection(coord), f);
            IndexModel J = base;
            std::size_t budget = static_cast<std::size_t>(n);
            add_clique_copies(J, t, {}, budget);
            return {inst, J};
        }
    }
    throw std::invalid_argument("unknown demo kind");
}

struct ChainStep {
    Tuple I_prev;     // enumeration s of I_m
    ShearingInstance instance;
    Tuple type_tuple; // the tuple whose formula joins the running partial type
    Tuple witness;    // the copies v_0..v_{n-1}
};

struct UnsuperstableChain {
    int n = 0;
    int k = 0;
    IndexModel J;
    std::vector<ChainStep> steps;
};

/**
 * Iterates the inductive step: I_0 = {0}; at step m, n fresh points right of everything in J (labels
 * equal to coordinates) are added to I, typed over I_m, and given their own copies in the shared J.
 */
inline UnsuperstableChain build_unsuperstable_chain(int n, int k, int steps) {
    if (steps < 1) throw std::invalid_argument("chain requires steps >= 1");
    auto cls = ClassDescriptor::hypergraph(n, k);
    UnsuperstableChain chain;
    chain.n = n;
    chain.k = k;
    IndexModel base(cls);
    base.add_vertex(0, Rational(0), Rational(0));
    Tuple I{0};
    IndexModel J = base;
    std::vector<std::size_t> coord;
    for (int i = 0; i < n; ++i) coord.push_back(static_cast<std::size_t>(i));
    Formula f;
    f.positive = all_k_subsets(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
    for (int m = 0; m < steps; ++m) {
        Tuple t;
        const Rational start = J.coord(J.by_coord().back()) + 1;
        for (int i = 0; i < n; ++i) {
            Rational c = start + i;
            VertexId id = J.next_free_id();
            base.add_vertex(id, c, c);
            J.add_vertex(id, c, c);
            t.push_back(id);
        }
        ChainStep step;
        step.I_prev = I;
        step.instance = make_instance(base, I, t, TheoryDescriptor::tnk(n, k), Labeling::projection(coord), f);
        step.type_tuple = t;
        std::size_t budget = static_cast<std::size_t>(n);
        step.witness = add_clique_copies(J, t, I, budget);
        chain.steps.push_back(std::move(step));
        I.insert(I.end(), t.begin(), t.end());
    }
    // every step's base is the final I-cut restricted to what existed at that step; J extends all
    chain.J = J;
    return chain;
}

/** Deliberate defect: step m's formula is taken at step 0's witness copies instead. */
inline UnsuperstableChain with_merged_pools(UnsuperstableChain chain) {
    const auto subsets = all_k_subsets(static_cast<std::size_t>(chain.n), static_cast<std::size_t>(chain.k));
    const Tuple& t0 = chain.steps.front().type_tuple;
    const Tuple& v0 = chain.steps.front().witness;
    for (std::size_t m = 0; m < chain.steps.size(); ++m) {
        const auto& u = subsets[m % subsets.size()];
        Tuple merged = t0;
        for (auto i : u) merged[i] = v0[i];
        chain.steps[m].type_tuple = merged;
    }
    return chain;
}

struct ChainReport {
    std::vector<ShearingReport> steps;
    ConsistencyVerdict union_verdict;
    bool union_consistent = false;
    bool model_valid = false;

    bool unsuperstable() const {
        return model_valid && union_consistent && std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.valid(); });
    }
};

inline Diagram chain_union_diagram(const UnsuperstableChain& chain) {
    Diagram d;
    d.theory = TheoryDescriptor::tnk(chain.n, chain.k);
    d.free_vars = {0};
    for (const auto& v : chain.J.vertices()) d.params.push_back(v.id);
    for (const auto& e : chain.J.edges()) d.param_edges.insert(std::vector<std::uint32_t>(e.begin(), e.end()));
    for (const auto& step : chain.steps)
        for (const auto& u : step.instance.formula.positive) {
            EdgeLiteral lit;
            lit.args.push_back(Term::var(0));
            for (auto p : u) lit.args.push_back(Term::param(step.type_tuple[step.instance.labeling.coord_map[p]]));
            d.literals.emplace_back(lit);
        }
    return d;
}

inline ChainReport verify_chain(const UnsuperstableChain& chain) {
    ChainReport rep;
    rep.model_valid = validate_structure(chain.J).ok();
    for (const auto& step : chain.steps) {
        IndexModel J = chain.J;
        rep.steps.push_back(check_shearing(step.instance, J));
    }
    rep.union_verdict = consistent(chain_union_diagram(chain));
    rep.union_consistent = rep.union_verdict.consistent;
    return rep;
}

} // namespace shearlab
