#pragma once

#include "circle.hpp"
#include "self_collision.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace shearlab {

/** Smallest coherent collision labeling over the realizations in pc containing the given seeds. */
inline Labeling collision_closure(std::size_t width, const PairCodes& pc,
                                  const std::vector<std::tuple<std::size_t, std::size_t, std::string>>& seeds) {
    const std::size_t n = pc.Y.size();
    Labeling lab = Labeling::collision(width);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t p = 0; p < width; ++p) lab.add(p, p, pc.code[a][a]);
    for (const auto& [p, q, c] : seeds) lab.add(p, q, c);
    while (true) {
        detail::UnionFind uf(n * width);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (const auto& [key, codes] : lab.collisions)
                    if (codes.count(pc.code[a][b])) uf.unite(a * width + key.first, b * width + key.second);
        bool grew = false;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t p = 0; p < width; ++p)
                    for (std::size_t q = 0; q < width; ++q)
                        if (uf.find(a * width + p) == uf.find(b * width + q) && !lab.collides(pc.code[a][b], p, q)) {
                            lab.add(p, q, pc.code[a][b]);
                            grew = true;
                        }
        if (!grew) return lab;
    }
}

/** Pair codes, in the derived model, among v0, w0 and every tuple recorded in the trace. */
inline PairCodes trace_pair_codes(const SelfCollision& d, const Tuple& v0, const Tuple& w0, const Tuple& s) {
    PairCodes pc;
    auto add = [&](const Tuple& x) {
        if (!pc.index_of(x)) pc.Y.push_back(x);
    };
    for (const auto* x : {&v0, &w0, &d.v, &d.w, &d.z}) add(*x);
    for (const auto& move : d.trace)
        for (const auto& eq : move.equalities)
            for (const auto* x : {&eq.a1, &eq.b1, &eq.a2, &eq.b2}) add(*x);
    pc.code.assign(pc.Y.size(), std::vector<std::string>(pc.Y.size()));
    for (std::size_t a = 0; a < pc.Y.size(); ++a)
        for (std::size_t b = 0; b < pc.Y.size(); ++b) pc.code[a][b] = pair_code(d.J, pc.Y[a], pc.Y[b], s);
    return pc;
}

/**
 * Whether the coherent closure of lab over pc identifies positions i and j of some y with
 * code(y⌢y) = diag. One union-find pass over lab's own collisions settles most cases; the full
 * closure is the fallback.
 */
inline bool closure_forces_self_collision(std::size_t width, const PairCodes& pc, const Labeling& lab,
                                          const std::string& diag, std::size_t i, std::size_t j) {
    const std::size_t n = pc.Y.size();
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> by_code;
    for (const auto& [key, cs] : lab.collisions)
        for (const auto& c : cs) by_code[c].push_back(key);
    detail::UnionFind uf(n * width);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto it = by_code.find(pc.code[a][b]);
            if (it == by_code.end()) continue;
            for (auto [p, q] : it->second) uf.unite(a * width + p, b * width + q);
        }
    for (std::size_t y = 0; y < n; ++y)
        if (pc.code[y][y] == diag && uf.find(y * width + i) == uf.find(y * width + j)) return true;
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> seeds;
    for (const auto& [key, cs] : lab.collisions)
        for (const auto& c : cs) seeds.emplace_back(key.first, key.second, c);
    return collision_closure(width, pc, seeds).collides(diag, i, j);
}

/** Sign patterns over width positions: every position in A, B or neither, A and B nonempty, C = all. */
inline std::vector<Formula> sign_patterns(std::size_t width) {
    std::vector<Formula> out;
    std::size_t total = 1;
    for (std::size_t p = 0; p < width; ++p) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        Formula f;
        std::size_t c = code;
        for (std::size_t p = 0; p < width; ++p, c /= 3) {
            if (c % 3 == 1) f.positive.push_back({p});
            if (c % 3 == 2) f.negative.push_back({p});
            f.distinct.push_back(p);
        }
        if (!f.positive.empty() && !f.negative.empty()) out.push_back(std::move(f));
    }
    return out;
}

struct TrivialDividingStats {
    std::size_t arrays = 0;          // (columns, width) shapes swept
    std::size_t edge_patterns = 0;   // indiscernible clique-free edge patterns
    std::size_t families = 0;        // families with individually consistent members
    std::size_t counterexamples = 0;
    std::vector<std::string> failures;
};

/**
 * Column arrays a^p_c (row p < width, column c < columns) in T_{3,2}-style hypergraphs. An edge
 * pattern is column-indiscernible: whether a triple of cells is an edge depends only on its rows
 * and the order pattern of its columns. For each clique-free pattern and each set S of
 * within-column pairs {p, q}, the family {AND_{pq in S} R(x, a^p_c, a^q_c) : c < columns} is checked
 * to be consistent whenever its members are.
 */
inline TrivialDividingStats sweep_trivial_dividing(int n = 3, int k = 2, std::size_t max_columns = 4, std::size_t max_width = 3,
                                          std::size_t max_cells = 7) {
    TrivialDividingStats st;
    const auto theory = TheoryDescriptor::tnk(n, k);
    const std::size_t arity = theory.edge_arity();
    for (std::size_t width = 1; width <= max_width; ++width)
        for (std::size_t columns = 1; columns <= max_columns; ++columns) {
            if (width * columns > max_cells) continue;
            ++st.arrays;
            const std::size_t cells = width * columns;
            auto cell = [&](std::size_t row, std::size_t col) { return static_cast<std::uint32_t>(col * width + row); };
            // shape of a sorted cell set: rows plus dense ranks of columns
            std::map<std::vector<std::pair<std::size_t, std::size_t>>, std::size_t> shape_id;
            std::vector<std::vector<std::uint32_t>> triples;
            std::vector<std::size_t> triple_shape;
            for_each_combination(cells, arity, [&](const std::vector<std::size_t>& pick) {
                std::set<std::size_t> cols;
                for (auto c : pick) cols.insert(c / width);
                std::vector<std::size_t> rank(cols.begin(), cols.end());
                std::vector<std::pair<std::size_t, std::size_t>> shape;
                for (auto c : pick) {
                    auto r = static_cast<std::size_t>(std::lower_bound(rank.begin(), rank.end(), c / width) - rank.begin());
                    shape.emplace_back(r, c % width);
                }
                std::sort(shape.begin(), shape.end());
                auto [it, fresh] = shape_id.emplace(shape, shape_id.size());
                triples.emplace_back(pick.begin(), pick.end());
                triple_shape.push_back(it->second);
                return true;
            });
            const std::size_t shapes = shape_id.size();
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t p = 0; p < width; ++p)
                for (std::size_t q = p + 1; q < width; ++q) pairs.emplace_back(p, q);
            if (arity != 3) throw std::invalid_argument("trivial-dividing sweep is written for 3-uniform edges");

            for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << shapes); ++mask) {
                std::set<std::vector<std::uint32_t>> edges;
                for (std::size_t e = 0; e < triples.size(); ++e)
                    if (mask >> triple_shape[e] & 1) edges.insert(triples[e]);
                bool clique = find_clique(cells, arity, theory.clique_bound(), [&](const std::vector<std::size_t>& idx) {
                                  return edges.count(std::vector<std::uint32_t>(idx.begin(), idx.end())) > 0;
                              }).has_value();
                if (clique) continue;
                ++st.edge_patterns;
                std::vector<std::uint32_t> pool(cells);
                for (std::uint32_t c = 0; c < cells; ++c) pool[c] = c;
                for (std::uint64_t s = 1; s < (std::uint64_t(1) << pairs.size()); ++s) {
                    std::vector<Diagram> family;
                    for (std::size_t col = 0; col < columns; ++col) {
                        Diagram d;
                        d.theory = theory;
                        d.params = pool;
                        d.param_edges = edges;
                        d.free_vars = {0};
                        for (std::size_t e = 0; e < pairs.size(); ++e)
                            if (s >> e & 1)
                                d.literals.emplace_back(EdgeLiteral{true, {Term::var(0), Term::param(cell(pairs[e].first, col)),
                                                                           Term::param(cell(pairs[e].second, col))}});
                        family.push_back(std::move(d));
                    }
                    bool members = std::all_of(family.begin(), family.end(), [](const Diagram& d) { return consistent(d).consistent; });
                    if (!members) continue;
                    ++st.families;
                    std::vector<std::size_t> all(columns);
                    for (std::size_t c = 0; c < columns; ++c) all[c] = c;
                    if (!consistent(conjoin(family, all)).consistent) {
                        ++st.counterexamples;
                        if (st.failures.size() < 5)
                            st.failures.push_back("columns=" + std::to_string(columns) + " width=" + std::to_string(width) +
                                                  " pattern=" + std::to_string(mask) + " atoms=" + std::to_string(s));
                    }
                }
            }
        }
    return st;
}

struct CollisionSweepConfig {
    int n = 3;
    int k = 2;
    std::size_t max_length = 3;
    std::size_t max_s = 2;
    std::size_t max_width = 3;
    std::size_t max_budget = 6;
    std::size_t max_seeds = 2; // labelings are closures of up to this many seed collisions
    std::size_t derive_budget = kDefaultDeriveBudget;
};

struct CollisionSweepStats {
    std::size_t models = 0;            // distinct (t, s, J) combinations
    std::size_t labelings = 0;         // distinct coherent closures
    std::size_t instances = 0;         // labeling x sign pattern
    std::size_t family_inconsistent = 0;
    std::size_t single_inconsistent = 0;  // the formula at t is already inconsistent in J
    std::size_t single_after_closure = 0; // ... or becomes so once the labeling is re-closed over the derived J'
    std::size_t collisions_checked = 0; // pos/neg collisions sent through the derivation
    std::size_t derivations = 0;       // distinct (v, w) pairs derived
    std::size_t with_crossings = 0;    // derivations that needed crossing normalization
    std::size_t counterexamples = 0;
    std::vector<std::string> failures;
};

/**
 * Exhaustive collision sweep over c_{n,k}: for every increasing t from the base cut, every
 * subsequence s, every budgeted working model, every coherent collision labeling generated by one or
 * two seed collisions and every sign pattern, a family inconsistency must close up into a
 * self-collision at code(t⌢t) through derive_self_collision, with the trace re-verified. The
 * labeling, re-closed over the tuples the trace mentions, must then make the formula at t
 * inconsistent (closure is monotone, so a collision found there persists over all realizations).
 */
inline CollisionSweepStats sweep_collisions(const CollisionSweepConfig& cfg = {}) {
    CollisionSweepStats st;
    auto cls = ClassDescriptor::hypergraph(cfg.n, cfg.k);
    auto record = [&](std::string why) {
        ++st.counterexamples;
        if (st.failures.size() < 10) st.failures.push_back(std::move(why));
    };
    for (std::size_t L = 1; L <= cfg.max_length; ++L) {
        std::vector<Rational> pts;
        Tuple t;
        for (std::size_t p = 0; p < L; ++p) {
            pts.emplace_back(static_cast<std::int64_t>(p));
            t.push_back(static_cast<VertexId>(p));
        }
        IndexModel base = singleton_predicate_cut(cls, pts);
        for (std::size_t size = 0; size <= std::min(cfg.max_s, L); ++size)
            for_each_combination(L, size, [&](const std::vector<std::size_t>& pick) {
                Tuple s;
                for (auto p : pick) s.push_back(t[p]);
                QfType r = qf_type_of(base, t, s);
                std::vector<IndexModel> seen;
                for (std::size_t budget = 1; budget <= cfg.max_budget; ++budget) {
                    WorkingModelBuilder builder(base, t, s, budget);
                    while (builder.next_round()) {
                    }
                    const IndexModel& J = builder.model();
                    if (std::find(seen.begin(), seen.end(), J) != seen.end()) continue;
                    seen.push_back(J);
                    ++st.models;
                    PairCodes pc = compute_pair_codes(J, r, s);
                    const std::size_t N = pc.Y.size();
                    const std::size_t self = *pc.index_of(t);
                    struct Derived {
                        bool ok = false;
                        PairCodes wider; // over the tuples of the trace, in the derived model
                    };
                    std::map<std::pair<std::size_t, std::size_t>, Derived> derived; // (v, w) -> derivation
                    const std::string tt = pc.code[self][self];
                    std::set<std::string> codes;
                    for (const auto& row : pc.code) codes.insert(row.begin(), row.end());

                    for (std::size_t width = 1; width <= cfg.max_width; ++width) {
                        std::set<std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>>> closures;
                        std::vector<Labeling> labelings;
                        for (std::size_t p = 0; p < width; ++p)
                            for (std::size_t q = 0; q < width; ++q)
                                for (const auto& c : codes) {
                                    Labeling lab = collision_closure(width, pc, {{p, q, c}});
                                    if (closures.insert(lab.collisions).second) labelings.push_back(std::move(lab));
                                }
                        if (cfg.max_seeds >= 2) {
                            const std::size_t generators = labelings.size();
                            for (std::size_t g = 0; g < generators; ++g)
                                for (std::size_t h = g + 1; h < generators; ++h) {
                                    std::vector<std::tuple<std::size_t, std::size_t, std::string>> seeds;
                                    for (const auto* src : {&labelings[g], &labelings[h]})
                                        for (const auto& [key, cs] : src->collisions)
                                            for (const auto& c : cs) seeds.emplace_back(key.first, key.second, c);
                                    Labeling lab = collision_closure(width, pc, seeds);
                                    if (closures.insert(lab.collisions).second) labelings.push_back(std::move(lab));
                                }
                        }
                        for (const auto& lab : labelings) {
                            ++st.labelings;
                            std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, bool> reclosed;
                            // parameter ids from the equality classes
                            detail::UnionFind uf(N * width);
                            for (std::size_t a = 0; a < N; ++a)
                                for (std::size_t b = 0; b < N; ++b)
                                    for (const auto& [key, cs] : lab.collisions)
                                        if (cs.count(pc.code[a][b])) uf.unite(a * width + key.first, b * width + key.second);
                            std::vector<std::vector<std::uint32_t>> params(N, std::vector<std::uint32_t>(width));
                            std::set<std::uint32_t> pool_set;
                            for (std::size_t a = 0; a < N; ++a)
                                for (std::size_t x = 0; x < width; ++x) {
                                    params[a][x] = static_cast<std::uint32_t>(uf.find(a * width + x));
                                    pool_set.insert(params[a][x]);
                                }
                            std::vector<std::uint32_t> pool(pool_set.begin(), pool_set.end());
                            for (const auto& f : sign_patterns(width)) {
                                ++st.instances;
                                std::vector<Diagram> fam;
                                for (std::size_t a = 0; a < N; ++a)
                                    fam.push_back(formula_diagram(TheoryDescriptor::random_graph(), f, params[a], pool, {}));
                                std::vector<std::size_t> all(N);
                                for (std::size_t a = 0; a < N; ++a) all[a] = a;
                                if (consistent(conjoin(fam, all)).consistent) continue;
                                ++st.family_inconsistent;
                                if (!consistent(fam[self]).consistent) ++st.single_inconsistent;
                                bool any = false;
                                std::optional<bool> closes;
                                for (const auto& pos : f.positive)
                                    for (const auto& neg : f.negative)
                                        for (std::size_t a = 0; a < N; ++a)
                                            for (std::size_t b = 0; b < N; ++b) {
                                                if (params[a][pos[0]] != params[b][neg[0]]) continue;
                                                any = true;
                                                ++st.collisions_checked;
                                                auto key = std::make_pair(a, b);
                                                auto it = derived.find(key);
                                                if (it == derived.end()) {
                                                    Derived out;
                                                    std::string why;
                                                    try {
                                                        auto d = derive_self_collision(lab, J, s, r, f, pc.Y[a], pc.Y[b], pos[0],
                                                                                       neg[0], cfg.derive_budget);
                                                        auto check = verify_trace(d, s, r);
                                                        out.ok = check.ok &&
                                                                 pair_code(d.J, d.z, d.z, s) == tt;
                                                        why = check.ok ? "code(z⌢z) differs from code(t⌢t)" : check.failure;
                                                        if (d.initial_crossings > 0) ++st.with_crossings;
                                                        out.wider = trace_pair_codes(d, pc.Y[a], pc.Y[b], s);
                                                    } catch (const std::exception& e) {
                                                        why = e.what();
                                                    }
                                                    ++st.derivations;
                                                    const bool ok = out.ok;
                                                    it = derived.emplace(key, std::move(out)).first;
                                                    if (!ok)
                                                        record("L=" + std::to_string(L) + " |s|=" + std::to_string(size) +
                                                               " budget=" + std::to_string(budget) + " pair=(" +
                                                               std::to_string(a) + "," + std::to_string(b) + "): " + why);
                                                }
                                                if (closes || !it->second.ok) continue;
                                                Derived& d = it->second;
                                                auto rkey = std::make_tuple(a, b, pos[0], neg[0]);
                                                auto rc = reclosed.find(rkey);
                                                if (rc == reclosed.end())
                                                    rc = reclosed
                                                             .emplace(rkey, closure_forces_self_collision(width, d.wider, lab, tt,
                                                                                                          pos[0], neg[0]))
                                                             .first;
                                                closes = rc->second;
                                            }
                                if (!any) record("family inconsistent without a positive/negative collision");
                                if (closes && *closes)
                                    ++st.single_after_closure;
                                else if (any)
                                    record("L=" + std::to_string(L) + " |s|=" + std::to_string(size) +
                                           " budget=" + std::to_string(budget) +
                                           ": re-closed labeling leaves the formula at t consistent");
                            }
                        }
                    }
                }
                return true;
            });
    }
    return st;
}

struct AgreementStats {
    std::size_t diagrams = 0;
    std::size_t consistent = 0;
    std::size_t mismatches = 0;
    std::vector<std::string> failures;
};

namespace detail {

inline void agree_one(const Diagram& d, AgreementStats& st) {
    ++st.diagrams;
    ConsistencyVerdict v = consistent(d);
    Realization real = realize_in_model(d);
    bool model_ok = real.model && evaluate(*real.model, d).consistent && !scan_forbidden_clique(*real.model);
    if (v.consistent) ++st.consistent;
    if (v.consistent != model_ok || v.consistent != real.verdict.consistent) {
        ++st.mismatches;
        if (st.failures.size() < 5)
            st.failures.push_back(theory_name(d.theory) + " diagram with " + std::to_string(d.literals.size()) + " literals");
    }
}

inline std::vector<std::vector<std::uint32_t>> all_subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::uint32_t>> out;
    for_each_combination(n, k, [&](const std::vector<std::size_t>& pick) {
        out.emplace_back(pick.begin(), pick.end());
        return true;
    });
    return out;
}

inline bool param_edges_clique_free(const TheoryDescriptor& th, std::size_t params,
                                    const std::set<std::vector<std::uint32_t>>& edges) {
    if (!th.clique_bound()) return true;
    return !find_clique(params, th.edge_arity(), th.clique_bound(), [&](const std::vector<std::size_t>& idx) {
                return edges.count(std::vector<std::uint32_t>(idx.begin(), idx.end())) > 0;
            }).has_value();
}

} // namespace detail

/**
 * consistent() against realize_in_model() plus direct evaluation. Exhaustive over one free
 * variable and up to `exhaustive_params` parameters (every parameter edge set, every sign
 * assignment to atoms, every set of disequalities), then `samples` seeded random diagrams with up
 * to 6 parameters and 2 variables.
 */
inline AgreementStats sweep_oracle_agreement(const TheoryDescriptor& th, std::size_t exhaustive_params = 4,
                                             std::size_t samples = 20000, std::uint64_t seed = 1) {
    AgreementStats st;
    const std::size_t arity = th.edge_arity();
    for (std::size_t P = 0; P <= exhaustive_params; ++P) {
        auto param_sets = detail::all_subsets_of_size(P, arity);
        auto atom_sets = detail::all_subsets_of_size(P, arity - 1);
        std::vector<std::uint32_t> pool(P);
        for (std::uint32_t p = 0; p < P; ++p) pool[p] = p;
        for (std::uint64_t em = 0; em < (std::uint64_t(1) << param_sets.size()); ++em) {
            std::set<std::vector<std::uint32_t>> edges;
            for (std::size_t e = 0; e < param_sets.size(); ++e)
                if (em >> e & 1) edges.insert(param_sets[e]);
            if (!detail::param_edges_clique_free(th, P, edges)) continue;
            std::size_t combos = 1;
            for (std::size_t a = 0; a < atom_sets.size(); ++a) combos *= 3;
            for (std::size_t signs = 0; signs < combos; ++signs)
                for (std::uint64_t neq = 0; neq < (std::uint64_t(1) << P); ++neq) {
                    Diagram d;
                    d.theory = th;
                    d.params = pool;
                    d.param_edges = edges;
                    d.free_vars = {0};
                    std::size_t c = signs;
                    for (std::size_t a = 0; a < atom_sets.size(); ++a, c /= 3) {
                        if (c % 3 == 0) continue;
                        EdgeLiteral lit{c % 3 == 1, {Term::var(0)}};
                        for (auto p : atom_sets[a]) lit.args.push_back(Term::param(p));
                        d.literals.emplace_back(lit);
                    }
                    for (std::uint32_t p = 0; p < P; ++p)
                        if (neq >> p & 1) d.literals.emplace_back(NeqLiteral{Term::var(0), Term::param(p)});
                    detail::agree_one(d, st);
                }
        }
    }

    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    for (std::size_t sample = 0; sample < samples; ++sample) {
        const std::size_t P = uniform(0, 6), V = uniform(1, 2);
        Diagram d;
        d.theory = th;
        for (std::uint32_t p = 0; p < P; ++p) d.params.push_back(p);
        for (std::uint32_t x = 0; x < V; ++x) d.free_vars.push_back(x);
        std::vector<Term> terms;
        for (std::uint32_t p = 0; p < P; ++p) terms.push_back(Term::param(p));
        for (std::uint32_t x = 0; x < V; ++x) terms.push_back(Term::var(x));
        const std::size_t edge_density = uniform(0, 4);
        for (const auto& e : detail::all_subsets_of_size(P, arity))
            if (uniform(0, 9) < edge_density) {
                auto trial = d.param_edges;
                trial.insert(e);
                if (detail::param_edges_clique_free(th, P, trial)) d.param_edges = trial;
            }
        const std::size_t literal_count = uniform(0, 8);
        for (std::size_t l = 0; l < literal_count && terms.size() >= arity; ++l) {
            if (uniform(0, 4) == 0) {
                Term x = Term::var(static_cast<std::uint32_t>(uniform(0, V - 1)));
                d.literals.emplace_back(NeqLiteral{x, terms[uniform(0, terms.size() - 1)]});
                continue;
            }
            std::vector<Term> args;
            std::vector<std::size_t> idx(terms.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            for (std::size_t i = 0; i < arity; ++i) args.push_back(terms[idx[i]]);
            if (std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_var(); }))
                args[0] = Term::var(static_cast<std::uint32_t>(uniform(0, V - 1)));
            std::sort(args.begin(), args.end());
            if (std::adjacent_find(args.begin(), args.end()) != args.end()) continue;
            d.literals.emplace_back(EdgeLiteral{uniform(0, 2) != 0, args});
        }
        detail::agree_one(d, st);
    }
    return st;
}

struct RoundTripStats {
    std::size_t contexts = 0;
    std::size_t witnesses = 0;
    std::size_t shearing_valid = 0;
    std::size_t strong_pairwise = 0;
    std::size_t recovered = 0;
    std::size_t same_relations = 0;
    std::vector<std::string> failures;

    bool ok() const {
        return witnesses > 0 && shearing_valid == witnesses && strong_pairwise == witnesses && recovered == witnesses &&
               same_relations == witnesses;
    }
};

/** One witness through circle_to_shearing, check_shearing, the strong pairwise check and back. */
inline void round_trip_one(const CircleWitness& w, const IndexModel& J, RoundTripStats& st, const std::string& label,
                           std::size_t budget = 64) {
    ++st.witnesses;
    auto fail = [&](const std::string& what) {
        if (st.failures.size() < 5) st.failures.push_back(label + ": " + what);
    };
    ShearingInstance inst = circle_to_shearing(w, J);
    if (check_shearing(inst, J).valid())
        ++st.shearing_valid;
    else
        fail("check_shearing");
    StrongPairwise sp = check_strong_pairwise(inst, J, budget);
    if (sp.ok)
        ++st.strong_pairwise;
    else
        fail("strong pairwise");
    CircleWitness back = shearing_to_circle(inst, J);
    if (check_circle_witness(back, J).ok())
        ++st.recovered;
    else
        fail("recovered witness");
    if (same_relations(w, back, J))
        ++st.same_relations;
    else
        fail("accepted sets differ");
}

/**
 * Seeded random coordinate-equality witnesses on dense orders: a random base of 4..6 points, a
 * random s (0..2 points) and increasing t (2 points outside s), J duplicated up to 8 vertices, and
 * a random passing (E1, E2, F) among all passing ones in that context. Each goes through
 * round_trip_one until `count` witnesses have been checked.
 */
inline RoundTripStats sweep_circle_round_trip(std::size_t count = 100, std::uint64_t seed = 1, std::size_t max_contexts = 5000) {
    RoundTripStats st;
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    while (st.witnesses < count && st.contexts < max_contexts) {
        ++st.contexts;
        const std::size_t size = uniform(4, 6);
        std::vector<Rational> points;
        for (std::size_t i = 0; i < size; ++i) points.emplace_back(static_cast<std::int64_t>(uniform(0, 40)), uniform(1, 4));
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        IndexModel base = singleton_predicate_cut(ClassDescriptor::linear_orders(), points);
        Tuple ids = base.by_coord();
        std::shuffle(ids.begin(), ids.end(), rng);
        const std::size_t S = std::min<std::size_t>(uniform(0, 2), ids.size() - 2);
        Tuple s(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(S));
        Tuple t(ids.begin() + static_cast<std::ptrdiff_t>(S), ids.begin() + static_cast<std::ptrdiff_t>(S + 2));
        std::sort(t.begin(), t.end(), [&](VertexId a, VertexId b) { return base.coord(a) < base.coord(b); });
        IndexModel J = duplicate_realizations(base, s, t, std::max<std::size_t>(8, base.size()));
        std::size_t candidates = 0;
        auto found = context_witnesses(J, s, t, candidates);
        if (found.empty()) continue;
        const auto& pick = found[uniform(0, found.size() - 1)];
        round_trip_one(pick.witness, J, st,
                       "context " + std::to_string(st.contexts) + " " + pattern_name(pick.e1) + " | " + pattern_name(pick.e2) +
                           " | " + pattern_name(pick.f));
    }
    return st;
}

} // namespace shearlab
