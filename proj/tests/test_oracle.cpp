#include <shearlab/combinatorics.hpp>
#include <shearlab/oracle.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace shearlab;

namespace {

EdgeLiteral atom(bool positive, std::vector<Term> args) { return EdgeLiteral{positive, std::move(args)}; }

Diagram t32_triangle(bool param_edge) {
    Diagram d;
    d.theory = TheoryDescriptor::tnk(3, 2);
    d.params = {0, 1, 2};
    if (param_edge) d.param_edges = {{0, 1, 2}};
    d.free_vars = {0};
    const Term x = Term::var(0), p = Term::param(0), q = Term::param(1), r = Term::param(2);
    d.literals = {atom(true, {x, p, q}), atom(true, {x, p, r}), atom(true, {x, q, r})};
    return d;
}

/**
 * Model search over every way of placing the variables (on a parameter, on an earlier variable,
 * or on a new vertex) and every edge set touching a variable vertex.
 */
bool brute_consistent(const Diagram& d) {
    const std::size_t P = d.params.size(), V = d.free_vars.size();
    const std::size_t arity = d.theory.edge_arity();
    std::vector<std::size_t> place(V, 0);
    while (true) {
        // vertex ids: params 0..P-1, new vertices P.. in order of first use
        std::map<Term, std::uint32_t> at;
        for (std::size_t i = 0; i < P; ++i) at[Term::param(d.params[i])] = static_cast<std::uint32_t>(i);
        std::uint32_t next = static_cast<std::uint32_t>(P);
        bool ok = true;
        for (std::size_t v = 0; v < V && ok; ++v) {
            std::size_t c = place[v];
            if (c < P)
                at[Term::var(d.free_vars[v])] = static_cast<std::uint32_t>(c);
            else if (c < P + v)
                at[Term::var(d.free_vars[v])] = at[Term::var(d.free_vars[c - P])];
            else if (c == P + v)
                at[Term::var(d.free_vars[v])] = next++;
            else
                ok = false;
        }
        if (ok) {
            const std::uint32_t size = next;
            std::set<std::vector<std::uint32_t>> fixed;
            for (const auto& e : d.param_edges) {
                std::vector<std::uint32_t> vs;
                for (auto p : e) vs.push_back(at[Term::param(p)]);
                std::sort(vs.begin(), vs.end());
                fixed.insert(vs);
            }
            std::vector<std::vector<std::uint32_t>> free_sets;
            for_each_combination(size, arity, [&](const std::vector<std::size_t>& e) {
                if (e.back() >= P) free_sets.emplace_back(e.begin(), e.end());
                return true;
            });
            for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << free_sets.size()); ++mask) {
                auto edges = fixed;
                for (std::size_t i = 0; i < free_sets.size(); ++i)
                    if (mask >> i & 1) edges.insert(free_sets[i]);
                auto has = [&](std::vector<std::uint32_t> vs) {
                    std::sort(vs.begin(), vs.end());
                    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) return false;
                    return edges.count(vs) > 0;
                };
                bool sat = true;
                for (const auto& lit : d.literals) {
                    if (const auto* e = std::get_if<EdgeLiteral>(&lit)) {
                        std::vector<std::uint32_t> vs;
                        for (const auto& t : e->args) vs.push_back(at[t]);
                        sat = sat && has(vs) == e->positive;
                    } else {
                        const auto& n = std::get<NeqLiteral>(lit);
                        sat = sat && at[n.var] != at[n.other];
                    }
                }
                if (!sat) continue;
                const std::size_t bound = d.theory.clique_bound();
                bool clique = bound && size >= bound &&
                              find_clique(size, arity, bound, [&](const std::vector<std::size_t>& e) {
                                  return edges.count(std::vector<std::uint32_t>(e.begin(), e.end())) > 0;
                              }).has_value();
                if (!clique) return true;
            }
        }
        std::size_t v = 0;
        while (v < V && ++place[v] > P + v) place[v++] = 0;
        if (v == V) return false;
    }
}

Diagram random_diagram(std::mt19937_64& rng, const TheoryDescriptor& th) {
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    Diagram d;
    d.theory = th;
    const std::size_t P = uniform(0, 3), V = uniform(1, 2);
    for (std::uint32_t p = 0; p < P; ++p) d.params.push_back(p);
    for (std::uint32_t x = 0; x < V; ++x) d.free_vars.push_back(x);
    const std::size_t arity = th.edge_arity();
    for_each_combination(P, arity, [&](const std::vector<std::size_t>& e) {
        if (uniform(0, 1)) d.param_edges.insert(std::vector<std::uint32_t>(e.begin(), e.end()));
        return true;
    });
    if (th.clique_bound() && P >= th.clique_bound()) d.param_edges.clear();
    std::vector<Term> terms;
    for (auto p : d.params) terms.push_back(Term::param(p));
    for (auto x : d.free_vars) terms.push_back(Term::var(x));
    const std::size_t count = uniform(0, 5);
    for (std::size_t l = 0; l < count && terms.size() >= arity; ++l) {
        if (uniform(0, 3) == 0) {
            d.literals.emplace_back(NeqLiteral{Term::var(static_cast<std::uint32_t>(uniform(0, V - 1))), terms[uniform(0, terms.size() - 1)]});
            continue;
        }
        std::vector<Term> pool = terms;
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(arity);
        if (std::none_of(pool.begin(), pool.end(), [](const Term& t) { return t.is_var(); })) pool[0] = Term::var(0);
        std::sort(pool.begin(), pool.end());
        if (std::adjacent_find(pool.begin(), pool.end()) != pool.end()) continue;
        d.literals.emplace_back(atom(uniform(0, 2) > 0, pool));
    }
    return d;
}

} // namespace

TEST(Consistent, RandomGraphMixedLiterals) {
    Diagram d;
    d.theory = TheoryDescriptor::random_graph();
    d.params = {0, 1};
    d.free_vars = {0};
    const Term x = Term::var(0), b0 = Term::param(0), b1 = Term::param(1);
    d.literals = {atom(true, {x, b0}), atom(false, {x, b1}), NeqLiteral{x, b0}, NeqLiteral{x, b1}};
    EXPECT_TRUE(consistent(d).consistent);
    d.literals.push_back(atom(false, {b0, x}));
    auto v = consistent(d);
    EXPECT_FALSE(v.consistent);
    EXPECT_EQ(v.reason, VerdictReason::sign_conflict);
}

TEST(Consistent, TetrahedronIsForbidden) {
    auto v = consistent(t32_triangle(true));
    ASSERT_FALSE(v.consistent);
    EXPECT_EQ(v.reason, VerdictReason::forbidden_clique);
    EXPECT_EQ(v.witness, (std::vector<Term>{Term::var(0), Term::param(0), Term::param(1), Term::param(2)}));
    EXPECT_TRUE(consistent(t32_triangle(false)).consistent);
}

TEST(Consistent, TriangleInTn1) {
    Diagram d;
    d.theory = TheoryDescriptor::tn1(2);
    d.params = {0, 1};
    d.param_edges = {{0, 1}};
    d.free_vars = {0};
    d.literals = {atom(true, {Term::var(0), Term::param(0)}), atom(true, {Term::var(0), Term::param(1)})};
    auto v = consistent(d);
    EXPECT_FALSE(v.consistent);
    EXPECT_EQ(v.reason, VerdictReason::forbidden_clique);
    EXPECT_EQ(v.witness.size(), 3u);
}

TEST(Consistent, MalformedDiagramsThrow) {
    Diagram d = t32_triangle(false);
    d.literals.push_back(atom(true, {Term::param(0), Term::param(1), Term::param(2)}));
    EXPECT_THROW(consistent(d), std::invalid_argument);
    Diagram e = t32_triangle(false);
    e.literals.push_back(atom(true, {Term::var(0), Term::param(0)}));
    EXPECT_THROW(consistent(e), std::invalid_argument);
    Diagram f = t32_triangle(false);
    f.params.push_back(0);
    EXPECT_THROW(consistent(f), std::invalid_argument);
}

TEST(Theory, DescriptorValidation) {
    EXPECT_THROW(TheoryDescriptor::tnk(2, 2), std::invalid_argument);
    EXPECT_THROW(TheoryDescriptor::tn1(1), std::invalid_argument);
    EXPECT_EQ(TheoryDescriptor::tnk(4, 3).edge_arity(), 4u);
    EXPECT_EQ(TheoryDescriptor::tn1(2).clique_bound(), 3u);
    EXPECT_EQ(TheoryDescriptor::random_graph().clique_bound(), 0u);
}

TEST(RealizeInModel, ConsistentTriangleGivesFourVertices) {
    auto real = realize_in_model(t32_triangle(false));
    ASSERT_TRUE(real.model);
    EXPECT_EQ(real.model->size, 4u);
    EXPECT_EQ(real.model->edges.size(), 3u);
    EXPECT_FALSE(scan_forbidden_clique(*real.model));
    EXPECT_TRUE(evaluate(*real.model, t32_triangle(false)).consistent);
}

TEST(RealizeInModel, RefusalCarriesVerdict) {
    auto real = realize_in_model(t32_triangle(true));
    EXPECT_FALSE(real.model);
    EXPECT_EQ(real.verdict, consistent(t32_triangle(true)));
}

TEST(RealizeInModel, EmptyDiagram) {
    Diagram d;
    d.theory = TheoryDescriptor::random_graph();
    auto real = realize_in_model(d);
    ASSERT_TRUE(real.model);
    EXPECT_EQ(real.model->size, 0u);
}

TEST(OracleProperty, AgreesWithExhaustiveModelSearch) {
    std::mt19937_64 rng(21);
    for (auto th : {TheoryDescriptor::random_graph(), TheoryDescriptor::tnk(3, 2), TheoryDescriptor::tn1(2)}) {
        int consistent_count = 0, cliques = 0;
        for (int trial = 0; trial < 400; ++trial) {
            Diagram d = random_diagram(rng, th);
            auto v = consistent(d);
            EXPECT_EQ(v.consistent, brute_consistent(d)) << theory_name(th) << " trial " << trial;
            consistent_count += v.consistent;
            cliques += v.reason == VerdictReason::forbidden_clique;
        }
        EXPECT_GT(consistent_count, 0);
        EXPECT_LT(consistent_count, 400);
        if (th.clique_bound()) {
            EXPECT_GT(cliques, 0) << theory_name(th);
        }
    }
}

TEST(OracleProperty, SubDiagramsOfConsistentDiagramsAreConsistent) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        Diagram d = random_diagram(rng, trial % 2 ? TheoryDescriptor::tnk(3, 2) : TheoryDescriptor::random_graph());
        if (!consistent(d).consistent) continue;
        for (std::size_t drop = 0; drop < d.literals.size(); ++drop) {
            Diagram sub = d;
            sub.literals.erase(sub.literals.begin() + static_cast<std::ptrdiff_t>(drop));
            EXPECT_TRUE(consistent(sub).consistent);
        }
    }
}

TEST(OracleProperty, RealizationsOnlyAddForcedEdges) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        Diagram d = random_diagram(rng, TheoryDescriptor::tnk(3, 2));
        auto real = realize_in_model(d);
        if (!real.model) continue;
        std::size_t positive = 0;
        for (const auto& lit : d.literals)
            if (const auto* e = std::get_if<EdgeLiteral>(&lit); e && e->positive) ++positive;
        EXPECT_LE(real.model->edges.size(), d.param_edges.size() + positive);
    }
}

TEST(MinimalInconsistent, TripleIsTheOnlyWitness) {
    // three formulas R(x, a_u) for u the 2-subsets of a 3-clique of copies sharing an edge
    std::vector<Diagram> family;
    for (auto u : std::vector<std::vector<std::uint32_t>>{{0, 1}, {0, 2}, {1, 2}}) {
        Diagram d;
        d.theory = TheoryDescriptor::tnk(3, 2);
        d.params = {0, 1, 2};
        d.param_edges = {{0, 1, 2}};
        d.free_vars = {0};
        d.literals = {atom(true, {Term::var(0), Term::param(u[0]), Term::param(u[1])})};
        family.push_back(d);
    }
    EXPECT_EQ(minimal_inconsistent_subfamilies(family, 3), (std::vector<std::vector<std::size_t>>{{0, 1, 2}}));
    EXPECT_EQ(shrink_inconsistent(family), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(MinimalInconsistent, DisjointParametersInRandomGraph) {
    std::vector<Diagram> family;
    for (std::uint32_t i = 0; i < 4; ++i) {
        Diagram d;
        d.theory = TheoryDescriptor::random_graph();
        d.params = {2 * i, 2 * i + 1};
        d.free_vars = {0};
        d.literals = {atom(true, {Term::var(0), Term::param(2 * i)}), atom(false, {Term::var(0), Term::param(2 * i + 1)})};
        family.push_back(d);
    }
    EXPECT_TRUE(minimal_inconsistent_subfamilies(family, 4).empty());
    EXPECT_FALSE(shrink_inconsistent(family));
}

TEST(MinimalInconsistentProperty, ShrinkGivesAMinimalInconsistentSet) {
    std::mt19937_64 rng(24);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        // a family over a shared pool: each member one or two literals
        const auto th = trial % 2 ? TheoryDescriptor::tnk(3, 2) : TheoryDescriptor::random_graph();
        Diagram base = random_diagram(rng, th);
        if (base.params.size() < 2) continue;
        std::vector<Diagram> family;
        for (int m = 0; m < 5; ++m) {
            Diagram d = random_diagram(rng, th);
            d.params = base.params;
            d.param_edges = base.param_edges;
            d.free_vars = {0};
            std::vector<Literal> lits;
            for (const auto& l : d.literals) {
                bool uses_other_var = false;
                if (const auto* e = std::get_if<EdgeLiteral>(&l))
                    for (const auto& t : e->args) uses_other_var = uses_other_var || (t.is_var() && t.id != 0);
                if (const auto* n = std::get_if<NeqLiteral>(&l)) uses_other_var = n->var.id != 0 || (n->other.is_var() && n->other.id != 0);
                bool in_pool = true;
                if (const auto* e = std::get_if<EdgeLiteral>(&l))
                    for (const auto& t : e->args) in_pool = in_pool && (t.is_var() || t.id < base.params.size());
                if (const auto* n = std::get_if<NeqLiteral>(&l)) in_pool = !n->other.is_var() ? n->other.id < base.params.size() : true;
                if (!uses_other_var && in_pool) lits.push_back(l);
            }
            d.literals = lits;
            if (consistent(d).consistent) family.push_back(d);
        }
        auto w = shrink_inconsistent(family);
        std::vector<std::size_t> all(family.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        EXPECT_EQ(w.has_value(), !family.empty() && !consistent(conjoin(family, all)).consistent);
        if (!w) continue;
        ++checked;
        EXPECT_FALSE(consistent(conjoin(family, *w)).consistent);
        for (std::size_t drop = 0; drop < w->size(); ++drop) {
            auto sub = *w;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
            EXPECT_TRUE(consistent(conjoin(family, sub)).consistent);
        }
        auto mins = minimal_inconsistent_subfamilies(family, family.size());
        EXPECT_TRUE(std::find(mins.begin(), mins.end(), *w) != mins.end());
    }
    EXPECT_GT(checked, 0);
}
