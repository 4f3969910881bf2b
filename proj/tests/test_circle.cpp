#include <shearlab/circle.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace shearlab;

namespace {

IndexModel order(int count) {
    std::vector<Rational> pts;
    for (int i = 0; i < count; ++i) pts.emplace_back(i);
    return singleton_predicate_cut(ClassDescriptor::linear_orders(), pts);
}

IndexModel labelled(int count) {
    std::vector<Rational> pts;
    for (int i = 0; i < count; ++i) pts.emplace_back(i);
    return singleton_predicate_cut(ClassDescriptor::with_predicates(), pts);
}

/**
 * Clauses checked on explicit partitions: E1 and E2 are equivalences on Y, F induces a nonempty
 * partial injective map from E1-classes to E2-classes, and no realization is F-related to itself.
 */
bool brute_circle(const std::vector<Tuple>& Y, const EqualityPattern& e1, const EqualityPattern& e2, const EqualityPattern& f) {
    if (Y.size() < 2) return false;
    const std::size_t n = Y.size();
    auto classes = [&](const EqualityPattern& p, std::vector<std::size_t>& cls) {
        cls.assign(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            std::size_t c = a;
            for (std::size_t b = 0; b < a; ++b)
                if (pattern_holds(p, Y[a], Y[b])) {
                    c = cls[b];
                    break;
                }
            cls[a] = c;
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (pattern_holds(p, Y[a], Y[b]) != (cls[a] == cls[b])) return false;
        return true;
    };
    std::vector<std::size_t> c1, c2;
    if (!classes(e1, c1) || !classes(e2, c2)) return false;
    std::map<std::size_t, std::set<std::size_t>> image, preimage;
    std::set<std::pair<std::size_t, std::size_t>> related;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (pattern_holds(f, Y[a], Y[b])) {
                image[c1[a]].insert(c2[b]);
                preimage[c2[b]].insert(c1[a]);
                related.insert({c1[a], c2[b]});
            }
    if (related.empty()) return false;
    // F must be a union of full class products
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (related.count({c1[a], c2[b]}) && !pattern_holds(f, Y[a], Y[b])) return false;
    for (const auto& [k, v] : image)
        if (v.size() != 1) return false;
    for (const auto& [k, v] : preimage)
        if (v.size() != 1) return false;
    for (std::size_t a = 0; a < n; ++a)
        if (pattern_holds(f, Y[a], Y[a])) return false;
    return true;
}

} // namespace

TEST(CircleWitness, LinearOrderWitnessPasses) {
    IndexModel J = order(6);
    auto w = linear_order_witness(J, {0, 1});
    auto check = check_circle_witness(w, J);
    EXPECT_TRUE(check.ok());
    EXPECT_EQ(check.realizations, 15u);
    EXPECT_THROW(linear_order_witness(J, {0}), std::invalid_argument);
}

TEST(CircleWitness, ReportsEachClauseKind) {
    IndexModel J = order(5);
    PairCodes pc = compute_pair_codes(J, qf_type_of(J, {0, 1}, {}), {});
    auto rel = [&](const EqualityPattern& p) { return coordinate_relation(pc, {}, 2, p); };
    auto kinds = [&](CircleWitness w) {
        std::set<std::string> out;
        for (const auto& v : check_circle_witness(w, J).violations) out.insert(v.kind);
        return out;
    };
    EXPECT_TRUE(kinds({{}, {0, 1}, rel({{0, 1}}), rel({{1, 1}}), rel({{0, 1}})}).count("not-equivalence"));
    EXPECT_TRUE(kinds({{}, {0, 1}, rel({{0, 0}}), rel({{1, 1}}), rel({{0, 0}, {1, 1}})}).count("fixed-point"));
    EXPECT_TRUE(kinds({{}, {0, 1}, rel({{0, 0}}), rel({{1, 1}}), rel({{1, 0}, {0, 1}})}).count("empty"));
    EXPECT_TRUE(kinds({{}, {0, 1}, rel({{0, 0}}), rel({}), rel({{0, 1}})}).count("not-well-defined"));
    IndexModel one = order(2);
    EXPECT_TRUE(check_circle_witness(linear_order_witness(one, {0, 1}), one).violations.front().kind ==
                "insufficient-realizations");
}

TEST(CircleWitness, RejectsMismatchedShapes) {
    IndexModel J = order(4);
    auto w = linear_order_witness(J, {0, 1});
    w.E1.arity = 3;
    EXPECT_THROW(check_circle_witness(w, J), std::invalid_argument);
}

TEST(CircleProperty, CheckerAgreesWithPartitionOracle) {
    std::mt19937_64 rng(31);
    auto patterns = detail::all_patterns(2);
    std::size_t passing = 0, total = 0;
    for (int trial = 0; trial < 12; ++trial) {
        IndexModel base = trial % 2 ? order(4) : labelled(4);
        Tuple s = trial % 3 == 0 ? Tuple{} : Tuple{static_cast<VertexId>(rng() % 4)};
        Tuple rest;
        for (auto v : base.by_coord())
            if (std::find(s.begin(), s.end(), v) == s.end()) rest.push_back(v);
        std::shuffle(rest.begin(), rest.end(), rng);
        Tuple t(rest.begin(), rest.begin() + 2);
        std::sort(t.begin(), t.end());
        IndexModel J = duplicate_realizations(base, s, t, 8);
        PairCodes pc = compute_pair_codes(J, qf_type_of(J, t, s), s);
        std::set<std::tuple<EqualityPattern, EqualityPattern, EqualityPattern>> brute;
        for (const auto& e1 : patterns)
            for (const auto& e2 : patterns)
                for (const auto& f : patterns)
                    if (brute_circle(pc.Y, e1, e2, f)) brute.insert({e1, e2, f});
        std::size_t candidates = 0;
        std::set<std::tuple<EqualityPattern, EqualityPattern, EqualityPattern>> found;
        for (const auto& cw : context_witnesses(J, s, t, candidates)) found.insert({cw.e1, cw.e2, cw.f});
        EXPECT_EQ(found, brute);
        for (int sample = 0; sample < 40; ++sample) {
            const auto& e1 = patterns[rng() % patterns.size()];
            const auto& e2 = patterns[rng() % patterns.size()];
            const auto& f = sample % 4 == 0 ? EqualityPattern{{0, 1}} : patterns[rng() % patterns.size()];
            CircleWitness w{s, t, coordinate_relation(pc, s, 2, e1), coordinate_relation(pc, s, 2, e2),
                            coordinate_relation(pc, s, 2, f)};
            bool fast = check_circle_witness(w, J).ok();
            EXPECT_EQ(fast, brute.count({e1, e2, f}) > 0) << pattern_name(e1) << " | " << pattern_name(e2) << " | " << pattern_name(f);
            ++total;
        }
        passing += brute.size();
    }
    EXPECT_GT(passing, 0u);
    EXPECT_GT(total, 0u);
}

TEST(CircleProperty, NoFixedPointHoldsAcrossRealizations) {
    IndexModel J = duplicate_realizations(order(5), {}, {1, 3}, 8);
    std::size_t candidates = 0;
    for (const auto& cw : context_witnesses(J, {}, {1, 3}, candidates)) {
        PairCodes pc = compute_pair_codes(J, qf_type_of(J, cw.witness.t, {}), {});
        for (std::size_t a = 0; a < pc.Y.size(); ++a) EXPECT_FALSE(cw.witness.F.holds(pc.code[a][a]));
    }
}

TEST(DuplicateRealizations, StaysWithinBoundAndKeepsTheBase) {
    IndexModel base = order(4);
    IndexModel J = duplicate_realizations(base, {0}, {1, 2}, 8);
    EXPECT_LE(J.size(), 8u);
    EXPECT_GE(enumerate_realizations(J, qf_type_of(base, {1, 2}, {0}), {0}).size(), 2u);
    for (const auto& v : base.vertices()) EXPECT_TRUE(J.contains(v.id));
    EXPECT_TRUE(validate_structure(J).ok());
}

TEST(SearchCircle, DenseOrderHasAWitnessAtPairs) {
    IndexModel base = order(4);
    auto res = search_circle_witness(base.cls(), base, {2, 0, 8});
    ASSERT_TRUE(res.witness);
    EXPECT_EQ(res.witness->t.size(), 2u);
    EXPECT_TRUE(check_circle_witness(*res.witness, *res.J).ok());
    EXPECT_EQ(res.e1, (EqualityPattern{{0, 0}}));
    EXPECT_EQ(res.e2, (EqualityPattern{{1, 1}}));
    EXPECT_EQ(res.f, (EqualityPattern{{0, 1}}));
}

TEST(SearchCircle, SingletonPredicatesHaveNone) {
    IndexModel base = labelled(4);
    auto res = search_circle_witness(base.cls(), base, {2, 1, 8});
    EXPECT_FALSE(res.witness);
    EXPECT_GT(res.contexts, 0u);
    EXPECT_GT(res.candidates, 0u);
}

TEST(SearchCircle, RejectsForeignBase) {
    EXPECT_THROW(search_circle_witness(ClassDescriptor::with_predicates(), order(3), {}), std::invalid_argument);
}

TEST(Bridges, LinearOrderRoundTrip) {
    IndexModel J = order(6);
    auto w = linear_order_witness(J, {0, 1});
    auto inst = circle_to_shearing(w, J);
    EXPECT_EQ(inst.theory.kind, TheoryKind::random_graph);
    auto rep = check_shearing(inst, J);
    EXPECT_TRUE(rep.valid());
    EXPECT_TRUE(rep.single_consistent);
    EXPECT_TRUE(check_labeling_coherence(inst.labeling, J, inst.s, inst.r).ok);
    auto sp = check_strong_pairwise(inst, J);
    EXPECT_TRUE(sp.ok);
    EXPECT_TRUE(sp.unmatched.empty());
    auto back = shearing_to_circle(inst, J);
    EXPECT_TRUE(check_circle_witness(back, J).ok());
    EXPECT_TRUE(same_relations(w, back, J));
}

TEST(Bridges, InvalidWitnessIsRefused) {
    IndexModel J = order(5);
    auto w = linear_order_witness(J, {0, 1});
    w.F = w.E1;
    EXPECT_THROW(circle_to_shearing(w, J), std::invalid_argument);
}

TEST(Bridges, OnlyRandomGraphInstancesGoBack) {
    auto demo = build_demo_instance({DemoKind::t32});
    EXPECT_THROW(shearing_to_circle(demo.instance, demo.J), std::invalid_argument);
}

TEST(StrongPairwise, AddsMissingPartners) {
    // in three points the pair (0, 2) shares no endpoint crosswise with another pair
    IndexModel J = order(3);
    auto w = linear_order_witness(J, {0, 1});
    auto inst = circle_to_shearing(w, J);
    auto sp = check_strong_pairwise(inst, J);
    EXPECT_TRUE(sp.ok);
    EXPECT_GT(sp.partners_added, 0u);
    EXPECT_GT(sp.J.size(), J.size());
    auto none = check_strong_pairwise(inst, J, 0);
    EXPECT_FALSE(none.ok);
    EXPECT_EQ(none.unmatched, (std::vector<Tuple>{{0, 2}}));
}
