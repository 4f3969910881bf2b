#include <shearlab/eq_extension.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace shearlab;

namespace {

IndexModel dense(int n) {
    std::vector<Rational> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(i);
    return singleton_predicate_cut(ClassDescriptor::linear_orders(), pts);
}

IndexModel singleton(int n) {
    std::vector<Rational> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(i);
    return singleton_predicate_cut(ClassDescriptor::with_predicates(), pts);
}

std::vector<InvariantRelation> example_fragment(const IndexModel& m) {
    return {tuple_relation(m, 2, {{0, 0}}), tuple_relation(m, 2, {{1, 1}})};
}

std::vector<Tuple> short_tuples(const std::vector<VertexId>& xs, std::size_t max_len) {
    std::vector<Tuple> out{{}};
    for (auto x : xs) out.push_back({x});
    if (max_len >= 2)
        for (auto x : xs)
            for (auto y : xs) out.push_back({x, y});
    return out;
}

/**
 * For the example fragment every element stands for one base point (itself, or the determined
 * coordinate of its class). Two elements agree over s exactly when they have the same sort, the
 * same equalities with s and the same order relations between their points.
 */
std::vector<int> fingerprint(const EqExtension& ext, VertexId e, const Tuple& s) {
    auto point = [&](VertexId x) {
        if (ext.is_base(x)) return x;
        const auto& c = ext.cls(x);
        for (const auto& d : c.determined)
            if (d) return *d;
        throw std::logic_error("class without a determined coordinate");
    };
    std::vector<int> out{static_cast<int>(ext.sort(e))};
    for (auto y : s) {
        out.push_back(y == e);
        out.push_back(compare(ext.base.coord(point(e)), ext.base.coord(point(y))));
    }
    return out;
}

/** Brute dcl for point-only structures: try a fresh vertex in every gap with the element's label. */
bool brute_second_realization(const IndexModel& m, const Tuple& s, VertexId e) {
    std::vector<Rational> coords;
    for (const auto& v : m.vertices()) coords.push_back(v.coord);
    std::sort(coords.begin(), coords.end());
    std::vector<Rational> gaps{coords.front() - 1, coords.back() + 1};
    for (std::size_t i = 0; i + 1 < coords.size(); ++i) gaps.push_back((coords[i] + coords[i + 1]) / 2);
    auto pattern = [&](const IndexModel& J, VertexId x) {
        std::vector<int> out;
        for (auto y : s) out.push_back(compare(J.coord(x), J.coord(y)));
        return out;
    };
    VertexId fresh = 0;
    for (const auto& v : m.vertices()) fresh = std::max<VertexId>(fresh, v.id + 1);
    for (const auto& g : gaps) {
        IndexModel J = m;
        J.add_vertex(fresh, g, m.pred(e));
        if (pattern(J, fresh) == pattern(m, e)) return true;
    }
    return false;
}

} // namespace

TEST(EqExtension, EqualityAloneIsTheBase) {
    IndexModel m = dense(4);
    EqExtension ext = build_eq_extension(m, {});
    EXPECT_TRUE(ext.classes.empty());
    EXPECT_EQ(ext.relations.size(), 1u);
    EXPECT_EQ(ext.elements().size(), m.size());
    for (const auto& v : m.vertices()) {
        EXPECT_TRUE(ext.is_base(v.id));
        EXPECT_EQ(ext.sort(v.id), 0u);
        EXPECT_EQ(ext.maps[0].at({v.id}), v.id);
        EXPECT_EQ(ext.representative(v.id), Tuple{v.id});
    }
}

TEST(EqExtension, ClassCountsMatchThePartitions) {
    IndexModel m = dense(6);
    EqExtension ext = build_eq_extension(m, example_fragment(m));
    EXPECT_EQ(ext.classes.size(), 12u);
    for (const auto& c : ext.classes) {
        EXPECT_EQ(c.members.size(), 6u);
        ASSERT_EQ(c.determined.size(), 2u);
        EXPECT_EQ(c.determined[0].has_value(), c.relation == 1);
        EXPECT_EQ(c.determined[1].has_value(), c.relation == 2);
        for (const auto& t : c.members) EXPECT_EQ(ext.maps[c.relation].at(t), c.id);
    }
    // one relation per subset of coordinates
    IndexModel s3 = singleton(3);
    EqExtension coords = build_eq_extension(s3, coordinate_equivalences(s3, 2));
    std::map<std::size_t, std::size_t> per_relation;
    for (const auto& c : coords.classes) ++per_relation[c.relation];
    EXPECT_EQ(per_relation[1], 1u);
    EXPECT_EQ(per_relation[2], 3u);
    EXPECT_EQ(per_relation[3], 3u);
    EXPECT_EQ(per_relation[4], 9u);
    EXPECT_EQ(coords.classes.size(), 16u);
    IndexModel s2 = singleton(2);
    EXPECT_EQ(build_eq_extension(s2, coordinate_equivalences(s2, 2)).classes.size(), 1u + 2u + 2u + 4u);
}

TEST(EqExtension, ClassIdsFollowTheBaseAndAreLeastRepresentativeFirst) {
    IndexModel m = dense(3);
    EqExtension ext = build_eq_extension(m, example_fragment(m));
    VertexId expected = static_cast<VertexId>(m.size());
    for (const auto& c : ext.classes) {
        EXPECT_EQ(c.id, expected++);
        EXPECT_EQ(c.representative, c.members.front());
        EXPECT_EQ(ext.representative(c.id), c.representative);
    }
}

TEST(EqExtension, RejectsNonEquivalencesAndBadArities) {
    IndexModel m = dense(3);
    EXPECT_THROW(build_eq_extension(m, {tuple_relation(m, 2, {{0, 1}})}), std::invalid_argument);
    InvariantRelation bad = tuple_relation(m, 1, {});
    bad.arity = 0;
    EXPECT_THROW(build_eq_extension(m, {bad}), std::invalid_argument);
}

TEST(EqExtension, LiftedRelationsMustBeClassInvariant) {
    IndexModel m = dense(4);
    auto rels = example_fragment(m);
    auto lt = [&](std::size_t pa, std::size_t pb) {
        return lift_relation(m, "lt", {1, 1}, {1, 2, 2}, [&, pa, pb](const std::vector<Tuple>& ts) {
            return m.coord(ts[0][pa]) < m.coord(ts[1][pb]);
        });
    };
    EqExtension ext = build_eq_extension(m, rels, {lt(0, 0)});
    const auto& cs = ext.classes;
    std::size_t checked = 0;
    for (const auto& a : cs)
        for (const auto& b : cs) {
            if (a.relation != 1 || b.relation != 1) continue;
            bool expected = m.coord(*a.determined[0]) < m.coord(*b.determined[0]);
            EXPECT_EQ(detail::lifted_holds(ext, ext.lifted[0], {a.id, b.id}), expected);
            ++checked;
        }
    EXPECT_EQ(checked, 16u);
    EXPECT_THROW(build_eq_extension(m, rels, {lt(1, 0)}), std::invalid_argument);
    auto unknown = lift_relation(m, "u", {0}, {1}, [](const std::vector<Tuple>&) { return true; });
    unknown.sorts = {7};
    EXPECT_THROW(build_eq_extension(m, rels, {unknown}), std::invalid_argument);
}

TEST(EqExtension, LiftedAtomsEnterTheTypeCode) {
    IndexModel m = dense(4);
    auto lt = lift_relation(m, "lt", {1, 1}, {1, 2, 2},
                            [&](const std::vector<Tuple>& ts) { return m.coord(ts[0][0]) < m.coord(ts[1][0]); });
    EqExtension ext = build_eq_extension(m, example_fragment(m), {lt});
    std::vector<VertexId> e1;
    for (const auto& c : ext.classes)
        if (c.relation == 1) e1.push_back(c.id);
    // the least and greatest E1 classes differ over the second one
    EXPECT_NE(eq_type_code(ext, e1.front(), {e1[1]}), eq_type_code(ext, e1.back(), {e1[1]}));
    EXPECT_EQ(eq_type_code(ext, e1[2], {e1[1]}), eq_type_code(ext, e1[3], {e1[1]}));
}

TEST(Indistinguishable, AgreesWithTheFingerprintOracle) {
    for (int n : {3, 5}) {
        IndexModel m = dense(n);
        EqExtension ext = build_eq_extension(m, example_fragment(m));
        for (const auto& s : short_tuples(ext.elements(), 2)) {
            std::map<std::vector<int>, VertexId> seen;
            bool collision = false;
            for (auto e : ext.elements()) collision = !seen.emplace(fingerprint(ext, e, s), e).second || collision;
            auto res = find_indistinguishable_pair(ext, s);
            ASSERT_EQ(res.pair.has_value(), collision);
            if (!res.pair) continue;
            auto [a, b] = *res.pair;
            EXPECT_NE(a, b);
            EXPECT_EQ(fingerprint(ext, a, s), fingerprint(ext, b, s));
            EXPECT_EQ(eq_type_code(ext, a, s), eq_type_code(ext, b, s));
        }
    }
}

TEST(Indistinguishable, DenseHasAPairForEveryShortSequence) {
    IndexModel m = dense(6);
    EqExtension ext = build_eq_extension(m, example_fragment(m));
    std::size_t tested = 0;
    for (const auto& s : short_tuples(ext.elements(), 2)) {
        ++tested;
        auto res = find_indistinguishable_pair(ext, s);
        ASSERT_TRUE(res.pair.has_value()) << tested;
        EXPECT_LE(res.candidates, res.bound);
    }
    EXPECT_EQ(tested, 1u + 18u + 18u * 18u);
}

TEST(Indistinguishable, SingletonPredicatesLeaveNone) {
    IndexModel m = singleton(2);
    for (const auto& rels : {std::vector<InvariantRelation>{}, example_fragment(m), coordinate_equivalences(m, 2)}) {
        EqExtension ext = build_eq_extension(m, rels);
        for (const auto& s : short_tuples(ext.elements(), 2)) {
            auto res = find_indistinguishable_pair(ext, s);
            EXPECT_FALSE(res.pair.has_value());
            EXPECT_EQ(res.candidates, ext.elements().size());
        }
    }
    // one total class of pairs sits alone in its sort
    IndexModel m3 = singleton(3);
    EqExtension total = build_eq_extension(m3, {tuple_relation(m3, 2, {})});
    ASSERT_EQ(total.classes.size(), 1u);
    EXPECT_FALSE(find_indistinguishable_pair(total, {}).pair.has_value());
}

TEST(Indistinguishable, CandidateBoundIsHonoured) {
    IndexModel m = dense(6);
    EqExtension ext = build_eq_extension(m, example_fragment(m));
    auto capped = find_indistinguishable_pair(ext, {}, 1);
    EXPECT_EQ(capped.bound, 1u);
    EXPECT_EQ(capped.candidates, 1u);
    EXPECT_FALSE(capped.pair.has_value());
}

TEST(Closure, MembersOfTheParameterSetAreInside) {
    IndexModel m = singleton(3);
    for (auto kind : {ClosureKind::dcl, ClosureKind::acl}) {
        auto rep = closure(m, {0, 2}, 2, kind, 4);
        EXPECT_EQ(rep.status, ClosureStatus::inside);
        EXPECT_EQ(rep.bound_used, 1u);
        EXPECT_EQ(rep.witnesses, std::vector<VertexId>{2});
    }
}

TEST(Closure, SingletonPredicateElementIsOutsideDclOverNothing) {
    IndexModel m = singleton(3);
    auto rep = closure(m, {}, 1, ClosureKind::dcl, 4);
    EXPECT_EQ(rep.status, ClosureStatus::outside);
    EXPECT_EQ(rep.bound_used, 2u);
    ASSERT_EQ(rep.witnesses.size(), 2u);
    EXPECT_EQ(rep.witnesses.front(), 1u);
}

TEST(Closure, AgreesWithBruteGapPlacement) {
    for (const auto& m : {dense(4), singleton(4)}) {
        std::vector<VertexId> ids;
        for (const auto& v : m.vertices()) ids.push_back(v.id);
        for (const auto& s : short_tuples(ids, 2))
            for (auto e : ids) {
                auto rep = closure(m, s, e, ClosureKind::dcl, 4);
                bool in_s = std::find(s.begin(), s.end(), e) != s.end();
                bool outside = !in_s && brute_second_realization(m, s, e);
                EXPECT_EQ(rep.status == ClosureStatus::outside, outside);
                EXPECT_NE(rep.status, ClosureStatus::undetermined_at_bound);
            }
    }
}

TEST(Closure, DclInsideAclAndMonotone) {
    IndexModel m = dense(4);
    std::vector<VertexId> ids;
    for (const auto& v : m.vertices()) ids.push_back(v.id);
    auto inside = [&](const Tuple& s, VertexId e, ClosureKind k) { return closure(m, s, e, k, 5).status == ClosureStatus::inside; };
    for (const auto& s : short_tuples(ids, 2))
        for (auto e : ids) {
            if (inside(s, e, ClosureKind::dcl)) {
                EXPECT_TRUE(inside(s, e, ClosureKind::acl));
            }
            for (auto extra : ids) {
                Tuple wider = s;
                wider.push_back(extra);
                EXPECT_TRUE(!inside(s, e, ClosureKind::acl) || inside(wider, e, ClosureKind::acl));
                EXPECT_TRUE(!inside(s, e, ClosureKind::dcl) || inside(wider, e, ClosureKind::dcl));
            }
        }
}

TEST(Closure, AclReportsTheBoundItUsed) {
    IndexModel m = dense(3);
    auto rep = closure(m, {0}, 1, ClosureKind::acl, 5);
    EXPECT_EQ(rep.status, ClosureStatus::outside);
    EXPECT_EQ(rep.bound_used, 5u);
    std::set<VertexId> distinct(rep.witnesses.begin(), rep.witnesses.end());
    EXPECT_EQ(distinct.size(), 5u);
    auto tight = closure(m, {0}, 1, ClosureKind::acl, 1);
    EXPECT_EQ(tight.status, ClosureStatus::undetermined_at_bound);
    EXPECT_THROW(closure(m, {}, 99, ClosureKind::dcl, 2), std::out_of_range);
    EXPECT_THROW(closure(m, {99}, 0, ClosureKind::dcl, 2), std::out_of_range);
}

TEST(CoordinateEquivalences, OnePerSubsetOfPositions) {
    IndexModel m = dense(3);
    auto rels = coordinate_equivalences(m, 3);
    EXPECT_EQ(rels.size(), 8u);
    for (const auto& r : rels) EXPECT_EQ(r.arity, 3u);
    EXPECT_NO_THROW(build_eq_extension(m, coordinate_equivalences(m, 2)));
}
