#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mhgf/errors.hpp"
#include "support.hpp"

using namespace mhgf;

namespace {

Rule random_rule(std::mt19937_64& rng) {
    static const char* labels[] = {"a", "b", nullptr};
    static const char* vars[] = {"X", "Y", "Z"};
    Pattern p;
    std::size_t k = 1 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) {
        const char* l = labels[rng() % 3];
        p.vertices.push_back({vars[i], l ? std::optional<Label>(Label(l)) : std::nullopt, 1});
    }
    std::size_t m = rng() % 3;
    for (std::size_t e = 0; e < m; ++e) {
        PatternEdge pe{Label(rng() % 2 ? "e" : "f"), {}, static_cast<Count>(1 + rng() % 2)};
        std::size_t arity = 1 + rng() % 2;
        for (std::size_t j = 0; j < arity; ++j) pe.vars.push_back(vars[rng() % k]);
        std::sort(pe.vars.begin(), pe.vars.end());
        bool repeat = false;
        for (const auto& q : p.edges) repeat = repeat || (q.label == pe.label && q.vars == pe.vars);
        if (!repeat) p.edges.push_back(pe);
    }
    return Rule("r", p, {});
}

Domain mini() { return bookshelf_mini_domain(); }

const Rule& rule(const Domain& d, const std::string& name) {
    const Rule* r = d.find_rule(name);
    if (!r) throw std::runtime_error("no rule " + name);
    return *r;
}

}  // namespace

TEST(Rule, ValidationNamesRule) {
    Pattern p{{{"A", Label("agent"), 1}}, {{Label("at"), {"A", "B"}, 1}}};
    try {
        Rule("broken", p, {});
        FAIL() << "expected SemanticError";
    } catch (const SemanticError& e) {
        EXPECT_EQ(e.identifier(), "broken");
    }
    Pattern ok{{{"A", Label("agent"), 1}}, {{Label("at"), {"A"}, 1}}};
    EXPECT_THROW(Rule("r", ok, {{{3, 1}}, {}}), SemanticError);
    EXPECT_THROW(Rule("r", ok, {{{0, 2}}, {}}), SemanticError);
    EXPECT_THROW(Rule("r", ok, {{}, {{Label("at"), {"Q"}, 1}}}), SemanticError);
    EXPECT_THROW(Rule("r", ok, {}, LiftedEffect{"Q", "g"}), SemanticError);
    EXPECT_EQ(Rule("r", ok, {}).action(), "r");
    EXPECT_EQ(Rule("r", ok, {}, std::nullopt, "act").action(), "act");
}

TEST(Matching, OneMatchPerAutomorphismOrbit) {
    std::mt19937_64 rng(21);
    std::size_t nonempty = 0;
    for (int i = 0; i < 400; ++i) {
        auto g = test::random_graph(rng, 1 + rng() % 5, rng() % 7);
        auto r = random_rule(rng);
        auto brute = test::brute_matches(r, g);
        auto expected = test::orbit_count(brute, test::brute_automorphisms(g));
        auto got = find_matches(r, g);
        ASSERT_EQ(got.size(), expected) << "case " << i;
        for (const auto& m : got)
            ASSERT_NE(std::find(brute.begin(), brute.end(), m), brute.end()) << "case " << i;
        nonempty += !got.empty();
    }
    EXPECT_GT(nonempty, 100u);
}

TEST(Matching, WildcardMatchesAnyLabel) {
    auto d = mini();
    auto g = d.initial.ground();
    // take: agent on the floor picks up the screwdriver lying there
    auto ms = find_matches(rule(d, "take"), g);
    ASSERT_EQ(ms.size(), 1u);
    auto ids = ms[0].by_id(rule(d, "take"), *g.table());
    EXPECT_EQ(ids["P"], "floor");
    EXPECT_EQ(ids["O"], "screwdriver");
}

TEST(Apply, TakeMovesObjectIntoHand) {
    auto d = mini();
    auto g = d.initial.ground();
    const auto& take = rule(d, "take");
    auto h = apply(take, find_matches(take, g)[0], g);
    const auto& t = *h.table();
    EXPECT_EQ(h.multiplicity(t.key_of({Label("holds"), {"agent", "screwdriver"}, 1})), 1);
    EXPECT_EQ(h.multiplicity(t.key_of({Label("at"), {"screwdriver", "floor"}, 1})), 0);
}

TEST(Apply, EffectAndIntegrityErrors) {
    auto d = mini();
    auto g = d.initial.ground();
    const auto& take = rule(d, "take");
    Match bogus{{0, 0, 0}};
    EXPECT_THROW(apply(take, bogus, g), EffectError);

    Pattern p{{{"O", Label("screwdriver"), 1}, {"P", std::nullopt, 1}}, {{Label("at"), {"O", "P"}, 1}}};
    Rule lose("lose", p, {{{0, 1}}, {}});
    try {
        apply(lose, find_matches(lose, g)[0], g);
        FAIL() << "expected IntegrityError";
    } catch (const IntegrityError& e) {
        EXPECT_EQ(e.subject(), "lose");
    }
}

TEST(Successors, SharesSumToOne) {
    auto d = mini();
    auto g = d.initial.ground();
    for (const auto& r : d.rules) {
        auto s = successors(r, g);
        if (s.empty()) continue;
        double total = 0.0;
        for (const auto& x : s) total += x.probability;
        EXPECT_NEAR(total, 1.0, 1e-12) << r.name();
    }
    EXPECT_EQ(successors(rule(d, "move"), g).size(), 1u);
    EXPECT_TRUE(successors(rule(d, "installEccentric"), g).empty());
}

TEST(LiftedApply, GroupArithmetic) {
    auto d = test::fixture("eccentric-shelf");
    auto res = lifted_apply_detailed(d.rules[0], d.initial);
    EXPECT_EQ(res.applicability, Applicability::always);
    EXPECT_EQ(res.path, LiftPath::lifted_effect);
    ASSERT_EQ(res.successors.size(), 1u);
    const auto& l = res.successors[0].state;
    EXPECT_DOUBLE_EQ(res.successors[0].probability, 1.0);
    ASSERT_EQ(l.groups().size(), 1u);
    EXPECT_EQ(l.groups()[0].tag, "eccentric-installed");
    EXPECT_EQ(l.groups()[0].total, 5);
    auto at = [&](const char* place) {
        return l.bounded()[*l.find_bounded(l.table()->key_of({Label("at"), {"eccentric", place}, 1}))];
    };
    EXPECT_EQ(at("shelf-top").upper, 3);
    EXPECT_EQ(at("shelf-bottom").upper, 5);
    EXPECT_EQ(at("shelf-bottom").lower, 2);
    EXPECT_EQ(count_groundings(l), 4u);
}

TEST(LiftedApply, FiveHolesStayOneLiftedState) {
    auto d = test::fixture("five-holes");
    const auto& r = rule(d, "installEccentric");
    auto once = lifted_apply_detailed(r, d.initial);
    EXPECT_EQ(once.path, LiftPath::lifted_effect);
    ASSERT_EQ(once.successors.size(), 1u);
    EXPECT_EQ(count_groundings(once.successors[0].state), 5u);
    auto twice = lifted_apply_detailed(r, once.successors[0].state);
    ASSERT_EQ(twice.successors.size(), 1u);
    EXPECT_EQ(count_groundings(twice.successors[0].state), 10u);
    EXPECT_NEAR(test::commutation_gap(r, d.initial), 0.0, 1e-12);
    EXPECT_NEAR(test::commutation_gap(r, once.successors[0].state), 0.0, 1e-12);
}

TEST(LiftedApply, RigidRouteCarriesBoundsOver) {
    auto d = test::fixture("five-holes");
    auto l = lifted_apply(rule(d, "installEccentric"), d.initial)[0].state;
    auto res = lifted_apply_detailed(rule(d, "move"), l);
    EXPECT_EQ(res.path, LiftPath::rigid);
    ASSERT_EQ(res.successors.size(), 1u);
    EXPECT_EQ(count_groundings(res.successors[0].state), 5u);
    EXPECT_EQ(res.successors[0].state.bounded().size(), l.bounded().size());
}

TEST(LiftedApply, GroundStatesAgreeWithSuccessors) {
    auto d = mini();
    auto g = d.initial.ground();
    auto l = LiftedMultiHypergraph::from_ground(g);
    for (const auto& r : d.rules) {
        auto ls = lifted_apply(r, l);
        auto gs = successors(r, g);
        ASSERT_EQ(ls.size(), gs.size()) << r.name();
        for (std::size_t i = 0; i < ls.size(); ++i) {
            EXPECT_EQ(ls[i].form, gs[i].form);
            EXPECT_NEAR(ls[i].probability, gs[i].probability, 1e-12);
        }
    }
}

TEST(LiftedApply, CommutesWithGroundingOnReachableStates) {
    for (const auto& d : {bookshelf_mini_domain(), bookshelf_domain()}) {
        std::size_t checked = 0;
        for (const auto& l : test::reachable_lifted(d, 500, 3, 20)) {
            if (count_groundings(l) > 300 || checked == 40) continue;
            for (const auto& r : d.rules) {
                double gap = test::commutation_gap(r, l);
                ASSERT_GE(gap, 0.0) << r.name() << ": applicability differs";
                ASSERT_LE(gap, 1e-12) << r.name();
            }
            ++checked;
        }
        EXPECT_GT(checked, 5u) << d.name;
    }
}

TEST(LiftedApply, ExactRouteRespectsCap) {
    auto d = test::fixture("eccentric-shelf");
    EXPECT_THROW(lifted_apply_exact(d.rules[0], d.initial, 2), EnumerationLimitError);
}
