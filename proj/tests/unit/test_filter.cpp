#include <gtest/gtest.h>

#include <cmath>

#include "mhgf/errors.hpp"
#include "support.hpp"

using namespace mhgf;

namespace {

AnnotationTuple tuple(std::string action, const char* lt, const char* ln, HeldMap ht = {}, HeldMap hn = {}) {
    return {std::move(action), Label(lt), Label(ln), std::move(ht), std::move(hn)};
}

HeldMap held(std::initializer_list<std::pair<const char*, Count>> xs) {
    HeldMap m;
    for (auto [k, v] : xs) m[Label(k)] = v;
    return m;
}

}  // namespace

TEST(ActionModel, UniformAndWeighted) {
    auto d = bookshelf_domain();
    std::vector<const Rule*> rs{d.find_rule("take"), d.find_rule("move"), d.find_rule("installEccentric")};
    auto p = d.action_model.distribution(rs);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(p[0], 4.0 / 13.0, 1e-15);
    EXPECT_NEAR(p[2], 8.0 / 13.0, 1e-15);
    ActionModel u;
    auto q = u.distribution(rs);
    for (double x : q) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
    ActionModel zero{ActionModel::Kind::weighted, {{"take", 0.0}}};
    auto z = zero.distribution({d.find_rule("take")});
    EXPECT_EQ(z[0], 0.0);
    EXPECT_TRUE(u.distribution({}).empty());
}

TEST(Observer, ValidatesAndReads) {
    auto d = bookshelf_mini_domain();
    Observer obs(d.observation, d.initial.table());
    auto g = d.initial.ground();
    EXPECT_EQ(obs.location_of(g), Label("floor"));
    EXPECT_TRUE(obs.held_by(g).empty());
    EXPECT_TRUE(obs.consistent(g, Label("floor"), {}));
    EXPECT_FALSE(obs.consistent(g, Label("table"), {}));
    EXPECT_FALSE(obs.consistent(g, Label("floor"), held({{"screwdriver", 1}})));
    EXPECT_THROW(obs.validate(tuple("move", "attic", "floor")), InputError);
    EXPECT_THROW(obs.validate(tuple("move", "floor", "table", held({{"eccentric", -1}}))), InputError);
    EXPECT_NO_THROW(obs.validate(tuple("move", "floor", "table")));

    ObservationModel bad = d.observation;
    bad.agent = "ghost";
    EXPECT_THROW(Observer(bad, d.initial.table()), SemanticError);
}

TEST(Observer, RestrictionSharesAreExact) {
    auto d = test::fixture("eccentric-shelf");
    Observer obs(d.observation, d.initial.table());
    auto same = obs.restrict(d.initial, Label("table"), held({{"eccentric", 1}, {"screwdriver", 1}}));
    ASSERT_EQ(same.size(), 1u);
    EXPECT_TRUE(same[0].unchanged);
    EXPECT_DOUBLE_EQ(same[0].share, 1.0);
    EXPECT_TRUE(obs.restrict(d.initial, Label("floor"), held({{"eccentric", 1}, {"screwdriver", 1}})).empty());
}

TEST(Filter, FiveHolesEndsInOneLiftedState) {
    auto d = test::fixture("five-holes");
    auto r = filter_trace(d, test::fixture_trace("five-holes"));
    ASSERT_EQ(r.beliefs.size(), 3u);
    ASSERT_EQ(r.stats.size(), 3u);
    EXPECT_EQ(r.stats[0].step, 0u);
    EXPECT_EQ(r.stats[2].step, 2u);
    EXPECT_EQ(r.beliefs.back().size(), 1u);
    EXPECT_EQ(r.beliefs.back().ground_count(), 10u);
    auto g = expand(r.beliefs.back());
    EXPECT_EQ(g.size(), 10u);
    for (const auto& [form, e] : g.entries()) EXPECT_NEAR(e.weight, 0.1, 1e-12);
}

TEST(Filter, BeliefsStayNormalized) {
    auto d = bookshelf_mini_domain();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r = filter_trace(d, generate_trace(d, seed, 20).tuples);
        for (const auto& b : r.beliefs) EXPECT_NEAR(b.total(), 1.0, 1e-12);
        for (const auto& s : r.stats) {
            EXPECT_LE(s.log_z, 1e-12);
            EXPECT_TRUE(std::isfinite(s.log_z));
        }
    }
}

TEST(Filter, InconsistencyCarriesStepAndKeepsBelief) {
    auto d = bookshelf_mini_domain();
    auto g = generate_trace(d, 4, 12, 6);
    ASSERT_EQ(g.corrupted_at, std::optional<std::size_t>(6));
    LiftedFilter f(d);
    for (std::size_t k = 0; k < 5; ++k) f.step(g.tuples[k]);
    auto before = f.belief().entries().begin()->first;
    try {
        f.step(g.tuples[5]);
        FAIL() << "expected TraceInconsistency";
    } catch (const TraceInconsistency& e) {
        EXPECT_EQ(e.step(), 6u);
    }
    EXPECT_EQ(f.steps_done(), 5u);
    EXPECT_EQ(f.belief().entries().begin()->first, before);
}

TEST(Filter, UnknownActionIsInputError) {
    auto d = bookshelf_mini_domain();
    LiftedFilter f(d);
    EXPECT_THROW(f.step(tuple("fly", "floor", "table")), InputError);
}

TEST(Filter, PredictionWeightsSumToOne) {
    auto d = test::fixture("five-holes");
    Belief b(d.initial);
    auto j = predict(b, d.rules, d.action_model);
    double total = 0.0;
    for (const auto& p : j.particles) total += p.weight;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(j.dead_end_mass, 0.0);
}

TEST(Filter, ConsistencyChecksBothEnds) {
    auto d = test::fixture("five-holes");
    Observer obs(d.observation, d.initial.table());
    const Rule& r = *d.find_rule("installEccentric");
    auto next = lifted_apply(r, d.initial)[0].state;
    auto y = test::fixture_trace("five-holes")[0];
    EXPECT_TRUE(consistent(obs, y, d.initial, r, next));
    EXPECT_FALSE(consistent(obs, y, d.initial, *d.find_rule("move"), next));
    auto wrong = y;
    wrong.held_next = held({{"screwdriver", 1}});
    EXPECT_FALSE(consistent(obs, wrong, d.initial, r, next));
}

TEST(Filter, StatsSerialize) {
    StepStats s{3, "take", 2, 40, -0.5, "lifted"};
    auto j = to_json(s);
    EXPECT_EQ(j["step"], 3);
    EXPECT_EQ(j["action"], "take");
    EXPECT_EQ(j["lifted_count"], 2);
    EXPECT_EQ(j["ground_count"], 40);
    EXPECT_EQ(j["mode"], "lifted");
    EXPECT_DOUBLE_EQ(j["log_z"].get<double>(), -0.5);
}

TEST(Belief, MergesEqualForms) {
    auto d = test::fixture("eccentric-shelf");
    Belief b;
    b.add(d.initial, 0.25);
    b.add(d.initial, 0.25);
    b.add(d.initial, 0.0);
    EXPECT_EQ(b.size(), 1u);
    EXPECT_DOUBLE_EQ(b.normalize(), 0.5);
    EXPECT_DOUBLE_EQ(b.total(), 1.0);
    EXPECT_EQ(b.ground_count(), 3u);
}
