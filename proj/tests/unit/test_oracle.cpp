#include <gtest/gtest.h>

#include <cmath>

#include "mhgf/errors.hpp"
#include "support.hpp"

using namespace mhgf;

TEST(Oracle, TotalVariationBasics) {
    auto d = test::fixture("eccentric-shelf");
    auto grs = enumerate_groundings(d.initial);
    GroundBelief a, b;
    a.add(grs[0].form, grs[0].graph, 1.0);
    b.add(grs[1].form, grs[1].graph, 1.0);
    EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
    EXPECT_DOUBLE_EQ(total_variation(a, b), 1.0);
    b.add(grs[0].form, grs[0].graph, 1.0);
    b.normalize();
    EXPECT_DOUBLE_EQ(total_variation(a, b), 0.5);
}

TEST(Oracle, ExpandSpreadsUniformly) {
    auto d = test::fixture("eccentric-shelf");
    auto g = expand(Belief(d.initial));
    ASSERT_EQ(g.size(), 3u);
    for (const auto& [form, e] : g.entries()) EXPECT_NEAR(e.weight, 1.0 / 3.0, 1e-15);
}

TEST(Oracle, InitialBeliefMatchesExpansion) {
    auto d = test::fixture("eccentric-shelf");
    GroundFilter f(d);
    EXPECT_EQ(f.initial_stats().mode, "ground");
    EXPECT_NEAR(total_variation(f.belief(), expand(Belief(d.initial))), 0.0, 1e-15);
}

TEST(Oracle, LiftedMatchesGroundOnMiniTraces) {
    auto d = bookshelf_mini_domain();
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto trace = generate_trace(d, seed, 20).tuples;
        auto l = filter_trace(d, trace);
        auto g = ground_filter_trace(d, trace);
        for (double tv : compare(l.beliefs, g.beliefs)) ASSERT_LE(tv, 1e-9) << "seed " << seed;
        for (std::size_t i = 0; i < l.stats.size(); ++i)
            ASSERT_NEAR(l.stats[i].log_z, g.stats[i].log_z, 1e-9) << "seed " << seed << " step " << i;
    }
}

TEST(Oracle, BrokenFixtureDivergesAtStepTwo) {
    auto d = test::fixture("broken-lifted");
    auto trace = test::fixture_trace("broken-lifted");
    auto tv = compare(filter_trace(d, trace).beliefs, ground_filter_trace(d, trace).beliefs);
    ASSERT_EQ(tv.size(), 3u);
    EXPECT_LE(tv[0], 1e-12);
    EXPECT_LE(tv[1], 1e-12);
    EXPECT_NEAR(tv[2], 1.0 / 6.0, 1e-12);
}

TEST(Oracle, GroundFilterRejectsLikeLifted) {
    auto d = bookshelf_mini_domain();
    auto g = generate_trace(d, 9, 15, 7);
    try {
        ground_filter_trace(d, g.tuples);
        FAIL() << "expected TraceInconsistency";
    } catch (const TraceInconsistency& e) {
        EXPECT_EQ(e.step(), 7u);
    }
}

TEST(Oracle, CompareLengthMismatch) {
    auto d = test::fixture("five-holes");
    auto trace = test::fixture_trace("five-holes");
    auto l = filter_trace(d, trace).beliefs;
    auto g = ground_filter_trace(d, trace).beliefs;
    g.pop_back();
    EXPECT_THROW(compare(l, g), StructuralError);
}
