#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mhgf/errors.hpp"
#include "mhgf/interval_system.hpp"

using namespace mhgf;

namespace {

std::uint64_t brute_count(const IntervalSystem& s) {
    const auto& vars = s.vars();
    std::vector<Count> x(vars.size());
    std::uint64_t n = 0;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == vars.size()) {
            for (const auto& c : s.constraints()) {
                Count sum = 0;
                for (auto v : c.vars) sum += x[v];
                if (sum != c.total) return;
            }
            ++n;
            return;
        }
        for (Count v = vars[i].lower; v <= vars[i].upper; ++v) {
            x[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return n;
}

IntervalSystem random_system(std::mt19937_64& rng) {
    std::size_t n = 1 + rng() % 6;
    std::vector<IntervalVar> vars;
    for (std::size_t i = 0; i < n; ++i) {
        Count lo = static_cast<Count>(rng() % 3);
        vars.push_back({lo, lo + static_cast<Count>(rng() % 4)});
    }
    std::vector<SumConstraint> cons;
    std::size_t m = rng() % 4;
    for (std::size_t k = 0; k < m; ++k) {
        SumConstraint c;
        for (std::size_t i = 0; i < n; ++i)
            if (rng() % 2) c.vars.push_back(i);
        if (c.vars.empty()) continue;
        c.total = static_cast<Count>(rng() % (3 * c.vars.size() + 2));
        cons.push_back(c);
    }
    return IntervalSystem(vars, cons);
}

}  // namespace

TEST(IntervalSystem, CountMatchesBruteForce) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        auto s = random_system(rng);
        ASSERT_EQ(s.count(), brute_count(s)) << "case " << i;
    }
}

TEST(IntervalSystem, EnumerateListsDistinctSolutions) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto s = random_system(rng);
        std::set<std::vector<Count>> seen;
        s.enumerate([&](std::span<const Count> x) {
            for (const auto& c : s.constraints()) {
                Count sum = 0;
                for (auto v : c.vars) sum += x[v];
                ASSERT_EQ(sum, c.total);
            }
            for (std::size_t k = 0; k < x.size(); ++k) {
                ASSERT_GE(x[k], s.vars()[k].lower);
                ASSERT_LE(x[k], s.vars()[k].upper);
            }
            seen.insert(std::vector<Count>(x.begin(), x.end()));
        });
        ASSERT_EQ(seen.size(), s.count()) << "case " << i;
    }
}

TEST(IntervalSystem, PropagationKeepsSolutions) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        auto s = random_system(rng);
        auto before = brute_count(s);
        IntervalSystem t = s;
        bool ok = t.propagate();
        if (!ok) {
            ASSERT_EQ(before, 0u) << "case " << i;
            continue;
        }
        ASSERT_EQ(brute_count(t), before) << "case " << i;
        for (std::size_t k = 0; k < t.vars().size(); ++k) {
            ASSERT_GE(t.vars()[k].lower, s.vars()[k].lower);
            ASSERT_LE(t.vars()[k].upper, s.vars()[k].upper);
        }
    }
}

TEST(IntervalSystem, TightensAgainstTotal) {
    IntervalSystem s({{0, 2}, {0, 4}}, {{{0, 1}, 4}});
    ASSERT_TRUE(s.propagate());
    EXPECT_EQ(s.vars()[1].lower, 2);
    EXPECT_EQ(s.vars()[1].upper, 4);
    EXPECT_EQ(s.count(), 3u);
}

TEST(IntervalSystem, DetectsInfeasibility) {
    IntervalSystem s({{0, 1}, {0, 1}}, {{{0, 1}, 3}});
    EXPECT_FALSE(s.propagate());
    EXPECT_EQ(IntervalSystem({{0, 1}, {0, 1}}, {{{0, 1}, 3}}).count(), 0u);
}

TEST(IntervalSystem, IndependentComponentsMultiply) {
    IntervalSystem s({{0, 3}, {0, 3}, {0, 2}, {0, 2}}, {{{0, 1}, 3}, {{2, 3}, 2}});
    EXPECT_EQ(s.count(), 4u * 3u);
}

TEST(IntervalSystem, OverflowIsReported) {
    std::vector<IntervalVar> vars(40, IntervalVar{0, 1000});
    IntervalSystem s(vars, {});
    EXPECT_THROW(s.count(), EnumerationLimitError);
}
