#include <gtest/gtest.h>

#include "mhgf/canonical.hpp"
#include "mhgf/errors.hpp"
#include "support.hpp"

using namespace mhgf;

namespace {

Conservation conserve(std::initializer_list<const char*> edges, std::initializer_list<const char*> vertices) {
    Conservation c;
    for (auto e : edges) c.edge_labels.insert(Label(e));
    for (auto v : vertices) c.vertex_labels.insert(Label(v));
    return c;
}

}  // namespace

TEST(Label, InternedEqualityAndTextOrder) {
    Label a("zeta"), b("zeta"), c("alpha");
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_LT(c, a);
    EXPECT_EQ(a.str(), "zeta");
    EXPECT_TRUE(Label().empty());
}

TEST(MultiHypergraph, MergesDuplicateEdges) {
    auto g = build_graph({{"x", Label("a")}, {"y", Label("b")}},
                         {{Label("e"), {"x", "y"}, 2}, {Label("e"), {"y", "x"}, 3}}, {});
    ASSERT_EQ(g.edges().size(), 1u);
    EXPECT_EQ(g.edges()[0].multiplicity, 5);
}

TEST(MultiHypergraph, NonPositiveMultiplicities) {
    EXPECT_THROW(build_graph({{"x", Label("a")}}, {{Label("e"), {"x"}, 0}}, {}), StructuralError);
    EXPECT_THROW(build_graph({{"x", Label("a")}}, {{Label("e"), {"x"}, -1}}, {}), StructuralError);
    auto t = build_graph({{"x", Label("a")}}, {}, {}).table();
    EdgeMap m{{make_key(Label("e"), {0}), 0}};
    EXPECT_TRUE(MultiHypergraph::from_edges(t, m).edges().empty());
    m.begin()->second = -2;
    EXPECT_THROW(MultiHypergraph::from_edges(t, m), StructuralError);
}

TEST(MultiHypergraph, RejectsDanglingAndDuplicateIds) {
    EXPECT_THROW(build_graph({{"x", Label("a")}}, {{Label("e"), {"nope"}, 1}}, {}), StructuralError);
    EXPECT_THROW(build_graph({{"x", Label("a")}, {"x", Label("b")}}, {}, {}), StructuralError);
    EXPECT_THROW(build_graph({{"x", Label("a"), 0}}, {}, {}), StructuralError);
}

TEST(MultiHypergraph, ConservationNamesVertex) {
    auto c = conserve({"at"}, {"screw"});
    EXPECT_NO_THROW(build_graph({{"s", Label("screw"), 3}, {"p", Label("place")}},
                                {{Label("at"), {"s", "p"}, 3}}, c));
    try {
        build_graph({{"s", Label("screw"), 3}, {"p", Label("place")}}, {{Label("at"), {"s", "p"}, 2}}, c);
        FAIL() << "expected IntegrityError";
    } catch (const IntegrityError& e) {
        EXPECT_EQ(e.subject(), "s");
    }
}

TEST(MultiHypergraph, RepeatedIncidenceCountsOnce) {
    auto c = conserve({"loop"}, {"v"});
    EXPECT_NO_THROW(build_graph({{"x", Label("v"), 2}}, {{Label("loop"), {"x", "x"}, 2}}, c));
}

TEST(MultiHypergraph, LookupAndIncidence) {
    auto g = build_graph({{"x", Label("a")}, {"y", Label("b")}, {"z", Label("a")}},
                         {{Label("e"), {"x", "y"}, 1}, {Label("f"), {"z"}, 4}}, {});
    auto key = g.table()->key_of({Label("f"), {"z"}, 1});
    EXPECT_EQ(g.multiplicity(key), 4);
    EXPECT_EQ(g.multiplicity(g.table()->key_of({Label("f"), {"x"}, 1})), 0);
    EXPECT_EQ(g.incident(g.table()->index_of("x")).size(), 1u);
    EXPECT_THROW(g.table()->index_of("w"), StructuralError);
    EXPECT_EQ(g.hyperedges().size(), 2u);
}

TEST(Canonical, VersionByteAndDigest) {
    auto g = build_graph({{"x", Label("a")}}, {}, {});
    auto f = canonical_form(g);
    ASSERT_FALSE(f.bytes.empty());
    EXPECT_EQ(static_cast<std::uint8_t>(f.bytes[0]), kCanonicalVersion);
    EXPECT_EQ(f.digest(), canonical_form(g).digest());
}

TEST(Canonical, InvariantUnderPermutation) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        auto g = test::random_graph(rng, 2 + rng() % 7, rng() % 9);
        auto h = test::permuted(g, test::random_permutation(rng, g.vertex_count()));
        ASSERT_EQ(canonical_form(g), canonical_form(h)) << "case " << i;
    }
}

TEST(Canonical, AgreesWithBruteForceIsomorphism) {
    std::mt19937_64 rng(11);
    int iso = 0, non = 0;
    for (int i = 0; i < 400; ++i) {
        std::size_t n = 1 + rng() % 6;
        std::size_t m = rng() % 6;
        auto a = test::random_graph(rng, n, m);
        auto b = (i % 3 == 0) ? test::permuted(a, test::random_permutation(rng, n)) : test::random_graph(rng, n, m);
        bool brute = test::brute_isomorphic(a, b);
        (brute ? iso : non)++;
        ASSERT_EQ(brute, canonical_form(a) == canonical_form(b)) << "case " << i;
        ASSERT_EQ(brute, is_isomorphic(a, b));
    }
    EXPECT_GT(iso, 100);
    EXPECT_GT(non, 100);
}

TEST(Canonical, RegularGraphsNeedIndividualization) {
    // Two 2-regular graphs on 6 vertices: a hexagon and two triangles.
    std::vector<Vertex> vs;
    for (int i = 0; i < 6; ++i) vs.push_back({"v" + std::to_string(i), Label("a")});
    auto ring = [&](std::vector<std::pair<int, int>> es) {
        std::vector<Hyperedge> out;
        for (auto [x, y] : es) out.push_back({Label("e"), {"v" + std::to_string(x), "v" + std::to_string(y)}, 1});
        return build_graph(vs, out, {});
    };
    auto hex = ring({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    auto tri = ring({{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    EXPECT_NE(canonical_form(hex), canonical_form(tri));
    EXPECT_EQ(canonical_form(hex), canonical_form(ring({{0, 2}, {2, 4}, {4, 1}, {1, 3}, {3, 5}, {5, 0}})));
}

TEST(Canonical, MultiplicityAndLabelsMatter) {
    auto a = build_graph({{"x", Label("a")}}, {{Label("e"), {"x"}, 1}}, {});
    auto b = build_graph({{"x", Label("a")}}, {{Label("e"), {"x"}, 2}}, {});
    auto c = build_graph({{"x", Label("a"), 2}}, {{Label("e"), {"x"}, 1}}, {});
    auto d = build_graph({{"x", Label("a")}}, {{Label("f"), {"x"}, 1}}, {});
    EXPECT_NE(canonical_form(a), canonical_form(b));
    EXPECT_NE(canonical_form(a), canonical_form(c));
    EXPECT_NE(canonical_form(a), canonical_form(d));
}
