#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#ifndef MHGF_TEST_DATA_DIR
#error "MHGF_TEST_DATA_DIR must be defined"
#endif

namespace mhgf::test {

std::string data_dir() { return MHGF_TEST_DATA_DIR; }

Domain fixture(const std::string& name) { return load_domain(data_dir() + "/" + name + ".json"); }

std::vector<AnnotationTuple> fixture_trace(const std::string& name) {
    return load_trace(data_dir() + "/" + name + ".jsonl");
}

MultiHypergraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t edges) {
    static const char* vlabels[] = {"a", "b"};
    static const char* elabels[] = {"e", "f"};
    auto pick = [&](std::size_t k) { return static_cast<std::size_t>(rng() % k); };
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < n; ++i)
        vs.push_back({"v" + std::to_string(i), Label(vlabels[pick(2)]), static_cast<Count>(1 + pick(2))});
    std::vector<Hyperedge> es;
    for (std::size_t k = 0; k < edges; ++k) {
        Hyperedge e{Label(elabels[pick(2)]), {}, static_cast<Count>(1 + pick(2))};
        std::size_t arity = 1 + pick(3);
        for (std::size_t j = 0; j < arity; ++j) e.incidence.push_back("v" + std::to_string(pick(n)));
        es.push_back(std::move(e));
    }
    return build_graph(std::move(vs), std::move(es), Conservation{});
}

std::vector<VertexIndex> random_permutation(std::mt19937_64& rng, std::size_t n) {
    std::vector<VertexIndex> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

EdgeMap mapped_edges(const MultiHypergraph& g, const std::vector<VertexIndex>& perm) {
    EdgeMap out;
    for (const auto& e : g.edges()) {
        std::vector<VertexIndex> inc;
        for (auto v : e.incidence()) inc.push_back(perm[v]);
        out[make_key(e.label(), std::move(inc))] += e.multiplicity;
    }
    return out;
}

MultiHypergraph permuted(const MultiHypergraph& g, const std::vector<VertexIndex>& perm) {
    const std::size_t n = g.vertex_count();
    std::vector<Vertex> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        vs[perm[i]] = g.vertices()[i];
        vs[perm[i]].id = "w" + std::to_string(perm[i]);
    }
    std::vector<Hyperedge> es;
    for (const auto& e : g.edges()) {
        Hyperedge h{e.label(), {}, e.multiplicity};
        for (auto v : e.incidence()) h.incidence.push_back("w" + std::to_string(perm[v]));
        es.push_back(std::move(h));
    }
    return build_graph(std::move(vs), std::move(es), g.conservation());
}

namespace {

template <class F>
void each_bijection(const MultiHypergraph& a, const MultiHypergraph& b, F&& f) {
    const std::size_t n = a.vertex_count();
    if (n != b.vertex_count()) return;
    std::vector<VertexIndex> p(n);
    std::iota(p.begin(), p.end(), 0);
    const EdgeMap target = b.edge_map();
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const auto& u = a.vertices()[i];
            const auto& w = b.vertices()[p[i]];
            ok = u.label == w.label && u.multiplicity == w.multiplicity;
        }
        if (ok && mapped_edges(a, p) == target && !f(p)) return;
    } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

bool brute_isomorphic(const MultiHypergraph& a, const MultiHypergraph& b) {
    bool found = false;
    each_bijection(a, b, [&](const std::vector<VertexIndex>&) {
        found = true;
        return false;
    });
    return found;
}

std::vector<std::vector<VertexIndex>> brute_automorphisms(const MultiHypergraph& g) {
    std::vector<std::vector<VertexIndex>> out;
    each_bijection(g, g, [&](const std::vector<VertexIndex>& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

std::vector<Match> brute_matches(const Rule& rule, const MultiHypergraph& g) {
    const auto& pv = rule.lhs().vertices;
    const std::size_t k = pv.size(), n = g.vertex_count();
    std::vector<Match> out;
    if (k > n) return out;
    std::vector<VertexIndex> cur(k);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            for (std::size_t e = 0; e < rule.lhs().edges.size(); ++e) {
                const auto& pe = rule.lhs().edges[e];
                std::vector<VertexIndex> inc;
                for (auto var : rule.edge_vars()[e]) inc.push_back(cur[var]);
                if (g.multiplicity(make_key(pe.label, std::move(inc))) < pe.multiplicity) return;
            }
            out.push_back(Match{cur});
            return;
        }
        for (VertexIndex v = 0; v < n; ++v) {
            const auto& vx = g.vertices()[v];
            if (used[v] || (pv[i].label && *pv[i].label != vx.label) || vx.multiplicity < pv[i].multiplicity)
                continue;
            used[v] = true;
            cur[i] = v;
            self(self, i + 1);
            used[v] = false;
        }
    };
    rec(rec, 0);
    return out;
}

std::size_t orbit_count(const std::vector<Match>& matches, const std::vector<std::vector<VertexIndex>>& autos) {
    std::set<std::vector<VertexIndex>> reps;
    for (const auto& m : matches) {
        std::vector<VertexIndex> best = m.assignment;
        for (const auto& a : autos) {
            std::vector<VertexIndex> img;
            for (auto v : m.assignment) img.push_back(a[v]);
            best = std::min(best, img);
        }
        reps.insert(best);
    }
    return reps.size();
}

GroundBelief ground_of(const std::vector<LiftedSuccessor>& s, std::uint64_t cap) {
    GroundBelief out;
    for (const auto& x : s) {
        if (x.state.is_ground()) {
            out.add(x.form, x.state.ground(), x.probability);
            continue;
        }
        auto grs = enumerate_groundings(x.state, cap);
        for (const auto& g : grs) out.add(g.form, g.graph, x.probability / static_cast<double>(grs.size()));
    }
    return out;
}

std::vector<LiftedMultiHypergraph> reachable_lifted(const Domain& d, std::uint64_t seed, std::size_t traces,
                                                    std::size_t length) {
    std::vector<LiftedMultiHypergraph> out;
    std::set<CanonicalForm> seen;
    auto keep = [&](const CanonicalForm& f, const LiftedMultiHypergraph& l) {
        if (seen.insert(f).second) out.push_back(l);
    };
    for (std::size_t t = 0; t < traces; ++t) {
        auto trace = generate_trace(d, seed + t, length).tuples;
        LiftedFilter f(d);
        for (const auto& y : trace) {
            for (const auto& [form, e] : f.belief().entries()) keep(form, e.state);
            for (const auto& p : predict(f.belief(), d.rules, d.action_model).particles)
                keep(p.successor_form, p.successor);
            f.step(y);
        }
        for (const auto& [form, e] : f.belief().entries()) keep(form, e.state);
    }
    return out;
}

double commutation_gap(const Rule& rule, const LiftedMultiHypergraph& l, std::uint64_t cap) {
    auto fast = lifted_apply_detailed(rule, l, cap);
    auto exact = lifted_apply_exact(rule, l, cap);
    if (fast.applicability != exact.applicability) return -1.0;
    auto a = ground_of(fast.successors, cap);
    auto b = ground_of(exact.successors, cap);
    return std::max(total_variation(a, b), std::abs(a.total() - b.total()));
}

}  // namespace mhgf::test
