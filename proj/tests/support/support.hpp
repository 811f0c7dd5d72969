#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mhgf/domain_io.hpp"
#include "mhgf/oracle.hpp"

namespace mhgf::test {

/// Directory holding the JSON fixtures.
std::string data_dir();
Domain fixture(const std::string& name);
std::vector<AnnotationTuple> fixture_trace(const std::string& name);

/// Random graph with `n` vertices over a tiny label alphabet and no
/// conservation.
MultiHypergraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t edges);

/// Same graph with vertex i moved to position perm[i] and renamed.
MultiHypergraph permuted(const MultiHypergraph& g, const std::vector<VertexIndex>& perm);

std::vector<VertexIndex> random_permutation(std::mt19937_64& rng, std::size_t n);

/// Edge multiset of g under a vertex relabelling.
EdgeMap mapped_edges(const MultiHypergraph& g, const std::vector<VertexIndex>& perm);

/// Isomorphism by trying every vertex bijection.
bool brute_isomorphic(const MultiHypergraph& a, const MultiHypergraph& b);

/// Every automorphism of g, by exhaustion.
std::vector<std::vector<VertexIndex>> brute_automorphisms(const MultiHypergraph& g);

/// Injective embeddings of the rule pattern, checked edge by edge.
std::vector<Match> brute_matches(const Rule& rule, const MultiHypergraph& g);

/// Number of automorphism orbits on a set of matches.
std::size_t orbit_count(const std::vector<Match>& matches, const std::vector<std::vector<VertexIndex>>& autos);

/// Ground distribution of lifted successors: each puts p / |groundings| on
/// each of its groundings.
GroundBelief ground_of(const std::vector<LiftedSuccessor>& s, std::uint64_t cap = kDefaultEnumerationCap);

/// Lifted states met while filtering simulated traces: every belief entry
/// and every predicted successor.
std::vector<LiftedMultiHypergraph> reachable_lifted(const Domain& d, std::uint64_t seed, std::size_t traces,
                                                    std::size_t length);

/// Largest |lifted - exact| deviation over groundings, or -1 when the
/// applicabilities disagree.
double commutation_gap(const Rule& rule, const LiftedMultiHypergraph& l, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace mhgf::test
