#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mhgf/canonical.hpp"
#include "mhgf/interval_system.hpp"
#include "mhgf/multi_hypergraph.hpp"

namespace mhgf {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Edge whose multiplicity is only known to lie in [lower, upper].
struct BoundedEdge {
    Label label;
    std::vector<std::string> incidence;
    Count lower = 0;
    Count upper = 0;
};

/// The bounded edges listed in `edges` (indices into the bounded-edge list)
/// sum to exactly `total`. Groups are disjoint and their tags unique.
struct TotalConstraint {
    std::string tag;
    std::vector<std::size_t> edges;
    Count total = 0;
};

/// Uniform distribution over every ground multi-hypergraph obtained by fixing
/// each bounded edge to a value within its bounds such that all group totals
/// and the conservation invariant hold.
///
/// Construction normalizes: bounds are tightened by propagation over group
/// totals and per-vertex conservation, bounded edges whose bounds coincide
/// become fixed edges (absent at 0), and groups left without bounded members
/// are dropped. An LMHG can have empty support; callers check
/// `empty_support()`.
class LiftedMultiHypergraph {
public:
    struct Bounded {
        EdgeKey key;
        Count lower;
        Count upper;
        std::optional<std::size_t> group;
    };
    struct Group {
        std::string tag;
        Count total;
        std::vector<std::size_t> members;  // indices into bounded()
    };

    LiftedMultiHypergraph();

    static LiftedMultiHypergraph build(std::vector<Vertex> vertices, std::vector<Hyperedge> fixed_edges,
                                       std::vector<BoundedEdge> bounded_edges,
                                       std::vector<TotalConstraint> constraints, Conservation conservation);

    /// Normalizing constructor over an existing vertex table.
    static LiftedMultiHypergraph from_parts(VertexTablePtr table, EdgeMap fixed, std::vector<Bounded> bounded,
                                            std::vector<Group> groups);

    static LiftedMultiHypergraph from_ground(const MultiHypergraph& g);

    const VertexTablePtr& table() const noexcept { return table_; }
    const EdgeMap& fixed() const noexcept { return fixed_; }
    const std::vector<Bounded>& bounded() const noexcept { return bounded_; }
    const std::vector<Group>& groups() const noexcept { return groups_; }

    bool is_ground() const noexcept { return bounded_.empty(); }
    bool empty_support() const noexcept { return empty_; }

    std::optional<std::size_t> find_group(std::string_view tag) const;
    std::optional<std::size_t> find_bounded(const EdgeKey& key) const;

    /// The single grounding of a ground LMHG.
    MultiHypergraph ground() const;
    /// Grounding for an assignment indexed like bounded().
    MultiHypergraph grounding(std::span<const Count> values) const;

    /// Variables are the bounded edges; constraints are the group totals
    /// plus one conservation equation per conserved vertex touching a
    /// bounded edge.
    IntervalSystem system() const;

    std::vector<Hyperedge> fixed_edges() const;
    std::vector<BoundedEdge> bounded_edges() const;
    std::vector<TotalConstraint> constraints() const;

private:
    VertexTablePtr table_;
    EdgeMap fixed_;
    std::vector<Bounded> bounded_;
    std::vector<Group> groups_;
    bool empty_ = false;
};

struct Grounding {
    MultiHypergraph graph;
    CanonicalForm form;
};

/// Every grounding with its canonical form, sorted by form. Throws
/// EnumerationLimitError when the grounding count exceeds `cap`.
std::vector<Grounding> enumerate_groundings(const LiftedMultiHypergraph& l,
                                            std::uint64_t cap = kDefaultEnumerationCap);

std::vector<MultiHypergraph> groundings(const LiftedMultiHypergraph& l,
                                        std::uint64_t cap = kDefaultEnumerationCap);

/// Computed without materializing groundings.
std::uint64_t count_groundings(const LiftedMultiHypergraph& l);

bool contains(const LiftedMultiHypergraph& l, const MultiHypergraph& g,
              std::uint64_t cap = kDefaultEnumerationCap);

/// Equal to canonical_form(l.ground()) when l is ground. Bounded edges are
/// colored `u8 0x01, u32 len, label, u64 lower, u64 upper, u8 grouped` and,
/// when grouped, `u32 len, tag, u64 total`.
CanonicalForm canonical_form_lifted(const LiftedMultiHypergraph& l);

namespace detail {
ColoredHypergraph colored(const LiftedMultiHypergraph& l);
}

}  // namespace mhgf
