#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mhgf/label.hpp"

namespace mhgf {

using Count = std::int64_t;
using VertexIndex = std::uint32_t;

struct Vertex {
    std::string id;
    Label label;
    Count multiplicity = 1;
};

/// Hyperedge as supplied by callers: incidence is a multiset of vertex ids.
struct Hyperedge {
    Label label;
    std::vector<std::string> incidence;
    Count multiplicity = 1;
};

/// Which edge labels are summed, and at which vertices, by the
/// multiplicity-conservation invariant.
///
/// A vertex participates when its label is in `vertex_labels`; for such a
/// vertex the multiplicities of all incident edges whose label is in
/// `edge_labels` must sum to the vertex multiplicity. An edge that lists the
/// same vertex twice is counted once for that vertex.
struct Conservation {
    std::set<Label> edge_labels;
    std::set<Label> vertex_labels;

    bool counts(Label edge_label) const { return edge_labels.contains(edge_label); }
    bool binds(Label vertex_label) const { return vertex_labels.contains(vertex_label); }

    friend bool operator==(const Conservation&, const Conservation&) = default;
};

/// Edge identity inside one vertex universe: label plus sorted incidence.
struct EdgeKey {
    Label label;
    std::vector<VertexIndex> incidence;

    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
    friend auto operator<=>(const EdgeKey& a, const EdgeKey& b) {
        if (auto c = a.label <=> b.label; c != 0) return c;
        return a.incidence <=> b.incidence;
    }
};

EdgeKey make_key(Label label, std::vector<VertexIndex> incidence);

bool contains_vertex(const EdgeKey& key, VertexIndex v);

using EdgeMap = std::map<EdgeKey, Count>;

/// Immutable vertex universe shared by every state of one system: rules never
/// create or destroy vertices, so successors reuse their predecessor's table.
class VertexTable {
public:
    VertexTable(std::vector<Vertex> vertices, Conservation conservation);

    std::size_t size() const noexcept { return vertices_.size(); }
    const Vertex& operator[](VertexIndex i) const { return vertices_[i]; }
    std::span<const Vertex> vertices() const noexcept { return vertices_; }

    std::optional<VertexIndex> find(std::string_view id) const;
    /// Throws StructuralError for an unknown id.
    VertexIndex index_of(std::string_view id) const;

    const Conservation& conservation() const noexcept { return conservation_; }
    bool conserved(VertexIndex v) const { return conserved_[v]; }

    /// Resolve a Hyperedge's ids into a key.
    EdgeKey key_of(const Hyperedge& e) const;

private:
    std::vector<Vertex> vertices_;
    std::unordered_map<std::string, VertexIndex> by_id_;
    Conservation conservation_;
    std::vector<bool> conserved_;
};

using VertexTablePtr = std::shared_ptr<const VertexTable>;

/// A ground system state: labeled vertices and labeled hyperedges, each with
/// a positive multiplicity. Immutable once built.
class MultiHypergraph {
public:
    struct Edge {
        EdgeKey key;
        Count multiplicity;

        Label label() const { return key.label; }
        const std::vector<VertexIndex>& incidence() const { return key.incidence; }
    };

    /// The empty graph.
    MultiHypergraph();

    /// Validates positivity and conservation. Entries with multiplicity 0 are
    /// dropped; negative entries are a structural error.
    static MultiHypergraph from_edges(VertexTablePtr table, EdgeMap edges);

    const VertexTablePtr& table() const noexcept { return table_; }
    std::span<const Vertex> vertices() const noexcept { return table_->vertices(); }
    std::size_t vertex_count() const noexcept { return table_->size(); }
    const Conservation& conservation() const noexcept { return table_->conservation(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    /// 0 when the edge is absent.
    Count multiplicity(const EdgeKey& key) const;
    /// Indices into edges() of every edge containing `v`.
    const std::vector<std::uint32_t>& incident(VertexIndex v) const { return incident_[v]; }

    EdgeMap edge_map() const;
    /// Edges rendered back to vertex ids.
    std::vector<Hyperedge> hyperedges() const;

private:
    MultiHypergraph(VertexTablePtr table, std::vector<Edge> edges);

    VertexTablePtr table_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::uint32_t>> incident_;
};

/// Construct and validate a graph. Duplicate (label, incidence) edges are
/// merged by summing multiplicities.
MultiHypergraph build_graph(std::vector<Vertex> vertices, std::vector<Hyperedge> edges,
                            Conservation conservation);

/// Throws IntegrityError naming the first vertex whose conserved sum differs
/// from its multiplicity.
void check_conservation(const VertexTable& table, const EdgeMap& edges);

}  // namespace mhgf
