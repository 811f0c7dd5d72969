#include "mhgf/multi_hypergraph.hpp"

#include <algorithm>

#include "mhgf/errors.hpp"

namespace mhgf {

EdgeKey make_key(Label label, std::vector<VertexIndex> incidence) {
    std::sort(incidence.begin(), incidence.end());
    return EdgeKey{label, std::move(incidence)};
}

bool contains_vertex(const EdgeKey& key, VertexIndex v) {
    return std::binary_search(key.incidence.begin(), key.incidence.end(), v);
}

VertexTable::VertexTable(std::vector<Vertex> vertices, Conservation conservation)
    : vertices_(std::move(vertices)), conservation_(std::move(conservation)) {
    std::sort(vertices_.begin(), vertices_.end(),
              [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    by_id_.reserve(vertices_.size());
    conserved_.reserve(vertices_.size());
    for (VertexIndex i = 0; i < vertices_.size(); ++i) {
        const Vertex& v = vertices_[i];
        if (v.id.empty()) throw StructuralError("vertex id must be non-empty");
        if (v.label.empty()) throw StructuralError("vertex '" + v.id + "' has an empty label");
        if (v.multiplicity < 1)
            throw StructuralError("vertex '" + v.id + "' has multiplicity " +
                                  std::to_string(v.multiplicity) + " (must be >= 1)");
        if (!by_id_.emplace(v.id, i).second)
            throw StructuralError("duplicate vertex id '" + v.id + "'");
        conserved_.push_back(conservation_.binds(v.label));
    }
}

std::optional<VertexIndex> VertexTable::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

VertexIndex VertexTable::index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw StructuralError("incidence refers to unknown vertex '" + std::string(id) + "'");
}

EdgeKey VertexTable::key_of(const Hyperedge& e) const {
    if (e.label.empty()) throw StructuralError("edge has an empty label");
    if (e.incidence.empty())
        throw StructuralError("edge '" + e.label.str() + "' has an empty incidence");
    std::vector<VertexIndex> inc;
    inc.reserve(e.incidence.size());
    for (const auto& id : e.incidence) inc.push_back(index_of(id));
    return make_key(e.label, std::move(inc));
}

void check_conservation(const VertexTable& table, const EdgeMap& edges) {
    const Conservation& cons = table.conservation();
    if (cons.edge_labels.empty() && cons.vertex_labels.empty()) return;
    std::vector<Count> sums(table.size(), 0);
    for (const auto& [key, mult] : edges) {
        if (!cons.counts(key.label)) continue;
        VertexIndex last = static_cast<VertexIndex>(-1);
        for (VertexIndex v : key.incidence) {
            if (v == last) continue;
            last = v;
            sums[v] += mult;
        }
    }
    for (VertexIndex v = 0; v < table.size(); ++v) {
        if (!table.conserved(v)) continue;
        if (sums[v] != table[v].multiplicity) {
            const Vertex& vx = table[v];
            throw IntegrityError(vx.id, "conservation violated at vertex '" + vx.id + "': edges sum to " +
                                            std::to_string(sums[v]) + ", multiplicity is " +
                                            std::to_string(vx.multiplicity));
        }
    }
}

MultiHypergraph::MultiHypergraph()
    : table_(std::make_shared<const VertexTable>(std::vector<Vertex>{}, Conservation{})) {}

MultiHypergraph::MultiHypergraph(VertexTablePtr table, std::vector<Edge> edges)
    : table_(std::move(table)), edges_(std::move(edges)), incident_(table_->size()) {
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        VertexIndex last = static_cast<VertexIndex>(-1);
        for (VertexIndex v : edges_[e].key.incidence) {
            if (v == last) continue;
            last = v;
            incident_[v].push_back(e);
        }
    }
}

MultiHypergraph MultiHypergraph::from_edges(VertexTablePtr table, EdgeMap edges) {
    for (auto it = edges.begin(); it != edges.end();) {
        if (it->second < 0)
            throw StructuralError("edge '" + it->first.label.str() + "' has negative multiplicity");
        if (it->second == 0) {
            it = edges.erase(it);
            continue;
        }
        for (VertexIndex v : it->first.incidence)
            if (v >= table->size()) throw StructuralError("edge incidence index out of range");
        ++it;
    }
    check_conservation(*table, edges);
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (auto& [key, mult] : edges) list.push_back(Edge{key, mult});
    return MultiHypergraph(std::move(table), std::move(list));
}

Count MultiHypergraph::multiplicity(const EdgeKey& key) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                               [](const Edge& e, const EdgeKey& k) { return e.key < k; });
    if (it == edges_.end() || it->key != key) return 0;
    return it->multiplicity;
}

EdgeMap MultiHypergraph::edge_map() const {
    EdgeMap m;
    for (const auto& e : edges_) m.emplace_hint(m.end(), e.key, e.multiplicity);
    return m;
}

std::vector<Hyperedge> MultiHypergraph::hyperedges() const {
    std::vector<Hyperedge> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) {
        Hyperedge h{e.key.label, {}, e.multiplicity};
        for (VertexIndex v : e.key.incidence) h.incidence.push_back((*table_)[v].id);
        out.push_back(std::move(h));
    }
    return out;
}

MultiHypergraph build_graph(std::vector<Vertex> vertices, std::vector<Hyperedge> edges,
                            Conservation conservation) {
    auto table = std::make_shared<const VertexTable>(std::move(vertices), std::move(conservation));
    EdgeMap merged;
    for (const auto& e : edges) {
        if (e.multiplicity < 1)
            throw StructuralError("edge '" + e.label.str() + "' has multiplicity " +
                                  std::to_string(e.multiplicity) + " (must be >= 1)");
        merged[table->key_of(e)] += e.multiplicity;
    }
    return MultiHypergraph::from_edges(std::move(table), std::move(merged));
}

}  // namespace mhgf
