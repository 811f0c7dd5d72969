#include "mhgf/lifted.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mhgf/errors.hpp"

namespace mhgf {
namespace {

bool counted_at(const VertexTable& table, const EdgeKey& key, VertexIndex v) {
    return table.conservation().counts(key.label) && contains_vertex(key, v);
}

}  // namespace

LiftedMultiHypergraph::LiftedMultiHypergraph() : table_(MultiHypergraph().table()) {}

LiftedMultiHypergraph LiftedMultiHypergraph::build(std::vector<Vertex> vertices, std::vector<Hyperedge> fixed_edges,
                                                   std::vector<BoundedEdge> bounded_edges,
                                                   std::vector<TotalConstraint> constraints,
                                                   Conservation conservation) {
    auto table = std::make_shared<const VertexTable>(std::move(vertices), std::move(conservation));
    EdgeMap fixed;
    for (const auto& e : fixed_edges) {
        if (e.multiplicity < 1)
            throw StructuralError("edge '" + e.label.str() + "' has multiplicity " +
                                  std::to_string(e.multiplicity) + " (must be >= 1)");
        fixed[table->key_of(e)] += e.multiplicity;
    }
    std::vector<Bounded> bounded;
    bounded.reserve(bounded_edges.size());
    for (const auto& b : bounded_edges)
        bounded.push_back(Bounded{table->key_of(Hyperedge{b.label, b.incidence, 1}), b.lower, b.upper, {}});
    std::vector<Group> groups;
    for (const auto& c : constraints) groups.push_back(Group{c.tag, c.total, c.edges});
    return from_parts(std::move(table), std::move(fixed), std::move(bounded), std::move(groups));
}

LiftedMultiHypergraph LiftedMultiHypergraph::from_ground(const MultiHypergraph& g) {
    LiftedMultiHypergraph l;
    l.table_ = g.table();
    l.fixed_ = g.edge_map();
    return l;
}

LiftedMultiHypergraph LiftedMultiHypergraph::from_parts(VertexTablePtr table, EdgeMap fixed,
                                                        std::vector<Bounded> bounded, std::vector<Group> groups) {
    const VertexTable& t = *table;
    for (auto it = fixed.begin(); it != fixed.end();) {
        if (it->second < 0)
            throw StructuralError("edge '" + it->first.label.str() + "' has negative multiplicity");
        for (auto v : it->first.incidence)
            if (v >= t.size()) throw StructuralError("edge incidence index out of range");
        it = it->second == 0 ? fixed.erase(it) : std::next(it);
    }
    std::set<EdgeKey> seen;
    for (auto& b : bounded) {
        b.group.reset();
        if (b.lower < 0 || b.lower > b.upper)
            throw StructuralError("bounded edge '" + b.key.label.str() + "' has invalid bounds [" +
                                  std::to_string(b.lower) + ", " + std::to_string(b.upper) + "]");
        for (auto v : b.key.incidence)
            if (v >= t.size()) throw StructuralError("edge incidence index out of range");
        if (fixed.contains(b.key))
            throw StructuralError("edge '" + b.key.label.str() + "' is both fixed and bounded");
        if (!seen.insert(b.key).second)
            throw StructuralError("bounded edge '" + b.key.label.str() + "' listed twice");
    }
    std::set<std::string> tags;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].tag.empty()) throw StructuralError("total constraint needs a non-empty tag");
        if (!tags.insert(groups[g].tag).second)
            throw StructuralError("duplicate total constraint tag '" + groups[g].tag + "'");
        for (auto m : groups[g].members) {
            if (m >= bounded.size())
                throw StructuralError("total constraint '" + groups[g].tag + "' refers to an unknown bounded edge");
            if (bounded[m].group)
                throw StructuralError("bounded edge belongs to more than one total constraint");
            bounded[m].group = g;
        }
    }

    // Conserved vertices with no bounded incident edge must balance exactly.
    std::vector<bool> touched(t.size(), false);
    for (const auto& b : bounded)
        if (t.conservation().counts(b.key.label))
            for (auto v : b.key.incidence) touched[v] = true;
    {
        std::vector<Count> sums(t.size(), 0);
        for (const auto& [key, m] : fixed) {
            if (!t.conservation().counts(key.label)) continue;
            VertexIndex last = static_cast<VertexIndex>(-1);
            for (auto v : key.incidence) {
                if (v != last) sums[v] += m;
                last = v;
            }
        }
        for (VertexIndex v = 0; v < t.size(); ++v)
            if (t.conserved(v) && !touched[v] && sums[v] != t[v].multiplicity)
                throw IntegrityError(t[v].id, "conservation violated at vertex '" + t[v].id + "': edges sum to " +
                                                  std::to_string(sums[v]) + ", multiplicity is " +
                                                  std::to_string(t[v].multiplicity));
    }

    LiftedMultiHypergraph l;
    l.table_ = std::move(table);
    l.fixed_ = std::move(fixed);
    l.bounded_ = std::move(bounded);
    l.groups_ = std::move(groups);

    IntervalSystem sys = l.system();
    if (!sys.propagate()) {
        l.empty_ = true;
        return l;
    }

    // Fix collapsed bounds, then rebuild bounded/group lists in key order.
    std::vector<Count> group_total;
    for (const auto& g : l.groups_) group_total.push_back(g.total);
    std::vector<Bounded> kept;
    for (std::size_t i = 0; i < l.bounded_.size(); ++i) {
        Bounded b = l.bounded_[i];
        b.lower = sys.vars()[i].lower;
        b.upper = sys.vars()[i].upper;
        if (b.lower == b.upper) {
            if (b.lower > 0) l.fixed_[b.key] = b.lower;
            if (b.group) group_total[*b.group] -= b.lower;
            continue;
        }
        kept.push_back(std::move(b));
    }
    std::sort(kept.begin(), kept.end(), [](const Bounded& a, const Bounded& b) { return a.key < b.key; });
    std::map<std::string, Group> by_tag;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!kept[i].group) continue;
        std::size_t g = *kept[i].group;
        auto& grp = by_tag[l.groups_[g].tag];
        grp.tag = l.groups_[g].tag;
        grp.total = group_total[g];
        grp.members.push_back(i);
    }
    for (std::size_t g = 0; g < l.groups_.size(); ++g)
        if (!by_tag.contains(l.groups_[g].tag) && group_total[g] != 0) {
            l.empty_ = true;
            return l;
        }
    l.groups_.clear();
    for (auto& [tag, grp] : by_tag) {
        for (auto m : grp.members) kept[m].group = l.groups_.size();
        l.groups_.push_back(std::move(grp));
    }
    l.bounded_ = std::move(kept);
    if (!l.bounded_.empty() && l.system().count() == 0) l.empty_ = true;
    return l;
}

std::optional<std::size_t> LiftedMultiHypergraph::find_group(std::string_view tag) const {
    for (std::size_t g = 0; g < groups_.size(); ++g)
        if (groups_[g].tag == tag) return g;
    return std::nullopt;
}

std::optional<std::size_t> LiftedMultiHypergraph::find_bounded(const EdgeKey& key) const {
    auto it = std::lower_bound(bounded_.begin(), bounded_.end(), key,
                               [](const Bounded& b, const EdgeKey& k) { return b.key < k; });
    if (it == bounded_.end() || it->key != key) return std::nullopt;
    return static_cast<std::size_t>(it - bounded_.begin());
}

MultiHypergraph LiftedMultiHypergraph::ground() const {
    if (!is_ground()) throw StructuralError("lifted state has bounded edges; it has no single grounding");
    return MultiHypergraph::from_edges(table_, fixed_);
}

MultiHypergraph LiftedMultiHypergraph::grounding(std::span<const Count> values) const {
    if (values.size() != bounded_.size()) throw StructuralError("grounding assignment has the wrong length");
    EdgeMap edges = fixed_;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > 0) edges[bounded_[i].key] = values[i];
    return MultiHypergraph::from_edges(table_, std::move(edges));
}

IntervalSystem LiftedMultiHypergraph::system() const {
    const VertexTable& t = *table_;
    std::vector<IntervalVar> vars;
    vars.reserve(bounded_.size());
    for (const auto& b : bounded_) vars.push_back({b.lower, b.upper});
    std::vector<SumConstraint> cons;
    for (const auto& g : groups_) cons.push_back({g.members, g.total});

    std::vector<std::vector<std::size_t>> incident(t.size());
    for (std::size_t i = 0; i < bounded_.size(); ++i)
        for (VertexIndex v = 0; v < t.size(); ++v)
            if (t.conserved(v) && counted_at(t, bounded_[i].key, v)) incident[v].push_back(i);
    for (VertexIndex v = 0; v < t.size(); ++v) {
        if (incident[v].empty()) continue;
        Count rhs = t[v].multiplicity;
        for (const auto& [key, m] : fixed_)
            if (counted_at(t, key, v)) rhs -= m;
        cons.push_back({incident[v], rhs});
    }
    return IntervalSystem(std::move(vars), std::move(cons));
}

std::vector<Hyperedge> LiftedMultiHypergraph::fixed_edges() const {
    std::vector<Hyperedge> out;
    for (const auto& [key, m] : fixed_) {
        Hyperedge h{key.label, {}, m};
        for (auto v : key.incidence) h.incidence.push_back((*table_)[v].id);
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<BoundedEdge> LiftedMultiHypergraph::bounded_edges() const {
    std::vector<BoundedEdge> out;
    for (const auto& b : bounded_) {
        BoundedEdge e{b.key.label, {}, b.lower, b.upper};
        for (auto v : b.key.incidence) e.incidence.push_back((*table_)[v].id);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<TotalConstraint> LiftedMultiHypergraph::constraints() const {
    std::vector<TotalConstraint> out;
    for (const auto& g : groups_) out.push_back({g.tag, g.members, g.total});
    return out;
}

std::vector<Grounding> enumerate_groundings(const LiftedMultiHypergraph& l, std::uint64_t cap) {
    if (l.empty_support()) return {};
    if (l.is_ground()) {
        auto g = l.ground();
        auto form = canonical_form(g);
        return {Grounding{std::move(g), std::move(form)}};
    }
    IntervalSystem sys = l.system();
    std::uint64_t n = sys.count();
    if (n > cap)
        throw EnumerationLimitError("lifted state has " + std::to_string(n) + " groundings, cap is " +
                                    std::to_string(cap));
    std::vector<Grounding> out;
    out.reserve(n);
    sys.enumerate([&](std::span<const Count> values) {
        auto g = l.grounding(values);
        auto form = canonical_form(g);
        out.push_back(Grounding{std::move(g), std::move(form)});
    });
    std::stable_sort(out.begin(), out.end(), [](const Grounding& a, const Grounding& b) { return a.form < b.form; });
    return out;
}

std::vector<MultiHypergraph> groundings(const LiftedMultiHypergraph& l, std::uint64_t cap) {
    std::vector<MultiHypergraph> out;
    for (auto& g : enumerate_groundings(l, cap)) out.push_back(std::move(g.graph));
    return out;
}

std::uint64_t count_groundings(const LiftedMultiHypergraph& l) {
    if (l.empty_support()) return 0;
    if (l.is_ground()) return 1;
    return l.system().count();
}

bool contains(const LiftedMultiHypergraph& l, const MultiHypergraph& g, std::uint64_t cap) {
    if (l.table()->size() != g.vertex_count()) return false;
    auto form = canonical_form(g);
    for (const auto& gr : enumerate_groundings(l, cap))
        if (gr.form == form) return true;
    return false;
}

namespace detail {

ColoredHypergraph colored(const LiftedMultiHypergraph& l) {
    const VertexTable& t = *l.table();
    ColoredHypergraph c;
    for (const auto& v : t.vertices()) c.vertex_colors.push_back(vertex_color(v));
    for (const auto& [key, m] : l.fixed()) c.edges.push_back({fixed_edge_color(key.label, m), key.incidence});
    for (const auto& b : l.bounded()) {
        std::string color;
        put_u8(color, 1);
        put_str(color, b.key.label.str());
        put_u64(color, static_cast<std::uint64_t>(b.lower));
        put_u64(color, static_cast<std::uint64_t>(b.upper));
        put_u8(color, b.group ? 1 : 0);
        if (b.group) {
            const auto& g = l.groups()[*b.group];
            put_str(color, g.tag);
            put_u64(color, static_cast<std::uint64_t>(g.total));
        }
        c.edges.push_back({std::move(color), b.key.incidence});
    }
    return c;
}

}  // namespace detail

CanonicalForm canonical_form_lifted(const LiftedMultiHypergraph& l) {
    return CanonicalForm{detail::canonicalize(detail::colored(l))};
}

}  // namespace mhgf
